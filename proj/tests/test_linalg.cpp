#include "qhomology/elimination.hpp"
#include "qhomology/nilpotent.hpp"
#include "qhomology/subspace.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace qh;

namespace {

ExactMatrix random_matrix(const FieldContext& ctx, int rows, int cols,
                          std::mt19937_64& rng, int fill_percent = 40) {
    ExactMatrix m(ctx, rows, cols);
    std::uniform_int_distribution<int> pct(0, 99);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (pct(rng) < fill_percent)
                m.set(r, c, random_palette_scalar(ctx, rng, false));
    return m;
}

} // namespace

TEST_CASE("matrix product against a hand example") {
    const auto& f = field_new(3);
    // [[1, q], [0, 2]] * [[q, 0], [1, -1]] = [[2q, -q], [2, -2]]
    ExactMatrix a(f, 2, 2), b(f, 2, 2);
    a.set(0, 0, f.one());
    a.set(0, 1, f.q_pow(1));
    a.set(1, 1, f.from_int(2));
    b.set(0, 0, f.q_pow(1));
    b.set(1, 0, f.one());
    b.set(1, 1, -f.one());
    ExactMatrix p = a * b;
    CHECK(p.get(0, 0) == f.q_pow(1) + f.q_pow(1));
    CHECK(p.get(0, 1) == -f.q_pow(1));
    CHECK(p.get(1, 0) == f.from_int(2));
    CHECK(p.get(1, 1) == f.from_int(-2));
}

TEST_CASE("transpose, kron and apply behave consistently") {
    const auto& f = field_new(2);
    std::mt19937_64 rng(7);
    ExactMatrix a = random_matrix(f, 3, 4, rng);
    ExactMatrix b = random_matrix(f, 2, 2, rng);
    CHECK(a.transpose().transpose() == a);
    CHECK((a.kron(b)).rows() == 6);
    CHECK((a.kron(b)).cols() == 8);
    // (A kron B)(x kron y) = (Ax) kron (By), checked entrywise
    Vec x = zero_vec(f, 4), y = zero_vec(f, 2);
    x[1] = f.q_pow(1);
    x[3] = f.one();
    y[0] = -f.one();
    y[1] = f.q_pow(-1);
    Vec xy = zero_vec(f, 8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) xy[static_cast<size_t>(i * 2 + j)] = x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
    Vec lhs = a.kron(b).apply(xy);
    Vec ax = a.apply(x), by = b.apply(y);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(lhs[static_cast<size_t>(i * 2 + j)] == ax[static_cast<size_t>(i)] * by[static_cast<size_t>(j)]);
}

TEST_CASE("rref is canonical: both pivot strategies agree bit for bit") {
    for (int h : {2, 3}) {
        const auto& f = field_new(h);
        std::mt19937_64 rng(100 + h);
        for (int t = 0; t < 20; ++t) {
            ExactMatrix m = random_matrix(f, 6, 8, rng);
            RrefResult a = rref(m, PivotStrategy::FewestNonzeros);
            RrefResult b = rref(m, PivotStrategy::FractionFree);
            CHECK(a.rank == b.rank);
            CHECK(a.pivot_cols == b.pivot_cols);
            CHECK(a.reduced == b.reduced);
        }
    }
}

TEST_CASE("rank equals rank of the transpose") {
    const auto& f = field_new(3);
    std::mt19937_64 rng(42);
    for (int t = 0; t < 15; ++t) {
        ExactMatrix m = random_matrix(f, 5, 7, rng);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("kernel basis annihilates and has complementary dimension") {
    const auto& f = field_new(2);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 15; ++t) {
        ExactMatrix m = random_matrix(f, 4, 6, rng);
        auto ker = kernel_basis(m);
        CHECK(static_cast<int>(ker.size()) == 6 - rank(m));
        for (const Vec& v : ker) CHECK(is_zero_vec(m.apply(v)));
        // vectors are independent: stacking them has full rank
        Subspace s = Subspace::from_vectors(f, 6, ker);
        CHECK(s.dim() == static_cast<int>(ker.size()));
    }
}

TEST_CASE("image basis spans exactly the column space") {
    const auto& f = field_new(3);
    std::mt19937_64 rng(11);
    ExactMatrix m = random_matrix(f, 5, 4, rng);
    ExactMatrix img = image_basis(m);
    CHECK(img.rows() == rank(m));
    Subspace s = Subspace::from_rows(img);
    for (int c = 0; c < m.cols(); ++c) {
        Vec col = zero_vec(f, 5);
        for (int r = 0; r < 5; ++r) col[static_cast<size_t>(r)] = m.get(r, c);
        CHECK(s.contains(col));
    }
}

TEST_CASE("subspace sum, intersection and the dimension formula") {
    const auto& f = field_new(2);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        Subspace a = Subspace::from_rows(random_matrix(f, 3, 6, rng));
        Subspace b = Subspace::from_rows(random_matrix(f, 3, 6, rng));
        Subspace s = sum(a, b);
        Subspace i = intersect(a, b);
        CHECK(s.dim() + i.dim() == a.dim() + b.dim());
        CHECK(a.contains(i));
        CHECK(b.contains(i));
        CHECK(s.contains(a));
        CHECK(s.contains(b));
    }
}

TEST_CASE("quotient dimension demands nesting") {
    const auto& f = field_new(2);
    ExactMatrix g(f, 2, 4);
    g.set(0, 0, f.one());
    g.set(1, 1, f.one());
    Subspace big = Subspace::from_rows(g);
    ExactMatrix g2(f, 1, 4);
    g2.set(0, 0, f.one());
    Subspace small = Subspace::from_rows(g2);
    CHECK(quotient_dim_mod(big, small) == 1);
    ExactMatrix g3(f, 1, 4);
    g3.set(0, 3, f.one());
    Subspace off = Subspace::from_rows(g3);
    CHECK_THROWS_AS(quotient_dim_mod(big, off), std::invalid_argument);
}

TEST_CASE("echelon completion yields quotient representatives") {
    const auto& f = field_new(3);
    std::mt19937_64 rng(17);
    Subspace big = Subspace::from_rows(random_matrix(f, 5, 6, rng, 60));
    Subspace small = Subspace::from_vectors(f, 6, {dense_row(big.basis(), 0)});
    auto reps = big.complete_basis_over(small);
    CHECK(static_cast<int>(reps.size()) == big.dim() - small.dim());
    Subspace rebuilt = small;
    for (const Vec& v : reps) {
        CHECK(big.contains(v));
        CHECK_FALSE(rebuilt.contains(v));
        std::vector<Vec> vv{v};
        rebuilt = sum(rebuilt, Subspace::from_vectors(f, 6, vv));
    }
    CHECK(rebuilt == big);
}

TEST_CASE("shift block rank profile and multiplicities") {
    const auto& f = field_new(3);
    ExactMatrix q3 = shift_block(f, 3);
    NilpotentProfile p = nilpotent_profile(q3, 3);
    CHECK(p.ranks == std::vector<int>{3, 2, 1, 0});
    CHECK(p.multiplicities == std::vector<int>{0, 0, 1});
}

TEST_CASE("block diagonal multiplicities round trip") {
    const auto& f = field_new(4);
    std::vector<int> mult{2, 0, 1, 1}; // two 1-blocks, one 3-block, one 4-block
    ExactMatrix n = block_diag_nilpotent(f, mult);
    CHECK(n.rows() == 2 + 3 + 4);
    NilpotentProfile p = nilpotent_profile(n, 4);
    CHECK(p.multiplicities == mult);
}

TEST_CASE("non-nilpotent inputs report the smallest failing power") {
    const auto& f = field_new(3);
    // identity: rank stabilizes immediately
    try {
        nilpotent_profile(ExactMatrix::identity(f, 3), 3);
        FAIL("expected NotNilpotentError");
    } catch (const NotNilpotentError& e) {
        CHECK(e.smallest_failing_power == 1);
    }
    // a 4-block is nilpotent but not 3-nilpotent
    try {
        nilpotent_profile(shift_block(f, 4), 3);
        FAIL("expected NotNilpotentError");
    } catch (const NotNilpotentError& e) {
        CHECK(e.smallest_failing_power == 3);
    }
}

TEST_CASE("random nilpotents: conjugation invariance and power nesting") {
    for (int h : {2, 3, 4}) {
        const auto& f = field_new(h);
        std::mt19937_64 rng(23 + h);
        for (int t = 0; t < 8; ++t) {
            std::vector<int> mult = random_multiplicities(h, rng);
            ExactMatrix n = random_nilpotent(f, mult, rng());
            NilpotentProfile p = nilpotent_profile(n, h);
            CHECK(p.multiplicities == mult);
            int weighted = 0;
            for (int m = 1; m <= h; ++m) weighted += m * p.multiplicities[static_cast<size_t>(m - 1)];
            CHECK(weighted == p.dim);
            for (int k = 1; k < h; ++k) {
                // Im(N^{h-k}) sits inside Ker(N^k)
                ExactMatrix img = image_basis(n.pow(h - k));
                ExactMatrix nk = n.pow(k);
                for (int r = 0; r < img.rows(); ++r)
                    CHECK(is_zero_vec(nk.apply(dense_row(img, r))));
            }
        }
    }
}
