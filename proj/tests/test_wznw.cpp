#include "qhomology/wznw.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>

using namespace qh;

namespace {

const ZeroModeModel& model(int h) {
    static std::map<int, ZeroModeModel> cache;
    auto it = cache.find(h);
    if (it == cache.end()) it = cache.emplace(h, build_zero_mode_model(h)).first;
    return it->second;
}

void require_all_pass(const CheckReport& rep) {
    auto fail = rep.first_failure();
    INFO("first failing check: " << (fail ? fail->id : "none")
                                 << " witness: " << (fail ? fail->witness : ""));
    REQUIRE(rep.all_pass());
}

} // namespace

TEST_CASE("state ladder enumerates admissible labels in order") {
    FockBasis b2 = fock_basis(2);
    std::vector<std::pair<int, int>> expected{{1, 0}, {2, 0}, {2, 1}, {3, 1}};
    CHECK(b2.states == expected);
    CHECK(b2.idx(2, 1) == 2);
    CHECK(b2.idx(3, 0) == -1);
    CHECK(b2.weight_of(b2.idx(1, 0)) == 0);

    for (int h = 2; h <= 5; ++h) CHECK(fock_basis(h).dim() == h * h);

    FockBasis b5 = fock_basis(5);
    std::vector<int> per_p(10, 0);
    for (int i = 0; i < b5.dim(); ++i) per_p[static_cast<size_t>(b5.p_of(i))]++;
    CHECK(per_p == std::vector<int>{0, 1, 2, 3, 4, 5, 4, 3, 2, 1});

    CHECK_THROWS_AS(fock_basis(1), std::invalid_argument);
}

TEST_CASE("solved lowering operators match the independent closed form") {
    for (int h : {2, 3}) {
        const ZeroModeModel& mm = model(h);
        const FieldContext& ctx = mm.ctx();
        const FockBasis& b = mm.fock;
        ExactMatrix exp21(ctx, b.dim(), b.dim()), exp22(ctx, b.dim(), b.dim());
        for (int s = 0; s < b.dim(); ++s) {
            int p = b.p_of(s), m = b.m_of(s);
            int t1 = b.idx(p - 1, m);
            if (t1 >= 0) exp21.set(t1, s, -(ctx.q_half_pow(1) * q_int(ctx, p - m - 1)));
            int t2 = b.idx(p - 1, m - 1);
            if (t2 >= 0) exp22.set(t2, s, ctx.q_half_pow(2 * (m - p) + 1) * q_int(ctx, m));
        }
        INFO("height " << h);
        CHECK(mm.a[1][0] == exp21);
        CHECK(mm.a[1][1] == exp22);
    }
}

TEST_CASE("recursed symmetry action matches the independent closed form") {
    for (int h : {2, 3}) {
        const ZeroModeModel& mm = model(h);
        const FieldContext& ctx = mm.ctx();
        const FockBasis& b = mm.fock;
        ExactMatrix eE(ctx, b.dim(), b.dim()), eF(ctx, b.dim(), b.dim()),
            eK(ctx, b.dim(), b.dim());
        ExactMatrix eEb(ctx, b.dim(), b.dim()), eFb(ctx, b.dim(), b.dim()),
            eKb(ctx, b.dim(), b.dim());
        for (int s = 0; s < b.dim(); ++s) {
            int p = b.p_of(s), m = b.m_of(s);
            int up = b.idx(p, m + 1);
            if (up >= 0) {
                eE.set(up, s, q_int(ctx, p - 1 - m));
                eFb.set(up, s, -(ctx.q_pow(1) * q_int(ctx, p - 1 - m)));
            }
            int dn = b.idx(p, m - 1);
            if (dn >= 0) {
                eF.set(dn, s, q_int(ctx, m));
                eEb.set(dn, s, -(ctx.q_pow(-1) * q_int(ctx, m)));
            }
            eK.set(s, s, ctx.q_pow(2 * m - p + 1));
            eKb.set(s, s, ctx.q_pow(p - 1 - 2 * m));
        }
        INFO("height " << h);
        CHECK(mm.E == eE);
        CHECK(mm.F == eF);
        CHECK(mm.qH == eK);
        CHECK(mm.Ebar == eEb);
        CHECK(mm.Fbar == eFb);
        CHECK(mm.qHbar == eKb);
    }
}

TEST_CASE("antichiral generators are the index-swapped chiral ones") {
    const ZeroModeModel& mm = model(2);
    for (int al = 1; al <= 2; ++al)
        for (int j = 1; j <= 2; ++j) CHECK(mm.abar[al - 1][j - 1] == mm.a[j - 1][al - 1]);
}

TEST_CASE("relation suite passes on the constructed model") {
    for (int h : {2, 3}) {
        const CheckReport rep = verify_matrix_relations(model(h));
        INFO("height " << h);
        CHECK(rep.checks.size() >= 80);
        require_all_pass(rep);
    }
}

TEST_CASE("a corrupted generator entry is caught with a cell witness") {
    ZeroModeModel bad = model(2);
    bad.a[1][0].add_to(0, 1, bad.ctx().one());
    CheckReport rep = verify_matrix_relations(bad);
    REQUIRE_FALSE(rep.all_pass());
    const Check* fail = rep.first_failure();
    REQUIRE(fail != nullptr);
    CHECK_FALSE(fail->id.empty());
    CHECK_FALSE(fail->witness.empty());
}

TEST_CASE("invariant subspace has the expected dimension and ladder") {
    for (int h : {2, 3}) {
        const ZeroModeModel& mm = model(h);
        INFO("height " << h);
        CHECK(mm.H_I.dim() == 2 * h - 1);
        CHECK(static_cast<int>(mm.invariant_ladder.size()) == 2 * h - 1);
        require_all_pass(verify_invariant_basis(mm));

        // the ladder starts at the vacuum and its second rung is A' of it
        CHECK(is_zero_vec(sub_vec(mm.invariant_ladder[0], mm.vacuum_h())));
        CHECK(is_zero_vec(
            sub_vec(mm.invariant_ladder[1], mm.Aprime.apply(mm.vacuum_h()))));

        // invariance generators and A annihilate / preserve the vacuum line
        CHECK(is_zero_vec(mm.A.apply(mm.vacuum_h())));
        CHECK(is_zero_vec(mm.B.apply(mm.vacuum_h())));
        CHECK(is_zero_vec(mm.Bprime.apply(mm.vacuum_h())));
        CHECK(is_zero_vec(mm.dE.apply(mm.vacuum_h())));
        CHECK(is_zero_vec(mm.dF.apply(mm.vacuum_h())));
        CHECK(is_zero_vec(sub_vec(mm.dK.apply(mm.vacuum_h()), mm.vacuum_h())));
    }
}

TEST_CASE("height-2 top rung maps to minus the middle rung") {
    const ZeroModeModel& mm = model(2);
    Vec lhs = mm.A.apply(mm.invariant_ladder[2]);
    Vec rhs = scale_vec(mm.invariant_ladder[1], -mm.ctx().one());
    CHECK(is_zero_vec(sub_vec(lhs, rhs)));
}

TEST_CASE("restricted A is nilpotent with a one-per-degree homology") {
    for (int h : {2, 3}) {
        INFO("height " << h);
        require_all_pass(verify_theorem0(model(h)));
    }
}

TEST_CASE("charge bookkeeping splits H into shift-invariant classes") {
    const ZeroModeModel& mm = model(3);
    // A lowers the first charge by 2 and keeps the other two
    for (int r = 0; r < mm.dimH(); ++r)
        for (const auto& [c, v] : mm.A.row(r)) {
            auto ct = mm.charges_of_h(r), cs = mm.charges_of_h(c);
            REQUIRE(ct[0] == cs[0] - 2);
            REQUIRE(ct[1] == cs[1]);
            REQUIRE(ct[2] == cs[2]);
        }
    // the coproduct generators move only the third charge
    for (const auto* g : {&mm.dE, &mm.dF}) {
        for (int r = 0; r < mm.dimH(); ++r)
            for (const auto& [c, v] : g->row(r)) {
                auto ct = mm.charges_of_h(r), cs = mm.charges_of_h(c);
                REQUIRE(ct[0] == cs[0]);
                REQUIRE(ct[1] == cs[1]);
            }
    }
}
