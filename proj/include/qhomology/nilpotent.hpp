#pragma once

// Nilpotency analysis: rank profiles r_j = rank(N^j), Jordan block
// multiplicities, and seeded random h-nilpotent matrices used as property
// test fodder. The multiplicity extraction is the discrete second difference
// m_n = r_{n-1} - 2 r_n + r_{n+1}, the standard Jordan-type formula.

#include "qhomology/elimination.hpp"

#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qh {

struct NotNilpotentError : std::runtime_error {
    int smallest_failing_power;
    explicit NotNilpotentError(int power)
        : std::runtime_error("matrix is not h-nilpotent; smallest failing power is " +
                             std::to_string(power)),
          smallest_failing_power(power) {}
};

struct NilpotentProfile {
    int dim = 0;
    int h = 0;
    std::vector<int> ranks;          // ranks[j] = rank(N^j), j = 0..h
    std::vector<int> multiplicities; // multiplicities[n-1] = m_n, n = 1..h
};

// Rank profile of N with the h-nilpotency requirement enforced. Two failure
// shapes, each reported with the smallest power that witnesses it:
//  - the rank profile stabilizes at a positive value before reaching zero
//    (N can never become nilpotent beyond that point), or
//  - rank(N^h) is still positive.
inline NilpotentProfile nilpotent_profile(const ExactMatrix& n, int h) {
    if (n.rows() != n.cols()) throw std::invalid_argument("nilpotency requires a square matrix");
    if (h < 2) throw std::invalid_argument("height must be at least 2");
    NilpotentProfile p;
    p.dim = n.rows();
    p.h = h;
    p.ranks.push_back(p.dim);
    ExactMatrix power = ExactMatrix::identity(n.ctx(), n.rows());
    for (int j = 1; j <= h; ++j) {
        power = power * n;
        int r = rank(power);
        if (r > 0 && r == p.ranks.back()) throw NotNilpotentError(j);
        p.ranks.push_back(r);
        if (r == 0) break;
    }
    if (p.ranks.back() > 0) throw NotNilpotentError(h);
    while (static_cast<int>(p.ranks.size()) <= h) p.ranks.push_back(0);

    auto r = [&](int j) { return (j <= h) ? p.ranks[static_cast<size_t>(j)] : 0; };
    for (int m = 1; m <= h; ++m)
        p.multiplicities.push_back(r(m - 1) - 2 * r(m) + r(m + 1));
    int weighted = 0;
    for (int m = 1; m <= h; ++m) weighted += m * p.multiplicities[static_cast<size_t>(m - 1)];
    if (weighted != p.dim)
        throw std::logic_error("Jordan multiplicities fail the dimension count");
    return p;
}

// Single nilpotent Jordan block of size n: e_1 -> 0, e_k -> e_{k-1}.
inline ExactMatrix shift_block(const FieldContext& ctx, int n) {
    ExactMatrix m(ctx, n, n);
    for (int k = 1; k < n; ++k) m.set(k - 1, k, ctx.one());
    return m;
}

// Block-diagonal nilpotent with multiplicities[n-1] blocks of size n.
inline ExactMatrix block_diag_nilpotent(const FieldContext& ctx,
                                        const std::vector<int>& multiplicities) {
    int dim = 0;
    for (size_t n = 0; n < multiplicities.size(); ++n)
        dim += static_cast<int>(n + 1) * multiplicities[n];
    ExactMatrix m(ctx, dim, dim);
    int at = 0;
    for (size_t n = 0; n < multiplicities.size(); ++n) {
        int size = static_cast<int>(n + 1);
        for (int b = 0; b < multiplicities[n]; ++b) {
            for (int k = 1; k < size; ++k) m.set(at + k - 1, at + k, ctx.one());
            at += size;
        }
    }
    return m;
}

// The small palette of exact coefficients used for random inputs.
inline Scalar random_palette_scalar(const FieldContext& ctx, std::mt19937_64& rng,
                                    bool allow_zero = true) {
    std::uniform_int_distribution<int> pick(allow_zero ? 0 : 1, 4);
    switch (pick(rng)) {
        case 0: return ctx.zero();
        case 1: return ctx.one();
        case 2: return -ctx.one();
        case 3: return ctx.q_pow(1);
        default: return ctx.q_pow(-1);
    }
}

// Conjugates the block-diagonal normal form by a chain of elementary shears
// I + c E_{ij}, c from the palette. Shear inverses are shears, so the
// conjugation is exact and the Jordan type is preserved by construction.
inline ExactMatrix random_nilpotent(const FieldContext& ctx,
                                    const std::vector<int>& multiplicities,
                                    uint64_t seed, int shear_count = 12) {
    ExactMatrix n = block_diag_nilpotent(ctx, multiplicities);
    const int dim = n.rows();
    if (dim < 2) return n;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> idx(0, dim - 1);
    for (int s = 0; s < shear_count; ++s) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        Scalar c = random_palette_scalar(ctx, rng, /*allow_zero=*/false);
        ExactMatrix sh = ExactMatrix::identity(ctx, dim);
        sh.set(i, j, c);
        ExactMatrix shinv = ExactMatrix::identity(ctx, dim);
        shinv.set(i, j, -c);
        n = sh * n * shinv;
    }
    return n;
}

// Random multiplicity vector with at least one block, sizes up to h,
// total dimension capped to keep property tests fast.
inline std::vector<int> random_multiplicities(int h, std::mt19937_64& rng, int max_dim = 14) {
    std::vector<int> m(static_cast<size_t>(h), 0);
    std::uniform_int_distribution<int> size(1, h);
    int dim = 0;
    while (true) {
        int n = size(rng);
        if (dim + n > max_dim) break;
        m[static_cast<size_t>(n - 1)] += 1;
        dim += n;
        if (dim >= max_dim - h && (rng() & 1)) break;
    }
    if (dim == 0) m[0] = 1;
    return m;
}

} // namespace qh
