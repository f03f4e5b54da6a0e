#pragma once

// Generalized homology of h-differential spaces: a nilpotent d with d^h = 0
// on a finite-dimensional space, the homology spaces
// H_(k) = Ker(d^k) / Im(d^{h-k}) for k = 1..h-1, and the standard
// constructions around them (dimension formula from Jordan multiplicities,
// the acyclic cone, the canonical (V, W) complex, and the q^2-twisted total
// differential d + A).

#include "qhomology/nilpotent.hpp"
#include "qhomology/subspace.hpp"

#include <optional>
#include <string>

namespace qh {

struct HDiffSpace {
    int h = 0;
    ExactMatrix d; // square, d^h = 0 (validated by make_hdiff_space)
    // Degree block boundaries when the space carries a grading:
    // offsets[n]..offsets[n+1] are the coordinates of degree n. Empty for
    // ungraded spaces. `graded_differential` records whether d maps degree n
    // strictly into degree n+1 (the cone and the total differential carry
    // the boundaries only as a filtration, not as homogeneity).
    std::vector<int> degree_offsets;
    bool graded_differential = false;

    int dim() const { return d.rows(); }
    const FieldContext& ctx() const { return d.ctx(); }
    int degree_count() const {
        return degree_offsets.empty() ? 0 : static_cast<int>(degree_offsets.size()) - 1;
    }
    int degree_of(int coord) const {
        for (int n = 0; n + 1 < static_cast<int>(degree_offsets.size()); ++n)
            if (coord < degree_offsets[static_cast<size_t>(n + 1)]) return n;
        return -1;
    }
};

inline HDiffSpace make_hdiff_space(int h, ExactMatrix d,
                                   std::vector<int> degree_offsets = {},
                                   bool graded_differential = false) {
    if (d.rows() != d.cols()) throw std::invalid_argument("differential must be square");
    if (h < 2) throw std::invalid_argument("height must be at least 2");
    HDiffSpace s;
    s.h = h;
    s.d = std::move(d);
    s.degree_offsets = std::move(degree_offsets);
    s.graded_differential = graded_differential;
    if (!s.degree_offsets.empty()) {
        if (s.degree_offsets.front() != 0 || s.degree_offsets.back() != s.dim())
            throw std::invalid_argument("degree offsets must cover the space");
        for (size_t i = 0; i + 1 < s.degree_offsets.size(); ++i)
            if (s.degree_offsets[i] > s.degree_offsets[i + 1])
                throw std::invalid_argument("degree offsets must be nondecreasing");
    }
    if (s.graded_differential) {
        for (int r = 0; r < s.d.rows(); ++r)
            for (const auto& [c, v] : s.d.row(r))
                if (s.degree_of(r) != s.degree_of(c) + 1)
                    throw std::invalid_argument("differential is not degree-homogeneous");
    }
    if (!s.d.pow(h).is_zero()) {
        // Only reached on bad input: the profile pinpoints the smallest
        // failing power (rank plateau) and always throws here.
        nilpotent_profile(s.d, h);
        throw NotNilpotentError(h);
    }
    return s;
}

struct HomologyReport {
    int h = 0;
    std::vector<int> dims;                        // dims[k-1] = dim H_(k)
    std::vector<std::vector<Vec>> representatives; // canonical, per k
    std::vector<std::vector<int>> per_degree;     // [k-1][n]; empty when not graded
};

namespace detail {

inline HomologyReport gen_homology_flat(const HDiffSpace& s) {
    HomologyReport rep;
    rep.h = s.h;
    std::vector<ExactMatrix> powers; // powers[j] = d^j, j = 0..h
    powers.push_back(ExactMatrix::identity(s.ctx(), s.dim()));
    for (int j = 1; j <= s.h; ++j) powers.push_back(powers.back() * s.d);
    for (int k = 1; k < s.h; ++k) {
        Subspace ker = Subspace::from_vectors(s.ctx(), s.dim(),
                                              kernel_basis(powers[static_cast<size_t>(k)]));
        Subspace img = Subspace::from_rows(image_basis(powers[static_cast<size_t>(s.h - k)]));
        rep.dims.push_back(ker.dim() - img.dim());
        rep.representatives.push_back(ker.complete_basis_over(img));
    }
    return rep;
}

} // namespace detail

// Optional acceleration: a partition of the coordinates into d-invariant
// classes (d never maps across classes). The homology is computed per class
// and assembled; the block structure is validated, not trusted.
inline HomologyReport gen_homology(const HDiffSpace& s,
                                   const std::vector<int>* partition = nullptr) {
    HomologyReport rep;
    if (partition == nullptr) {
        rep = detail::gen_homology_flat(s);
    } else {
        const std::vector<int>& part = *partition;
        if (static_cast<int>(part.size()) != s.dim())
            throw std::invalid_argument("partition size mismatch");
        for (int r = 0; r < s.dim(); ++r)
            for (const auto& [c, v] : s.d.row(r))
                if (part[static_cast<size_t>(r)] != part[static_cast<size_t>(c)])
                    throw std::invalid_argument("partition is not d-invariant");
        int classes = 0;
        for (int p : part) classes = std::max(classes, p + 1);
        std::vector<std::vector<int>> members(static_cast<size_t>(classes));
        for (int i = 0; i < s.dim(); ++i) members[static_cast<size_t>(part[static_cast<size_t>(i)])].push_back(i);
        rep.h = s.h;
        rep.dims.assign(static_cast<size_t>(s.h - 1), 0);
        rep.representatives.assign(static_cast<size_t>(s.h - 1), {});
        for (const auto& mem : members) {
            if (mem.empty()) continue;
            std::vector<int> pos(static_cast<size_t>(s.dim()), -1);
            for (size_t i = 0; i < mem.size(); ++i) pos[static_cast<size_t>(mem[i])] = static_cast<int>(i);
            ExactMatrix sub(s.ctx(), static_cast<int>(mem.size()), static_cast<int>(mem.size()));
            for (size_t i = 0; i < mem.size(); ++i)
                for (const auto& [c, v] : s.d.row(mem[i]))
                    sub.set(static_cast<int>(i), pos[static_cast<size_t>(c)], v);
            HDiffSpace block;
            block.h = s.h;
            block.d = std::move(sub);
            HomologyReport br = detail::gen_homology_flat(block);
            for (int k = 0; k < s.h - 1; ++k) {
                rep.dims[static_cast<size_t>(k)] += br.dims[static_cast<size_t>(k)];
                for (const Vec& v : br.representatives[static_cast<size_t>(k)]) {
                    Vec lifted = zero_vec(s.ctx(), s.dim());
                    for (size_t i = 0; i < mem.size(); ++i) lifted[static_cast<size_t>(mem[i])] = v[i];
                    rep.representatives[static_cast<size_t>(k)].push_back(std::move(lifted));
                }
            }
        }
    }
    // Per-degree attribution for graded spaces with homogeneous d: kernel
    // and image split by degree, so canonical representatives are pure.
    if (!s.degree_offsets.empty() && s.graded_differential) {
        rep.per_degree.assign(static_cast<size_t>(s.h - 1),
                              std::vector<int>(static_cast<size_t>(s.degree_count()), 0));
        for (int k = 0; k < s.h - 1; ++k) {
            for (const Vec& v : rep.representatives[static_cast<size_t>(k)]) {
                int deg = -1;
                bool pure = true;
                for (int i = 0; i < s.dim(); ++i) {
                    if (v[static_cast<size_t>(i)].is_zero()) continue;
                    int d_i = s.degree_of(i);
                    if (deg == -1) deg = d_i;
                    else if (deg != d_i) pure = false;
                }
                if (!pure || deg < 0)
                    throw std::logic_error("graded representative straddles degrees");
                rep.per_degree[static_cast<size_t>(k)][static_cast<size_t>(deg)] += 1;
            }
        }
    }
    return rep;
}

// Homology dimensions from Jordan multiplicities alone:
// dim H_(n) = sum_{j=1..n} sum_{i=j..h-j} m_i for n up to h/2, and the
// mirror symmetry dim H_(n) = dim H_(h-n) for the rest.
inline std::vector<int> homology_dims_from_multiplicities(const std::vector<int>& m, int h) {
    if (static_cast<int>(m.size()) != h)
        throw std::invalid_argument("need exactly h multiplicities");
    auto lower_half = [&](int n) {
        int total = 0;
        for (int j = 1; j <= n; ++j)
            for (int i = j; i <= h - j; ++i) total += m[static_cast<size_t>(i - 1)];
        return total;
    };
    std::vector<int> dims;
    for (int n = 1; n < h; ++n)
        dims.push_back(lower_half(std::min(n, h - n)));
    return dims;
}

// Which total dimensions admit a nilpotent whose generalized homology is
// one-dimensional in every degree? Exactly dim = h*t + 1 (a single 1-block
// plus t full blocks) or dim = h*t + (h-1) (a single (h-1)-block plus t full
// blocks). Returns every distinct witness multiplicity vector.
struct FeasibilityResult {
    bool feasible = false;
    std::vector<std::vector<int>> witnesses; // multiplicity vectors, size h
};

inline FeasibilityResult feasibility(long long dim_total, int h) {
    if (h < 2) throw std::invalid_argument("height must be at least 2");
    if (dim_total < 0) throw std::invalid_argument("negative dimension");
    FeasibilityResult res;
    auto add_witness = [&](int small_block, long long full_blocks) {
        std::vector<int> m(static_cast<size_t>(h), 0);
        m[static_cast<size_t>(small_block - 1)] += 1;
        m[static_cast<size_t>(h - 1)] += static_cast<int>(full_blocks);
        for (const auto& w : res.witnesses)
            if (w == m) return;
        res.witnesses.push_back(std::move(m));
        res.feasible = true;
    };
    for (int small : {1, h - 1}) {
        long long rest = dim_total - small;
        if (rest >= 0 && rest % h == 0) add_witness(small, rest / h);
    }
    return res;
}

// Acyclic cone on (E, L): h stacked copies of E with (Dpsi)_n =
// psi_{n-1} + q^{2n} L psi_n. Requires L^h = 0; the result is an
// h-differential space whose generalized homology vanishes identically.
inline HDiffSpace cone(const ExactMatrix& L, int h) {
    if (L.rows() != L.cols()) throw std::invalid_argument("cone endomorphism must be square");
    nilpotent_profile(L, h); // throws NotNilpotentError if L^h != 0
    const FieldContext& ctx = L.ctx();
    const int e = L.rows();
    ExactMatrix d(ctx, h * e, h * e);
    for (int n = 0; n < h; ++n) {
        if (n > 0)
            for (int i = 0; i < e; ++i) d.set(n * e + i, (n - 1) * e + i, ctx.one());
        Scalar w = ctx.q_pow(2 * n);
        for (int r = 0; r < e; ++r)
            for (const auto& [c, v] : L.row(r)) d.add_to(n * e + r, n * e + c, w * v);
    }
    return make_hdiff_space(h, std::move(d));
}

// The canonical h-complex of a pair W <= V: degree 0 is V, degrees 1..h-1
// are copies of V/W in echelon-complement coordinates, and the differential
// is the quotient map followed by identities (and zero off the top).
struct CanonicalComplex {
    HDiffSpace space;       // graded, homogeneous differential
    Subspace W;             // the distinguished subspace of V
    ExactMatrix pi;         // V -> V/W (dimE x dimV)
    ExactMatrix embed;      // V/W -> V section, pi * embed = id
    ExactMatrix degree0_embedding; // V -> total space
    int dimV = 0;
    int dimE = 0;
};

inline CanonicalComplex canonical_hcomplex(const Subspace& W, int h) {
    const FieldContext& ctx = W.ctx();
    const int dimV = W.ambient();
    const int dimE = dimV - W.dim();
    CanonicalComplex cc;
    cc.W = W;
    cc.dimV = dimV;
    cc.dimE = dimE;

    std::vector<bool> is_pivot(static_cast<size_t>(dimV), false);
    for (int p : W.pivot_cols()) is_pivot[static_cast<size_t>(p)] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < dimV; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);

    cc.pi = ExactMatrix(ctx, dimE, dimV);
    cc.embed = ExactMatrix(ctx, dimV, dimE);
    for (int j = 0; j < dimE; ++j) {
        int f = free_cols[static_cast<size_t>(j)];
        cc.pi.set(j, f, ctx.one());
        for (int i = 0; i < W.dim(); ++i) {
            Scalar wif = W.basis().get(i, f);
            if (!wif.is_zero())
                cc.pi.add_to(j, W.pivot_cols()[static_cast<size_t>(i)], -wif);
        }
        cc.embed.set(f, j, ctx.one());
    }

    const int total = dimV + (h - 1) * dimE;
    std::vector<int> offsets{0, dimV};
    for (int n = 1; n < h; ++n) offsets.push_back(dimV + n * dimE);
    ExactMatrix d(ctx, total, total);
    for (int r = 0; r < dimE; ++r)
        for (const auto& [c, v] : cc.pi.row(r)) d.set(dimV + r, c, v);
    for (int n = 1; n + 1 < h; ++n)
        for (int i = 0; i < dimE; ++i)
            d.set(dimV + n * dimE + i, dimV + (n - 1) * dimE + i, ctx.one());
    cc.space = make_hdiff_space(h, std::move(d), std::move(offsets), true);

    cc.degree0_embedding = ExactMatrix(ctx, total, dimV);
    for (int i = 0; i < dimV; ++i) cc.degree0_embedding.set(i, i, ctx.one());

    // Sanity of the construction itself: homology is W in degree 0 and
    // nothing anywhere else.
    HomologyReport hr = gen_homology(cc.space);
    for (int k = 0; k < h - 1; ++k) {
        if (hr.dims[static_cast<size_t>(k)] != W.dim())
            throw std::logic_error("canonical complex homology has wrong dimension");
        std::vector<Vec> deg0;
        for (const Vec& v : hr.representatives[static_cast<size_t>(k)]) {
            for (int i = dimV; i < total; ++i)
                if (!v[static_cast<size_t>(i)].is_zero())
                    throw std::logic_error("canonical complex homology leaks above degree 0");
            deg0.push_back(Vec(v.begin(), v.begin() + dimV));
        }
        if (!(Subspace::from_vectors(ctx, dimV, deg0) == W))
            throw std::logic_error("canonical complex homology differs from W");
    }
    return cc;
}

struct InvarianceViolation : std::runtime_error {
    Vec witness; // image vector that escapes the subspace
    explicit InvarianceViolation(Vec w)
        : std::runtime_error("endomorphism does not preserve the distinguished subspace"),
          witness(std::move(w)) {}
};

// Degree-wise extension of A0: A0 itself in degree 0 and q^{2n} times the
// induced quotient endomorphism in degree n. Demands A0(W) <= W.
inline ExactMatrix extend_endomorphism(const CanonicalComplex& cc, const ExactMatrix& A0) {
    if (A0.rows() != cc.dimV || A0.cols() != cc.dimV)
        throw std::invalid_argument("endomorphism dimension mismatch");
    const FieldContext& ctx = A0.ctx();
    for (int i = 0; i < cc.W.dim(); ++i) {
        Vec img = A0.apply(dense_row(cc.W.basis(), i));
        if (!cc.W.contains(img)) throw InvarianceViolation(std::move(img));
    }
    ExactMatrix a_ind = cc.pi * A0 * cc.embed;
    const int total = cc.space.dim();
    ExactMatrix ext(ctx, total, total);
    for (int r = 0; r < cc.dimV; ++r)
        for (const auto& [c, v] : A0.row(r)) ext.set(r, c, v);
    for (int n = 1; n < cc.space.h; ++n) {
        Scalar w = ctx.q_pow(2 * n);
        int off = cc.dimV + (n - 1) * cc.dimE;
        for (int r = 0; r < cc.dimE; ++r)
            for (const auto& [c, v] : a_ind.row(r)) ext.set(off + r, off + c, w * v);
    }
    return ext;
}

struct QCommutationError : std::runtime_error {
    std::pair<int, int> witness_cell;
    explicit QCommutationError(std::pair<int, int> cell)
        : std::runtime_error("extended endomorphism fails A d = q^2 d A at cell (" +
                             std::to_string(cell.first) + ", " + std::to_string(cell.second) + ")"),
          witness_cell(cell) {}
};

// Total differential Q = d + A on the canonical complex. Verifies the
// q^2-commutation that makes (d + A)^h collapse to d^h + A^h, then builds
// the h-differential space (whose constructor verifies Q^h = 0). The degree
// boundaries survive as a filtration; Q itself is not homogeneous.
inline HDiffSpace total_differential(const CanonicalComplex& cc, const ExactMatrix& a_ext) {
    ExactMatrix lhs = a_ext * cc.space.d;
    ExactMatrix rhs = (cc.space.d * a_ext).scaled(cc.space.ctx().q_pow(2));
    ExactMatrix diff = lhs - rhs;
    if (!diff.is_zero()) throw QCommutationError(*diff.first_nonzero());
    ExactMatrix q = cc.space.d + a_ext;
    return make_hdiff_space(cc.space.h, std::move(q), cc.space.degree_offsets, false);
}

} // namespace qh
