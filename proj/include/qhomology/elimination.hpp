#pragma once

// Exact Gaussian elimination. The reduced row echelon form over a field is
// unique, so the two pivot strategies below are required to agree bit for
// bit; tests exploit that as a cross-check of the elimination code itself.
//
//  - FewestNonzeros (default): among candidate pivot rows pick the sparsest,
//    divide through by the pivot immediately. Good fill-in behavior on the
//    structured operators we eliminate.
//  - FractionFree: division-free cross-multiplication during elimination,
//    with a single normalization and back-substitution pass at the end.
//    Useful when intermediate rational height, not fill-in, dominates.

#include "qhomology/matrix.hpp"

namespace qh {

enum class PivotStrategy { FewestNonzeros, FractionFree };

struct RrefResult {
    ExactMatrix reduced;         // RREF, zero rows dropped
    std::vector<int> pivot_cols; // ascending, one per nonzero row
    int rank = 0;
};

namespace detail {

using SRow = ExactMatrix::Row;

inline const Scalar* row_coeff(const SRow& row, int col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, int c) { return e.first < c; });
    if (it != row.end() && it->first == col) return &it->second;
    return nullptr;
}

// target += s * source, merging sorted sparse rows.
inline void axpy_row(SRow& target, const Scalar& s, const SRow& source) {
    if (s.is_zero() || source.empty()) return;
    SRow merged;
    merged.reserve(target.size() + source.size());
    auto ta = target.begin();
    for (const auto& [c, v] : source) {
        while (ta != target.end() && ta->first < c) merged.push_back(*ta++);
        Scalar add = s * v;
        if (ta != target.end() && ta->first == c) {
            add += ta->second;
            ++ta;
        }
        if (!add.is_zero()) merged.emplace_back(c, std::move(add));
    }
    while (ta != target.end()) merged.push_back(*ta++);
    target = std::move(merged);
}

inline void scale_row(SRow& row, const Scalar& s) {
    for (auto& [c, v] : row) v *= s;
}

} // namespace detail

inline RrefResult rref(const ExactMatrix& m,
                       PivotStrategy strategy = PivotStrategy::FewestNonzeros) {
    const FieldContext& ctx = m.ctx();
    std::vector<detail::SRow> rows;
    rows.reserve(static_cast<size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r)
        if (!m.row(r).empty()) rows.push_back(m.row(r));

    std::vector<detail::SRow> pivot_rows;
    std::vector<int> pivot_cols;

    // Invariant: every row still in `rows` has its leading column strictly
    // greater than all chosen pivot columns.
    while (!rows.empty()) {
        int col = m.cols();
        for (const auto& r : rows) col = std::min(col, r.front().first);
        size_t best = rows.size();
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].front().first != col) continue;
            if (strategy == PivotStrategy::FewestNonzeros) {
                if (best == rows.size() || rows[i].size() < rows[best].size()) best = i;
            } else {
                if (best == rows.size()) best = i; // first candidate
            }
        }
        detail::SRow piv = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<long>(best));

        if (strategy == PivotStrategy::FewestNonzeros) {
            detail::scale_row(piv, piv.front().second.inverse());
            for (auto& r : rows) {
                const Scalar* c = detail::row_coeff(r, col);
                if (c) detail::axpy_row(r, -*c, piv);
            }
            for (auto& r : pivot_rows) {
                const Scalar* c = detail::row_coeff(r, col);
                if (c) detail::axpy_row(r, -*c, piv);
            }
        } else {
            // cross-multiplied update: r := p_c * r - r_c * p, no division
            const Scalar pc = piv.front().second;
            for (auto& r : rows) {
                const Scalar* c = detail::row_coeff(r, col);
                if (!c) continue;
                Scalar rc = *c;
                detail::scale_row(r, pc);
                detail::axpy_row(r, -rc, piv);
            }
        }
        pivot_rows.push_back(std::move(piv));
        pivot_cols.push_back(col);
        std::erase_if(rows, [](const detail::SRow& r) { return r.empty(); });
    }

    if (strategy == PivotStrategy::FractionFree) {
        // normalize pivots, then clear pivot columns upward
        for (auto& r : pivot_rows) detail::scale_row(r, r.front().second.inverse());
        for (size_t i = pivot_rows.size(); i-- > 0;) {
            for (size_t j = 0; j < i; ++j) {
                const Scalar* c = detail::row_coeff(pivot_rows[j], pivot_cols[i]);
                if (c) detail::axpy_row(pivot_rows[j], -*c, pivot_rows[i]);
            }
        }
    }

    RrefResult out;
    out.rank = static_cast<int>(pivot_rows.size());
    out.pivot_cols = std::move(pivot_cols);
    out.reduced = ExactMatrix(ctx, out.rank, m.cols());
    for (int i = 0; i < out.rank; ++i) out.reduced.mutable_row(i) = std::move(pivot_rows[static_cast<size_t>(i)]);
    return out;
}

inline int rank(const ExactMatrix& m,
                PivotStrategy strategy = PivotStrategy::FewestNonzeros) {
    return rref(m, strategy).rank;
}

// Canonical kernel basis from the RREF: one vector per free column f, with
// v[f] = 1 and pivot coordinates filled from the reduced rows. Ordered by f.
inline std::vector<Vec> kernel_basis(const ExactMatrix& m,
                                     PivotStrategy strategy = PivotStrategy::FewestNonzeros) {
    RrefResult rr = rref(m, strategy);
    const FieldContext& ctx = m.ctx();
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int c : rr.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<Vec> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[static_cast<size_t>(f)]) continue;
        Vec v = zero_vec(ctx, m.cols());
        v[static_cast<size_t>(f)] = ctx.one();
        for (int i = 0; i < rr.rank; ++i) {
            const Scalar* c = detail::row_coeff(rr.reduced.row(i), f);
            if (c) v[static_cast<size_t>(rr.pivot_cols[static_cast<size_t>(i)])] = -*c;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Canonical basis of the column space: RREF rows of the transpose.
inline ExactMatrix image_basis(const ExactMatrix& m,
                               PivotStrategy strategy = PivotStrategy::FewestNonzeros) {
    return rref(m.transpose(), strategy).reduced;
}

} // namespace qh
