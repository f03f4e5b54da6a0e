#pragma once

// Subspaces of a fixed ambient coordinate space, held in canonical reduced
// row echelon form. Canonicality makes equality, containment and golden
// tests deterministic regardless of how the spanning set was produced.

#include "qhomology/elimination.hpp"

#include <stdexcept>

namespace qh {

class Subspace {
public:
    Subspace() = default;
    Subspace(const FieldContext& ctx, int ambient)
        : ctx_(&ctx), ambient_(ambient), basis_(ctx, 0, ambient) {}

    static Subspace from_rows(const ExactMatrix& generators) {
        Subspace s(generators.ctx(), generators.cols());
        RrefResult rr = rref(generators);
        s.basis_ = std::move(rr.reduced);
        s.pivot_cols_ = std::move(rr.pivot_cols);
        return s;
    }

    static Subspace from_vectors(const FieldContext& ctx, int ambient,
                                 const std::vector<Vec>& vecs) {
        ExactMatrix g(ctx, static_cast<int>(vecs.size()), ambient);
        for (size_t i = 0; i < vecs.size(); ++i)
            for (int c = 0; c < ambient; ++c)
                if (!vecs[i][static_cast<size_t>(c)].is_zero())
                    g.set(static_cast<int>(i), c, vecs[i][static_cast<size_t>(c)]);
        return from_rows(g);
    }

    const FieldContext& ctx() const { return *ctx_; }
    int ambient() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const ExactMatrix& basis() const { return basis_; }
    const std::vector<int>& pivot_cols() const { return pivot_cols_; }

    // Express v in the echelon basis. Returns coefficients iff v lies in the
    // subspace; the reduction is unique because the basis is in RREF.
    std::optional<Vec> coordinates_of(const Vec& v) const {
        assert(static_cast<int>(v.size()) == ambient_);
        Vec residual = v;
        Vec coeffs = zero_vec(*ctx_, dim());
        for (int i = 0; i < dim(); ++i) {
            int p = pivot_cols_[static_cast<size_t>(i)];
            Scalar c = residual[static_cast<size_t>(p)];
            if (c.is_zero()) continue;
            coeffs[static_cast<size_t>(i)] = c;
            for (const auto& [col, val] : basis_.row(i))
                residual[static_cast<size_t>(col)] -= c * val;
        }
        if (!is_zero_vec(residual)) return std::nullopt;
        return coeffs;
    }

    bool contains(const Vec& v) const { return coordinates_of(v).has_value(); }

    bool contains(const Subspace& other) const {
        if (other.ambient_ != ambient_) throw std::invalid_argument("ambient mismatch");
        for (int r = 0; r < other.dim(); ++r)
            if (!contains(dense_row(other.basis_, r))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }

    friend Subspace sum(const Subspace& a, const Subspace& b) {
        if (a.ambient_ != b.ambient_) throw std::invalid_argument("ambient mismatch");
        std::vector<const ExactMatrix*> parts{&a.basis_, &b.basis_};
        return from_rows(ExactMatrix::stack_vertical(parts));
    }

    // Intersection via the left kernel of the stacked generators: a relation
    // u * A + w * B = 0 exhibits u * A as a vector of both row spaces.
    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        if (a.ambient_ != b.ambient_) throw std::invalid_argument("ambient mismatch");
        std::vector<const ExactMatrix*> parts{&a.basis_, &b.basis_};
        ExactMatrix stacked = ExactMatrix::stack_vertical(parts);
        std::vector<Vec> relations = kernel_basis(stacked.transpose());
        std::vector<Vec> inter;
        for (const Vec& rel : relations) {
            Vec v = zero_vec(*a.ctx_, a.ambient_);
            for (int i = 0; i < a.dim(); ++i) {
                const Scalar& u = rel[static_cast<size_t>(i)];
                if (u.is_zero()) continue;
                for (const auto& [c, val] : a.basis_.row(i))
                    v[static_cast<size_t>(c)] += u * val;
            }
            inter.push_back(std::move(v));
        }
        return from_vectors(*a.ctx_, a.ambient_, inter);
    }

    // dim(a / b) for b a subspace of a; rejects non-nested inputs instead of
    // returning a misleading difference of dimensions.
    friend int quotient_dim_mod(const Subspace& a, const Subspace& b) {
        if (!a.contains(b)) throw std::invalid_argument("quotient by a non-subspace");
        return a.dim() - b.dim();
    }

    // Extends `inner` by vectors drawn from this space, in deterministic
    // (echelon) order. Returned vectors are representatives of a basis of
    // this/inner; requires inner to be contained in this space.
    std::vector<Vec> complete_basis_over(const Subspace& inner) const {
        if (!contains(inner)) throw std::invalid_argument("completion base not contained");
        Subspace acc = inner;
        std::vector<Vec> reps;
        for (int r = 0; r < dim(); ++r) {
            Vec cand = dense_row(basis_, r);
            if (acc.contains(cand)) continue;
            reps.push_back(cand);
            std::vector<const ExactMatrix*> parts{&acc.basis_};
            ExactMatrix one = row_matrix(*ctx_, cand);
            parts.push_back(&one);
            acc = from_rows(ExactMatrix::stack_vertical(parts));
        }
        return reps;
    }

private:
    const FieldContext* ctx_ = nullptr;
    int ambient_ = 0;
    ExactMatrix basis_;
    std::vector<int> pivot_cols_;
};

} // namespace qh
