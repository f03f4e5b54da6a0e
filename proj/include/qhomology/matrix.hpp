#pragma once

// Sparse exact matrices over the cyclotomic field. Rows are sorted
// (column, Scalar) lists with no stored zeros; every operator in the model
// (chiral modes, coproduct actions, bilinears, h-differentials) is one of
// these. Dimensions stay in the low thousands, but entries must stay exact,
// so the design optimizes for sparse structure rather than raw flops.

#include "qhomology/cyclotomic.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qh {

using Vec = std::vector<Scalar>; // dense column vector

inline Vec zero_vec(const FieldContext& ctx, int n) {
    return Vec(static_cast<size_t>(n), ctx.zero());
}

inline bool is_zero_vec(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

inline Vec add_vec(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Vec sub_vec(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec scale_vec(const Vec& a, const Scalar& s) {
    Vec r = a;
    for (auto& x : r) x *= s;
    return r;
}

class ExactMatrix {
public:
    using Entry = std::pair<int, Scalar>; // (column, value), value != 0
    using Row = std::vector<Entry>;

    ExactMatrix() : ctx_(nullptr), rows_(0), cols_(0) {}
    ExactMatrix(const FieldContext& ctx, int rows, int cols)
        : ctx_(&ctx), rows_(rows), cols_(cols), data_(static_cast<size_t>(rows)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static ExactMatrix identity(const FieldContext& ctx, int n) {
        ExactMatrix m(ctx, n, n);
        for (int i = 0; i < n; ++i) m.data_[i].emplace_back(i, ctx.one());
        return m;
    }

    const FieldContext& ctx() const {
        assert(ctx_);
        return *ctx_;
    }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool valid() const { return ctx_ != nullptr; }
    const Row& row(int r) const { return data_[static_cast<size_t>(r)]; }
    Row& mutable_row(int r) { return data_[static_cast<size_t>(r)]; }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    Scalar get(int r, int c) const {
        const Row& row = data_[static_cast<size_t>(r)];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, int col) { return e.first < col; });
        if (it != row.end() && it->first == c) return it->second;
        return ctx_->zero();
    }

    void set(int r, int c, Scalar v) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        Row& row = data_[static_cast<size_t>(r)];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, int col) { return e.first < col; });
        if (it != row.end() && it->first == c) {
            if (v.is_zero()) row.erase(it);
            else it->second = std::move(v);
        } else if (!v.is_zero()) {
            row.insert(it, Entry(c, std::move(v)));
        }
    }

    void add_to(int r, int c, const Scalar& v) {
        if (v.is_zero()) return;
        Row& row = data_[static_cast<size_t>(r)];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, int col) { return e.first < col; });
        if (it != row.end() && it->first == c) {
            it->second += v;
            if (it->second.is_zero()) row.erase(it);
        } else {
            row.insert(it, Entry(c, v));
        }
    }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    // First nonzero cell in row-major order; the standard witness for a
    // failed "this matrix identity should vanish" check.
    std::optional<std::pair<int, int>> first_nonzero() const {
        for (int r = 0; r < rows_; ++r)
            if (!data_[static_cast<size_t>(r)].empty())
                return std::make_pair(r, data_[static_cast<size_t>(r)].front().first);
        return std::nullopt;
    }

    bool operator==(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (int r = 0; r < rows_; ++r) {
            const Row& a = data_[static_cast<size_t>(r)];
            const Row& b = o.data_[static_cast<size_t>(r)];
            if (a.size() != b.size()) return false;
            for (size_t i = 0; i < a.size(); ++i)
                if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
        }
        return true;
    }
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    ExactMatrix& operator+=(const ExactMatrix& o) {
        check_same_shape(o);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : o.data_[static_cast<size_t>(r)]) add_to(r, c, v);
        return *this;
    }
    ExactMatrix& operator-=(const ExactMatrix& o) {
        check_same_shape(o);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : o.data_[static_cast<size_t>(r)]) add_to(r, c, -v);
        return *this;
    }
    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }

    ExactMatrix scaled(const Scalar& s) const {
        ExactMatrix r(*ctx_, rows_, cols_);
        if (s.is_zero()) return r;
        for (int i = 0; i < rows_; ++i) {
            for (const auto& [c, v] : data_[static_cast<size_t>(i)]) {
                Scalar p = v * s;
                if (!p.is_zero()) r.data_[static_cast<size_t>(i)].emplace_back(c, std::move(p));
            }
        }
        return r;
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        assert(a.ctx_ == b.ctx_);
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        ExactMatrix out(*a.ctx_, a.rows_, b.cols_);
        std::vector<Scalar> acc(static_cast<size_t>(b.cols_));
        std::vector<int> touched;
        for (int i = 0; i < a.rows_; ++i) {
            touched.clear();
            for (const auto& [k, av] : a.data_[static_cast<size_t>(i)]) {
                for (const auto& [j, bv] : b.data_[static_cast<size_t>(k)]) {
                    Scalar p = av * bv;
                    if (p.is_zero()) continue;
                    if (!acc[static_cast<size_t>(j)].valid()) {
                        acc[static_cast<size_t>(j)] = std::move(p);
                        touched.push_back(j);
                    } else {
                        acc[static_cast<size_t>(j)] += p;
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            Row& orow = out.data_[static_cast<size_t>(i)];
            for (int j : touched) {
                if (!acc[static_cast<size_t>(j)].is_zero())
                    orow.emplace_back(j, std::move(acc[static_cast<size_t>(j)]));
                acc[static_cast<size_t>(j)] = Scalar();
            }
        }
        return out;
    }

    ExactMatrix transpose() const {
        ExactMatrix t(*ctx_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, v] : data_[static_cast<size_t>(r)])
                t.data_[static_cast<size_t>(c)].emplace_back(r, v);
        // built column-major over r ascending, so each row is already sorted
        return t;
    }

    ExactMatrix pow(int k) const {
        if (rows_ != cols_) throw std::invalid_argument("power of non-square matrix");
        if (k < 0) throw std::invalid_argument("negative matrix power");
        ExactMatrix r = identity(*ctx_, rows_);
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    Vec apply(const Vec& v) const {
        assert(static_cast<int>(v.size()) == cols_);
        Vec out = zero_vec(*ctx_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (const auto& [c, a] : data_[static_cast<size_t>(r)])
                if (!v[static_cast<size_t>(c)].is_zero()) out[static_cast<size_t>(r)] += a * v[static_cast<size_t>(c)];
        return out;
    }

    // Kronecker product: index (i1, i2) -> i1 * other.rows + i2.
    ExactMatrix kron(const ExactMatrix& o) const {
        assert(ctx_ == o.ctx_);
        ExactMatrix out(*ctx_, rows_ * o.rows_, cols_ * o.cols_);
        for (int r1 = 0; r1 < rows_; ++r1) {
            for (int r2 = 0; r2 < o.rows_; ++r2) {
                Row& orow = out.data_[static_cast<size_t>(r1 * o.rows_ + r2)];
                for (const auto& [c1, v1] : data_[static_cast<size_t>(r1)]) {
                    for (const auto& [c2, v2] : o.data_[static_cast<size_t>(r2)]) {
                        Scalar p = v1 * v2;
                        if (!p.is_zero()) orow.emplace_back(c1 * o.cols_ + c2, std::move(p));
                    }
                }
                std::sort(orow.begin(), orow.end(),
                          [](const Entry& x, const Entry& y) { return x.first < y.first; });
            }
        }
        return out;
    }

    // Rows of all arguments stacked top to bottom; column counts must agree.
    static ExactMatrix stack_vertical(const std::vector<const ExactMatrix*>& parts) {
        assert(!parts.empty());
        const FieldContext& ctx = parts[0]->ctx();
        int cols = parts[0]->cols();
        int rows = 0;
        for (const auto* p : parts) {
            if (p->cols() != cols) throw std::invalid_argument("stack: column mismatch");
            rows += p->rows();
        }
        ExactMatrix out(ctx, rows, cols);
        int at = 0;
        for (const auto* p : parts)
            for (int r = 0; r < p->rows(); ++r)
                out.data_[static_cast<size_t>(at++)] = p->row(r);
        return out;
    }

    ExactMatrix commutator(const ExactMatrix& o) const { return *this * o - o * *this; }

private:
    void check_same_shape(const ExactMatrix& o) const {
        assert(ctx_ == o.ctx_);
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    const FieldContext* ctx_;
    int rows_, cols_;
    std::vector<Row> data_;
};

// Sparse row from a dense vector (used when moving between representations).
inline ExactMatrix row_matrix(const FieldContext& ctx, const Vec& v) {
    ExactMatrix m(ctx, 1, static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) m.set(0, static_cast<int>(i), v[i]);
    return m;
}

inline Vec dense_row(const ExactMatrix& m, int r) {
    Vec v = zero_vec(m.ctx(), m.cols());
    for (const auto& [c, val] : m.row(r)) v[static_cast<size_t>(c)] = val;
    return v;
}

} // namespace qh
