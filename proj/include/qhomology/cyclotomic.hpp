#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta), zeta a primitive (4h)-th
// root of unity. Everything downstream works over this field: q = zeta^2 is
// then a primitive (2h)-th root, q^2 a primitive h-th root, and half-integer
// powers q^{n/2} = zeta^n exist in the field, which is the reason for the 4h
// (rather than 2h) choice.
//
// A Scalar is a coordinate vector in the power basis 1, x, ..., x^{d-1} of
// Q[x]/(Phi_{4h}(x)), d = phi(4h). All operations are exact; equality is
// coordinate equality, so "is this matrix identity exactly zero" is decidable
// with no tolerance anywhere.

#include "qhomology/rational.hpp"

#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace qh {

using Poly = std::vector<Rational>; // coefficient list, index = power of x

namespace detail {

inline void poly_trim(Poly& p) {
    while (!p.empty() && is_zero(p.back())) p.pop_back();
}

inline int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

// Euclidean division in Q[x]; returns {quotient, remainder}.
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    assert(!b.empty() && !is_zero(b.back()));
    Poly q;
    if (poly_deg(a) >= poly_deg(b)) q.assign(a.size() - b.size() + 1, Rational(0));
    while (poly_deg(a) >= poly_deg(b)) {
        int shift = poly_deg(a) - poly_deg(b);
        Rational c = a.back() / b.back();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= c * b[i];
        poly_trim(a);
    }
    return {std::move(q), std::move(a)};
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (!is_zero(b[j])) r[i + j] += a[i] * b[j];
    }
    return r;
}

// Cyclotomic polynomial Phi_n by the divisor recursion
// x^n - 1 = prod_{d | n} Phi_d(x), i.e. divide x^n - 1 by all proper Phi_d.
inline Poly cyclotomic_poly(int n, std::map<int, Poly>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Poly num(n + 1, Rational(0));
    num[0] = Rational(-1);
    num[n] = Rational(1);
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        Poly phi_d = cyclotomic_poly(d, memo);
        auto [q, r] = poly_divmod(num, phi_d);
        assert(r.empty() && "x^n - 1 must be divisible by Phi_d for d | n");
        num = std::move(q);
    }
    memo[n] = num;
    return num;
}

} // namespace detail

class Scalar;

// Field data for one height h, built once and shared. Immutable after
// construction, so a const reference can be used from any thread.
class FieldContext {
public:
    explicit FieldContext(int h) : h_(h), order_(4 * h) {
        if (h < 2) throw std::invalid_argument("height must be at least 2");
        std::map<int, Poly> memo;
        min_poly_ = detail::cyclotomic_poly(order_, memo);
        degree_ = detail::poly_deg(min_poly_);
        // Reduction rows: x^{d+j} mod Phi for j = 0..d-2 (a product of two
        // reduced elements has degree at most 2d-2).
        Poly cur(min_poly_.begin(), min_poly_.end() - 1); // x^d = -(lower part), monic
        for (auto& c : cur) c = -c;
        for (int j = 0; j + 1 < degree_; ++j) {
            reduction_rows_.push_back(cur);
            // multiply by x, reduce the top coefficient if it spills over
            Poly next(degree_, Rational(0));
            for (int i = 0; i + 1 < degree_; ++i) next[i + 1] = cur[i];
            if (!is_zero(cur[degree_ - 1])) {
                const Poly& top = reduction_rows_.front(); // x^d mod Phi
                for (int i = 0; i < degree_; ++i) next[i] += cur[degree_ - 1] * top[i];
            }
            cur = std::move(next);
        }
        // Power table zeta^k, k = 0..4h-1, as reduced coordinate vectors.
        std::vector<Rational> pw(degree_, Rational(0));
        pw[0] = Rational(1);
        for (int k = 0; k < order_; ++k) {
            zeta_powers_.push_back(pw);
            // multiply by x with reduction
            std::vector<Rational> nx(degree_, Rational(0));
            for (int i = 0; i + 1 < degree_; ++i) nx[i + 1] = pw[i];
            if (!is_zero(pw[degree_ - 1]))
                for (int i = 0; i < degree_; ++i)
                    nx[i] += pw[degree_ - 1] * reduction_rows_[0][i];
            pw = std::move(nx);
        }
    }

    FieldContext(const FieldContext&) = delete;
    FieldContext& operator=(const FieldContext&) = delete;

    int height() const { return h_; }
    int root_order() const { return order_; }       // 4h
    int degree() const { return degree_; }          // phi(4h)
    const Poly& minimal_polynomial() const { return min_poly_; }

    // zeta^k (any integer k), q^k = zeta^{2k}, and the half-power q^{k/2} = zeta^k.
    Scalar zeta_pow(long long k) const;
    Scalar q_pow(long long k) const;
    Scalar q_half_pow(long long k) const;
    Scalar zero() const;
    Scalar one() const;
    Scalar from_rational(Rational r) const;
    Scalar from_int(long long v) const;

    const std::vector<Rational>& zeta_power_coords(long long k) const {
        long long m = k % order_;
        if (m < 0) m += order_;
        return zeta_powers_[static_cast<size_t>(m)];
    }

    const std::vector<Poly>& reduction_rows() const { return reduction_rows_; }

private:
    int h_;
    int order_;
    int degree_ = 0;
    Poly min_poly_;
    std::vector<Poly> reduction_rows_;              // x^{d+j} mod Phi
    std::vector<std::vector<Rational>> zeta_powers_;
};

// Registry: one immutable context per height, created on first use.
inline const FieldContext& field_new(int h) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FieldContext>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(h);
    if (it == registry.end())
        it = registry.emplace(h, std::make_unique<FieldContext>(h)).first;
    return *it->second;
}

class Scalar {
public:
    Scalar() : ctx_(nullptr) {}
    Scalar(const FieldContext* ctx, std::vector<Rational> coords)
        : ctx_(ctx), c_(std::move(coords)) {
        assert(ctx_ && static_cast<int>(c_.size()) == ctx_->degree());
    }

    static Scalar zero(const FieldContext& ctx) {
        return Scalar(&ctx, std::vector<Rational>(ctx.degree(), Rational(0)));
    }
    static Scalar constant(const FieldContext& ctx, Rational r) {
        std::vector<Rational> c(ctx.degree(), Rational(0));
        c[0] = std::move(r);
        return Scalar(&ctx, std::move(c));
    }

    const FieldContext& ctx() const {
        assert(ctx_);
        return *ctx_;
    }
    const FieldContext* ctx_ptr() const { return ctx_; }
    bool valid() const { return ctx_ != nullptr; }
    const std::vector<Rational>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!qh::is_zero(x)) return false;
        return true;
    }

    bool operator==(const Scalar& o) const {
        assert(ctx_ == o.ctx_);
        return c_ == o.c_;
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const {
        Scalar r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Scalar& operator+=(const Scalar& o) {
        assert(ctx_ == o.ctx_);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        assert(ctx_ == o.ctx_);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        assert(a.ctx_ == b.ctx_ && a.ctx_);
        const int d = a.ctx_->degree();
        std::vector<Rational> prod(2 * d - 1, Rational(0));
        for (int i = 0; i < d; ++i) {
            if (qh::is_zero(a.c_[i])) continue;
            for (int j = 0; j < d; ++j)
                if (!qh::is_zero(b.c_[j])) prod[i + j] += a.c_[i] * b.c_[j];
        }
        std::vector<Rational> out(prod.begin(), prod.begin() + d);
        const auto& rows = a.ctx_->reduction_rows();
        for (int j = 0; j + 1 < d; ++j) {
            if (qh::is_zero(prod[d + j])) continue;
            const Poly& row = rows[j];
            for (int i = 0; i < d; ++i)
                if (!qh::is_zero(row[i])) out[i] += prod[d + j] * row[i];
        }
        return Scalar(a.ctx_, std::move(out));
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    Scalar& scale(const Rational& r) {
        for (auto& x : c_) x *= r;
        return *this;
    }

    // Multiplicative inverse via the extended Euclidean algorithm in Q[x]:
    // u * a + v * Phi = gcd = const, so a^{-1} = u / const mod Phi.
    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero field element");
        const int d = ctx_->degree();
        Poly r0 = ctx_->minimal_polynomial();
        Poly r1(c_.begin(), c_.end());
        detail::poly_trim(r1);
        Poly s0{}, s1{Rational(1)}; // coefficients of the input element
        while (!r1.empty() && detail::poly_deg(r1) > 0) {
            auto [q, rem] = detail::poly_divmod(r0, r1);
            Poly qs = detail::poly_mul(q, s1);
            Poly s2 = s0;
            if (s2.size() < qs.size()) s2.resize(qs.size(), Rational(0));
            for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
            detail::poly_trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        assert(!r1.empty() && "minimal polynomial is irreducible, gcd must be a unit");
        Rational g = r1[0];
        std::vector<Rational> out(d, Rational(0));
        for (size_t i = 0; i < s1.size(); ++i) out[i] = s1[i] / g;
        return Scalar(ctx_, std::move(out));
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    std::string to_string() const {
        std::string s = "(";
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ", ";
            s += qh::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    const FieldContext* ctx_;
    std::vector<Rational> c_;
};

inline Scalar FieldContext::zeta_pow(long long k) const {
    return Scalar(this, zeta_power_coords(k));
}
inline Scalar FieldContext::q_pow(long long k) const { return zeta_pow(2 * k); }
inline Scalar FieldContext::q_half_pow(long long k) const { return zeta_pow(k); }
inline Scalar FieldContext::zero() const { return Scalar::zero(*this); }
inline Scalar FieldContext::one() const { return Scalar::constant(*this, Rational(1)); }
inline Scalar FieldContext::from_rational(Rational r) const {
    return Scalar::constant(*this, std::move(r));
}
inline Scalar FieldContext::from_int(long long v) const {
    return Scalar::constant(*this, Rational(v));
}

// Quantum integer [n] = (q^n - q^{-n}) / (q - q^{-1}), evaluated as the
// balanced power sum q^{n-1} + q^{n-3} + ... + q^{1-n} so no division is
// needed and [h] = 0 comes out exactly.
inline Scalar q_int(const FieldContext& ctx, long long n) {
    Scalar s = ctx.zero();
    bool neg = n < 0;
    long long a = neg ? -n : n;
    for (long long k = 0; k < a; ++k)
        s += ctx.q_pow(a - 1 - 2 * k);
    return neg ? -s : s;
}

// [n]! = [1][2]...[n]; [0]! = 1. Vanishes for n >= h, like any product with
// a [h] factor.
inline Scalar q_factorial(const FieldContext& ctx, long long n) {
    if (n < 0) throw std::domain_error("q_factorial of negative argument");
    Scalar s = ctx.one();
    for (long long k = 2; k <= n; ++k) s *= q_int(ctx, k);
    return s;
}

// 1/[n]!, the divided-power normalization. Only defined below the height:
// [n]! = 0 for n >= h, and silently inverting zero is exactly the kind of
// bug this guard exists to catch.
inline Scalar q_divided_power_coeff(const FieldContext& ctx, long long n) {
    if (n < 0 || n >= ctx.height())
        throw std::domain_error("divided power 1/[n]! requires 0 <= n < h");
    return q_factorial(ctx, n).inverse();
}

// 1 + q^2 + q^4 + ... + q^{2(n-1)}. Since q^2 is a primitive h-th root of
// unity this vanishes exactly when h divides n.
inline Scalar q2_geometric_sum(const FieldContext& ctx, long long n) {
    Scalar s = ctx.zero();
    for (long long j = 0; j < n; ++j) s += ctx.q_pow(2 * j);
    return s;
}

} // namespace qh
