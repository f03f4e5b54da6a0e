#include "qhomology/cyclotomic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace qh;

namespace {

// Frozen minimal polynomials for the heights in scope, as coefficient lists
// (constant term first). Independently known closed forms.
Poly poly_of(std::initializer_list<long long> cs) {
    Poly p;
    for (long long c : cs) p.push_back(Rational(c));
    return p;
}

Scalar random_scalar(const FieldContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coeff(-6, 6);
    std::vector<Rational> c;
    for (int i = 0; i < ctx.degree(); ++i)
        c.push_back(Rational(coeff(rng), 1 + (coeff(rng) & 3)));
    return Scalar(&ctx, std::move(c));
}

} // namespace

TEST_CASE("minimal polynomials match the known closed forms") {
    CHECK(field_new(2).minimal_polynomial() == poly_of({1, 0, 0, 0, 1}));            // x^4 + 1
    CHECK(field_new(3).minimal_polynomial() == poly_of({1, 0, -1, 0, 1}));           // x^4 - x^2 + 1
    CHECK(field_new(4).minimal_polynomial() == poly_of({1, 0, 0, 0, 0, 0, 0, 0, 1})); // x^8 + 1
    CHECK(field_new(5).minimal_polynomial() == poly_of({1, 0, -1, 0, 1, 0, -1, 0, 1}));
    CHECK(field_new(2).degree() == 4);
    CHECK(field_new(3).degree() == 4);
    CHECK(field_new(4).degree() == 8);
    CHECK(field_new(5).degree() == 8);
}

TEST_CASE("height below two is rejected") {
    CHECK_THROWS_AS(FieldContext(1), std::invalid_argument);
    CHECK_THROWS_AS(FieldContext(0), std::invalid_argument);
}

TEST_CASE("root-of-unity bookkeeping") {
    const auto& f2 = field_new(2);
    // zeta^4 = -1 at h = 2 (primitive 8th root), so zeta * zeta^3 = -1.
    CHECK(f2.zeta_pow(1) * f2.zeta_pow(3) == -f2.one());
    for (int h = 2; h <= 5; ++h) {
        const auto& f = field_new(h);
        CHECK(f.zeta_pow(4 * h) == f.one());
        CHECK(f.zeta_pow(2 * h) == -f.one());       // zeta^{2h} = -1
        CHECK(f.q_pow(h) == -f.one());              // q^h = -1
        CHECK(f.q_pow(1) * f.q_pow(h - 1) == -f.one());
        CHECK(f.q_half_pow(2) == f.q_pow(1));
        CHECK(f.zeta_pow(-3) * f.zeta_pow(3) == f.one());
    }
}

TEST_CASE("quantum integers: vanishing and reflection laws") {
    for (int h = 2; h <= 5; ++h) {
        const auto& f = field_new(h);
        CHECK(q_int(f, 0).is_zero());
        CHECK(q_int(f, 1) == f.one());
        CHECK(q_int(f, h).is_zero());
        for (int n = 0; n <= 2 * h; ++n) {
            CHECK(q_int(f, h - n) == q_int(f, n));
            CHECK(q_int(f, 2 * h - n) == -q_int(f, n));
            CHECK(q_int(f, -n) == -q_int(f, n));
        }
        // Definition check against the quotient form (q - q^{-1} != 0).
        Scalar denom = f.q_pow(1) - f.q_pow(-1);
        for (int n = 1; n < 2 * h; ++n)
            CHECK(q_int(f, n) == (f.q_pow(n) - f.q_pow(-n)) / denom);
    }
}

TEST_CASE("small quantum integer values") {
    const auto& f2 = field_new(2);
    CHECK(q_int(f2, 2).is_zero());
    CHECK(q_int(f2, 3) == -f2.one());
    const auto& f3 = field_new(3);
    CHECK(q_int(f3, 2) == f3.one()); // [2] = q + q^{-1} = 2cos(pi/3) = 1
}

TEST_CASE("geometric sums of q^2 vanish exactly at multiples of h") {
    for (int h = 2; h <= 5; ++h) {
        const auto& f = field_new(h);
        for (int n = 1; n < h; ++n) CHECK_FALSE(q2_geometric_sum(f, n).is_zero());
        CHECK(q2_geometric_sum(f, h).is_zero());
        CHECK(q2_geometric_sum(f, 2 * h).is_zero());
        // partial sum identity: sum_{j<n} q^{2j} = q^{n-1} [n]
        for (int n = 1; n <= 2 * h; ++n)
            CHECK(q2_geometric_sum(f, n) == f.q_pow(n - 1) * q_int(f, n));
    }
}

TEST_CASE("factorials and divided powers") {
    for (int h = 2; h <= 5; ++h) {
        const auto& f = field_new(h);
        CHECK(q_factorial(f, 0) == f.one());
        CHECK(q_factorial(f, h - 1) == q_factorial(f, h - 2) * q_int(f, h - 1));
        CHECK(q_factorial(f, h).is_zero());
        for (int n = 0; n < h; ++n) {
            Scalar c = q_divided_power_coeff(f, n);
            CHECK(c * q_factorial(f, n) == f.one());
        }
        CHECK_THROWS_AS(q_divided_power_coeff(f, h), std::domain_error);
        CHECK_THROWS_AS(q_divided_power_coeff(f, h + 3), std::domain_error);
        CHECK_THROWS_AS(q_divided_power_coeff(f, -1), std::domain_error);
    }
}

TEST_CASE("field arithmetic is exact: (a*b)/b == a on random elements") {
    for (int h : {2, 3, 4, 5}) {
        const auto& f = field_new(h);
        std::mt19937_64 rng(20260814 + h);
        for (int t = 0; t < 25; ++t) {
            Scalar a = random_scalar(f, rng);
            Scalar b = random_scalar(f, rng);
            if (b.is_zero()) continue;
            CHECK((a * b) / b == a);
            CHECK(a * (b + b) == a * b + a * b);
            CHECK(-(-a) == a);
        }
    }
}

TEST_CASE("division by zero raises") {
    const auto& f = field_new(3);
    CHECK_THROWS_AS(f.one() / f.zero(), std::domain_error);
    CHECK_THROWS_AS(q_int(f, 3).inverse(), std::domain_error);
}

TEST_CASE("inverse round trip on every power of zeta") {
    for (int h : {2, 3, 4, 5}) {
        const auto& f = field_new(h);
        for (int k = 0; k < 4 * h; ++k) {
            Scalar z = f.zeta_pow(k);
            CHECK(z * z.inverse() == f.one());
            CHECK(z.inverse() == f.zeta_pow(-k));
        }
    }
}
