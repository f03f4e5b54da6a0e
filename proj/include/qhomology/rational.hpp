#pragma once

// Exact rational arithmetic. We use boost::multiprecision's cpp_rational as
// the backing type: it is header-only, always normalized, and fast enough for
// the coefficient heights that show up here (roots-of-unity coordinates stay
// small; elimination can blow them up, which is exactly why the type must be
// arbitrary precision).

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

namespace qh {

using Rational = boost::multiprecision::cpp_rational;
using Integer  = boost::multiprecision::cpp_int;

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline std::string num_str(const Rational& r) {
    return numerator(r).str();
}

inline std::string den_str(const Rational& r) {
    return denominator(r).str();
}

// Parses "a" or "a/b" in base 10. Throws std::invalid_argument on garbage or
// a zero denominator.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(std::string("bad rational '") + s + "': " + e.what());
    }
}

inline Rational parse_rational(const std::string& num, const std::string& den) {
    Integer n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(n, d);
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return num_str(r);
    return num_str(r) + "/" + den_str(r);
}

} // namespace qh
