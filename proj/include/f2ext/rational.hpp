#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "f2ext/error.hpp"

namespace f2ext {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(std::size_t e) { return BigInt(1) << e; }

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

/// Always "num/den", including integers ("3/1") and zero ("0/1").
inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Accepts "p/q" or a plain integer "p".
inline Rational parse_rational(std::string_view s) {
    try {
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
        BigInt num(std::string(s.substr(0, slash)));
        BigInt den(std::string(s.substr(slash + 1)));
        if (den == 0) throw parse_error("zero denominator in rational: " + std::string(s));
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const parse_error*>(&e)) throw;
        throw parse_error("malformed rational: " + std::string(s));
    }
}

} // namespace f2ext
