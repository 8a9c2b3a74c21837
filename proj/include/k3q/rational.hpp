#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace k3q {

// Exact arithmetic everywhere: coefficients are arbitrary-precision
// rationals, kept in lowest terms with positive denominator by the
// backing type.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(Integer(num), Integer(den));
}

// base^e for any integer exponent; 0^0 = 1, 0^negative is an error.
inline Rational pow_int(const Rational& base, long long e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw std::domain_error("zero raised to a negative power");
        return Rational(0);
    }
    Rational b = e > 0 ? base : Rational(1) / base;
    unsigned long long n = e > 0 ? static_cast<unsigned long long>(e)
                                 : static_cast<unsigned long long>(-e);
    Rational acc(1);
    while (n) {
        if (n & 1ULL) acc *= b;
        b *= b;
        n >>= 1ULL;
    }
    return acc;
}

inline Integer factorial(long long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    Integer acc(1);
    for (long long i = 2; i <= n; ++i) acc *= i;
    return acc;
}

inline Integer binomial(long long n, long long k) {
    if (k < 0 || k > n) return Integer(0);
    Integer acc(1);
    for (long long i = 0; i < k; ++i) {
        acc *= (n - i);
        acc /= (i + 1);
    }
    return acc;
}

// "p/q" in lowest terms; the "/q" is dropped when q == 1.
inline std::string rational_to_string(const Rational& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) {
        s += "/";
        s += denominator(x).str();
    }
    return s;
}

inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational literal: " + s);
    }
}

}  // namespace k3q
