#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcorr {

/// Exact rational number used for every interval endpoint and step coefficient.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) {
    if (q == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(p, q);
}

/// Largest integer not exceeding q.
inline BigInt floor_of(const Rational& q) {
    BigInt n = numerator_of(q);
    BigInt d = denominator_of(q);
    BigInt r = n / d;
    if (n < 0 && r * d != n) r -= 1;
    return r;
}

inline BigInt ceil_of(const Rational& q) {
    BigInt f = floor_of(q);
    return (Rational(f) == q) ? f : f + 1;
}

/// Fractional part in [0,1).
inline Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

/// "p/q" (or "p" when the denominator is one).
inline std::string to_string(const Rational& q) {
    BigInt d = denominator_of(q);
    if (d == 1) return numerator_of(q).str();
    return numerator_of(q).str() + "/" + d.str();
}

namespace detail {

inline BigInt parse_integer(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("malformed integer: " + std::string(s));
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer: " + std::string(s));
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p/q" or a plain integer. Decimal notation is rejected.
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(s));
    BigInt p = detail::parse_integer(s.substr(0, slash));
    BigInt q = detail::parse_integer(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
    return Rational(p, q);
}

/// Parses an exact decimal ("-0.125", "3", "1e-3") into a rational. Also accepts "p/q".
inline Rational parse_decimal(std::string_view s) {
    if (s.find('/') != std::string_view::npos) return parse_rational(s);
    std::string_view mant = s;
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string_view::npos) {
        mant = s.substr(0, e);
        std::string ex(s.substr(e + 1));
        try {
            std::size_t used = 0;
            exp10 = std::stol(ex, &used);
            if (used != ex.size()) throw std::invalid_argument("bad exponent");
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed decimal: " + std::string(s));
        }
    }
    std::string digits;
    bool neg = false;
    std::size_t i = 0;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        neg = mant[0] == '-';
        i = 1;
    }
    long frac_digits = 0;
    bool seen_dot = false;
    for (; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot) ++frac_digits;
        } else {
            throw std::invalid_argument("malformed decimal: " + std::string(s));
        }
    }
    if (digits.empty()) throw std::invalid_argument("malformed decimal: " + std::string(s));
    BigInt n = detail::parse_integer(digits);
    long shift = exp10 - frac_digits;
    BigInt p10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift < 0 ? -shift : shift));
    Rational r = shift >= 0 ? Rational(n * p10) : Rational(n, p10);
    return neg ? Rational(-r) : r;
}

/// Lossless text form: a terminating decimal when one exists, "p/q" otherwise.
inline std::string to_decimal_string(const Rational& q) {
    BigInt d = denominator_of(q);
    BigInt n = numerator_of(q);
    unsigned twos = 0, fives = 0;
    BigInt rest = d;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return to_string(q);
    unsigned k = twos > fives ? twos : fives;
    if (k == 0) return n.str();
    BigInt scaled = n * boost::multiprecision::pow(BigInt(10), k) / d;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.str();
    if (s.size() <= k) s.insert(0, k + 1 - s.size(), '0');
    s.insert(s.size() - k, ".");
    return neg ? "-" + s : s;
}

/// Exact value of a double as a rational.
inline Rational from_double(double x) { return Rational(x); }

/// Returns k when q == 2^-k·m for odd m or m == 0 with denominator 2^k; nullopt for non-dyadic q.
inline std::optional<unsigned> dyadic_level(const Rational& q) {
    BigInt d = denominator_of(q);
    unsigned k = 0;
    while (d % 2 == 0) { d /= 2; ++k; }
    if (d != 1) return std::nullopt;
    return k;
}

/// q as an int64 fraction when it fits.
inline bool fits_int64(const Rational& q, std::int64_t& num, std::int64_t& den) {
    BigInt n = numerator_of(q), d = denominator_of(q);
    static const BigInt lim = BigInt(1) << 62;
    if (n >= lim || n <= -lim || d >= lim) return false;
    num = n.convert_to<std::int64_t>();
    den = d.convert_to<std::int64_t>();
    return true;
}

inline Rational pow2_inverse(unsigned k) { return Rational(BigInt(1), BigInt(1) << k); }

}  // namespace hcorr
