#pragma once

// Exact arithmetic substrate: big rationals and Gaussian rationals
// (complex numbers with rational real and imaginary parts). All
// operations are exact; equality carries no tolerance.

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ratiolim {

using Rational = mpq_class;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline mpz_class parse_integer(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t.front() == '+') // mpz rejects an explicit leading '+'
        t.erase(t.begin());
    if (t.empty())
        throw ParseError("empty integer token");
    try {
        return mpz_class(t);
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid integer token '" + s + "'");
    }
}

} // namespace detail

/// Parse "p/q" or integer shorthand "p" into a canonical rational.
inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    mpz_class num, den;
    if (slash == std::string::npos) {
        num = detail::parse_integer(s);
        den = 1;
    } else {
        num = detail::parse_integer(s.substr(0, slash));
        den = detail::parse_integer(s.substr(slash + 1));
        if (den == 0)
            throw ParseError("zero denominator in '" + s + "'");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Lowest-terms text form: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
    return r.get_str();
}

/// Complex number with rational real and imaginary parts. Values are
/// always canonical (lowest terms, positive denominators), so == is
/// exact structural equality.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(long r) : re(r), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    /// Exact squared modulus re^2 + im^2 (avoids square roots entirely).
    Rational squared_modulus() const { return re * re + im * im; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
        return !(a == b);
    }

    GaussianRational operator-() const { return {-re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero())
            throw std::domain_error("GaussianRational: division by zero");
        const Rational d = b.squared_modulus();
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }

    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }
};

/// Parse the Gaussian-rational text format: "p/q", "p/q+r/s i",
/// "p/q-r/s i", integers as shorthand, whitespace-insensitive. A pure
/// imaginary "r/s i" is accepted too.
inline GaussianRational parse_gaussian_rational(std::string_view input) {
    std::string s;
    s.reserve(input.size());
    for (char c : input)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw ParseError("empty Gaussian-rational literal");

    // Split at the first '+'/'-' past position 0; a leading sign
    // belongs to the real part.
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '+' || s[i] == '-') {
            split = i;
            break;
        }
    }

    const auto parse_im_token = [](std::string t) -> Rational {
        if (t.empty() || (t.back() != 'i' && t.back() != 'I'))
            throw ParseError("imaginary part must end in 'i'");
        t.pop_back();
        if (t.empty() || t == "+")
            return Rational(1);
        if (t == "-")
            return Rational(-1);
        return parse_rational(t);
    };

    if (split != std::string::npos) {
        std::string re_part = s.substr(0, split);
        std::string im_part = s.substr(split); // keeps the sign
        return {parse_rational(re_part), parse_im_token(std::move(im_part))};
    }
    if (s.back() == 'i' || s.back() == 'I')
        return {Rational(0), parse_im_token(std::move(s))};
    return {parse_rational(s), Rational(0)};
}

/// Canonical print form; parse(print(x)) == x bit-exactly.
inline std::string to_string(const GaussianRational& x) {
    if (x.im == 0)
        return to_string(x.re);
    std::string s = to_string(x.re);
    if (x.im < 0) {
        s += "-";
        s += to_string(Rational(-x.im));
    } else {
        s += "+";
        s += to_string(x.im);
    }
    s += " i";
    return s;
}

} // namespace ratiolim
