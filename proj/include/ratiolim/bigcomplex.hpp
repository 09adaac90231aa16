#pragma once

// Arbitrary-precision complex numbers as pairs of BigReal. Real and
// imaginary parts of a multiplication are each correctly rounded
// (mpfr fused multiply-multiply ops); division carries 32 guard bits,
// so results stay within ~2 ulp of exact at the stated precision.

#include <string>
#include <utility>

#include "ratiolim/bigfloat.hpp"
#include "ratiolim/rational.hpp"

namespace ratiolim {

struct BigComplex {
    BigReal re;
    BigReal im;

    explicit BigComplex(prec_t prec = kMinPrecision) : re(prec), im(prec) {}
    BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}

    static BigComplex from_long(long r, long i, prec_t prec) {
        return {BigReal::from_long(r, prec), BigReal::from_long(i, prec)};
    }

    static BigComplex from_double(double r, double i, prec_t prec) {
        return {BigReal::from_double(r, prec), BigReal::from_double(i, prec)};
    }

    prec_t precision() const { return std::max(re.precision(), im.precision()); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }

    BigComplex conj() const { return {re, -im}; }
    BigComplex operator-() const { return {-re, -im}; }

    friend bool operator==(const BigComplex& a, const BigComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const BigComplex& a, const BigComplex& b) { return !(a == b); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        const prec_t p = std::max(a.precision(), b.precision());
        return {BigReal::fmms(a.re, b.re, a.im, b.im, p),
                BigReal::fmma(a.re, b.im, a.im, b.re, p)};
    }
    friend BigComplex operator*(const BigReal& s, const BigComplex& z) {
        return {s * z.re, s * z.im};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        if (b.is_zero())
            throw std::domain_error("BigComplex: division by zero");
        const prec_t p = std::max(a.precision(), b.precision());
        const prec_t pg = p + 32; // guard bits for the compound formula
        BigReal num_re = BigReal::fmma(a.re, b.re, a.im, b.im, pg);
        BigReal num_im = BigReal::fmms(a.im, b.re, a.re, b.im, pg);
        BigReal den = BigReal::fmma(b.re, b.re, b.im, b.im, pg);
        return {(num_re / den).rounded_to(p), (num_im / den).rounded_to(p)};
    }

    BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
    BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
    BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }
    BigComplex& operator/=(const BigComplex& o) { return *this = *this / o; }

    /// Integer power by binary exponentiation; negative exponents invert.
    BigComplex pow_int(long k) const {
        const prec_t p = precision();
        BigComplex base = *this;
        bool invert = false;
        unsigned long e;
        if (k < 0) {
            invert = true;
            e = static_cast<unsigned long>(-(k + 1)) + 1ul;
        } else {
            e = static_cast<unsigned long>(k);
        }
        BigComplex acc = from_long(1, 0, p);
        while (e > 0) {
            if (e & 1ul)
                acc *= base;
            base *= base;
            e >>= 1;
        }
        if (invert)
            return from_long(1, 0, p) / acc;
        return acc;
    }

    std::string to_string(int digits = 20) const {
        std::string s = re.to_decimal_string(digits);
        if (!im.is_zero()) {
            s += (im.sign() < 0) ? " - " : " + ";
            s += abs(im).to_decimal_string(digits);
            s += "i";
        }
        return s;
    }
};

/// Correctly rounded conversion of an exact Gaussian rational
/// (each part within 0.5 ulp, hence the whole within 1 ulp).
inline BigComplex to_big_complex(const GaussianRational& x, prec_t prec) {
    if (prec < kMinPrecision)
        throw std::invalid_argument("to_big_complex: precision must be >= 53 bits");
    return {BigReal::from_rational(x.re, prec), BigReal::from_rational(x.im, prec)};
}

/// |z| at z's working precision, within 2 ulp of sqrt(re^2 + im^2).
inline BigReal complex_modulus(const BigComplex& z) {
    return hypot(z.re, z.im);
}

/// Exact re^2 + im^2 rounded once; cheaper than modulus for comparisons.
inline BigReal squared_modulus(const BigComplex& z) {
    return BigReal::fmma(z.re, z.re, z.im, z.im, z.precision());
}

} // namespace ratiolim
