#pragma once

// Arbitrary-precision real numbers backed by MPFR. Precision is carried
// by every value and never read from any ambient/global default; binary
// operations round correctly (RNDN) at the larger operand precision.

#include <mpfr.h>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

#include "ratiolim/rational.hpp"

namespace ratiolim {

using prec_t = mpfr_prec_t;

inline constexpr prec_t kMinPrecision = 53;

class BigReal {
public:
    explicit BigReal(prec_t prec = kMinPrecision) {
        mpfr_init2(v_, prec);
        mpfr_set_ui(v_, 0u, MPFR_RNDN);
    }

    BigReal(const BigReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigReal(BigReal&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }

    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigReal& operator=(BigReal&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigReal() { mpfr_clear(v_); }

    static BigReal from_long(long x, prec_t prec) {
        BigReal r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }

    static BigReal from_double(double x, prec_t prec) {
        BigReal r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }

    /// Correctly rounded conversion of an exact rational (<= 0.5 ulp).
    static BigReal from_rational(const Rational& x, prec_t prec) {
        BigReal r(prec);
        mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    /// Parse a decimal or hex-float ("0x1.8p+1") literal.
    static BigReal from_string(const std::string& s, prec_t prec) {
        BigReal r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 0, MPFR_RNDN) != 0)
            throw std::invalid_argument("BigReal: cannot parse '" + s + "'");
        return r;
    }

    prec_t precision() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Upward-rounded double, for converting certified bounds.
    double to_double_up() const { return mpfr_get_d(v_, MPFR_RNDU); }

    /// Exact hexadecimal representation (lossless round-trip).
    std::string to_hex_string() const {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%Ra", v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    std::string to_decimal_string(int digits = 20) const {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    friend int cmp(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return !(a == b); }
    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal r(common_prec(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal r(common_prec(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal r(common_prec(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal r(common_prec(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    BigReal operator-() const {
        BigReal r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigReal& operator+=(const BigReal& o) { return *this = *this + o; }
    BigReal& operator-=(const BigReal& o) { return *this = *this - o; }
    BigReal& operator*=(const BigReal& o) { return *this = *this * o; }
    BigReal& operator/=(const BigReal& o) { return *this = *this / o; }

    friend BigReal abs(const BigReal& a) {
        BigReal r(a.precision());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigReal sqrt(const BigReal& a) {
        BigReal r(a.precision());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    /// Correctly rounded sqrt(a^2 + b^2).
    friend BigReal hypot(const BigReal& a, const BigReal& b) {
        BigReal r(common_prec(a, b));
        mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    friend BigReal atan2(const BigReal& y, const BigReal& x) {
        BigReal r(common_prec(y, x));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    /// a*b + c*d, correctly rounded as a single operation.
    static BigReal fmma(const BigReal& a, const BigReal& b, const BigReal& c, const BigReal& d,
                        prec_t prec) {
        BigReal r(prec);
        mpfr_fmma(r.v_, a.v_, b.v_, c.v_, d.v_, MPFR_RNDN);
        return r;
    }

    /// a*b - c*d, correctly rounded as a single operation.
    static BigReal fmms(const BigReal& a, const BigReal& b, const BigReal& c, const BigReal& d,
                        prec_t prec) {
        BigReal r(prec);
        mpfr_fmms(r.v_, a.v_, b.v_, c.v_, d.v_, MPFR_RNDN);
        return r;
    }

    /// Exact scaling by 2^e.
    BigReal scale2(long e) const {
        BigReal r(precision());
        mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
        return r;
    }

    /// Round a copy to a (typically lower) target precision.
    BigReal rounded_to(prec_t prec) const {
        BigReal r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    static prec_t common_prec(const BigReal& a, const BigReal& b) {
        return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    }

    mpfr_t v_;
};

} // namespace ratiolim
