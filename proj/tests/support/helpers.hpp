#pragma once

#include <vector>

#include "ratiolim/decompose.hpp"

namespace ratiolim::testsupport {

inline double dist(const BigComplex& a, const BigComplex& b) {
    return complex_modulus(a - b).to_double();
}

inline BigComplex bc(double re, double im, prec_t prec = 256) {
    return BigComplex::from_double(re, im, prec);
}

inline GaussianRational gr(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return GaussianRational(r);
}

inline GaussianRational gri(long re_n, long im_n) {
    return GaussianRational(Rational(re_n), Rational(im_n));
}

inline RecurrenceInstance make_inst(const std::vector<long>& sig, const std::vector<long>& init) {
    std::vector<GaussianRational> s, a;
    for (long x : sig)
        s.push_back(gr(x));
    for (long x : init)
        a.push_back(gr(x));
    return RecurrenceInstance(std::move(s), std::move(a));
}

/// (1 + sqrt(5)) / 2, computed independently of any solver path.
inline BigReal golden_ratio(prec_t prec) {
    return (BigReal::from_long(1, prec) + sqrt(BigReal::from_long(5, prec))) /
           BigReal::from_long(2, prec);
}

} // namespace ratiolim::testsupport
