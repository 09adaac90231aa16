#pragma once

// Simultaneous root iteration (Aberth-Ehrlich) over BigComplex, plus
// a posteriori Weierstrass residual radii: for pairwise distinct
// approximations z_1..z_m of a degree-m polynomial, the disks around
// z_i with radius m*|p(z_i)| / (|lc| * prod_{j!=i} |z_i - z_j|) cover
// all roots, and any isolated disk contains exactly one.

#include <algorithm>
#include <vector>

#include "ratiolim/bigcomplex.hpp"
#include "ratiolim/polynomial.hpp"

namespace ratiolim {

struct ApproxRoot {
    BigComplex value;
    double radius = 0.0; // certified inclusion radius
};

namespace detail {

/// Cauchy bound: all roots lie within 1 + max|c_i| / |lc|.
inline BigReal root_bound(const ComplexPolynomial& p) {
    const prec_t prec = p.lc().precision();
    BigReal maxc = BigReal::from_long(0, prec);
    for (int k = 0; k < p.degree(); ++k) {
        BigReal m = complex_modulus(p.coeffs[static_cast<std::size_t>(k)]);
        if (m > maxc)
            maxc = m;
    }
    return BigReal::from_long(1, prec) + maxc / complex_modulus(p.lc());
}

/// sum_k |c_k| |z|^k, an upper-scale for evaluation error bounds.
inline BigReal eval_abs_sum(const ComplexPolynomial& p, const BigReal& zmod) {
    const prec_t prec = zmod.precision();
    BigReal acc = BigReal::from_long(0, prec);
    BigReal zpow = BigReal::from_long(1, prec);
    for (const BigComplex& c : p.coeffs) {
        acc += complex_modulus(c) * zpow;
        zpow *= zmod;
    }
    return acc;
}

inline void jitter_apart(std::vector<BigComplex>& z, std::size_t i, prec_t prec) {
    // Deterministic nudge used only if two iterates collide bit-exactly.
    BigReal eps = (BigReal::from_long(1, prec) + complex_modulus(z[i]))
                      .scale2(static_cast<long>(-prec / 3));
    z[i] = z[i] + BigComplex(eps * BigReal::from_double(1.0 + 0.25 * static_cast<double>(i), prec),
                             eps);
}

} // namespace detail

struct AberthOptions {
    int max_sweeps = 400;
};

/// Run Aberth-Ehrlich at the polynomial's precision and return
/// approximations with certified radii. No separation requirement is
/// imposed here; near-multiple roots simply come back with
/// overlapping disks.
inline std::vector<ApproxRoot> aberth_roots(const ComplexPolynomial& p,
                                            const AberthOptions& opt = {}) {
    const int m = p.degree();
    if (m < 1)
        throw std::invalid_argument("aberth_roots: degree must be >= 1");
    const prec_t prec = p.lc().precision();
    const BigReal one = BigReal::from_long(1, prec);

    if (m == 1) {
        BigComplex root = -(p.coeffs[0] / p.coeffs[1]);
        // residual bound: |p(r)| / |c1|
        BigReal res = complex_modulus(p.eval(root)) +
                      detail::eval_abs_sum(p, complex_modulus(root)).scale2(-prec + 3);
        double radius = (res / complex_modulus(p.coeffs[1])).to_double_up();
        return {ApproxRoot{std::move(root), radius}};
    }

    // Initial guesses on a circle of the Cauchy radius, angles offset
    // by pi/(2m) so they avoid axes and symmetric stalls.
    const BigReal r0 = detail::root_bound(p);
    std::vector<BigComplex> z;
    z.reserve(static_cast<std::size_t>(m));
    const BigReal two_pi = BigReal::from_double(2.0, prec) *
                           [&] { BigReal pi(prec); mpfr_const_pi(pi.raw(), MPFR_RNDN); return pi; }();
    for (int k = 0; k < m; ++k) {
        BigReal theta = two_pi * BigReal::from_double((static_cast<double>(k) + 0.25) /
                                                          static_cast<double>(m),
                                                      prec);
        BigReal c(prec), s(prec);
        mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
        z.emplace_back(r0 * c, r0 * s);
    }

    const ComplexPolynomial dp = p.derivative();

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        bool all_small = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            BigComplex pz = p.eval(z[i]);
            if (pz.is_zero())
                continue;
            BigComplex w(prec);
            BigComplex dpz = dp.eval(z[i]);
            if (dpz.is_zero()) {
                // Weierstrass fallback when the derivative vanishes at the iterate.
                BigComplex denom = p.lc();
                for (std::size_t j = 0; j < z.size(); ++j) {
                    if (j == i)
                        continue;
                    BigComplex d = z[i] - z[j];
                    if (d.is_zero()) {
                        detail::jitter_apart(z, j, prec);
                        d = z[i] - z[j];
                    }
                    denom *= d;
                }
                w = pz / denom;
            } else {
                BigComplex newton = pz / dpz;
                BigComplex s = BigComplex::from_long(0, 0, prec);
                for (std::size_t j = 0; j < z.size(); ++j) {
                    if (j == i)
                        continue;
                    BigComplex d = z[i] - z[j];
                    if (d.is_zero()) {
                        detail::jitter_apart(z, j, prec);
                        d = z[i] - z[j];
                    }
                    s += BigComplex::from_long(1, 0, prec) / d;
                }
                BigComplex denom = BigComplex::from_long(1, 0, prec) - newton * s;
                w = denom.is_zero() ? newton : newton / denom;
            }
            z[i] = z[i] - w;
            BigReal thr = (one + complex_modulus(z[i])).scale2(-prec + 6);
            if (complex_modulus(w) > thr)
                all_small = false;
        }
        if (all_small)
            break;
    }

    // A posteriori radii; evaluation and coefficient-conversion error
    // folded into the numerator.
    std::vector<ApproxRoot> out;
    out.reserve(z.size());
    const BigReal lc_mod = complex_modulus(p.lc());
    const BigReal fudge = one + one.scale2(-prec + 8);
    for (std::size_t i = 0; i < z.size(); ++i) {
        BigReal num = complex_modulus(p.eval(z[i])) +
                      detail::eval_abs_sum(p, complex_modulus(z[i])).scale2(-prec) *
                          BigReal::from_long(2 * m + 6, prec);
        BigReal denom = lc_mod;
        for (std::size_t j = 0; j < z.size(); ++j)
            if (j != i)
                denom *= complex_modulus(z[i] - z[j]);
        BigReal rad = BigReal::from_long(m, prec) * num / denom * fudge;
        out.push_back(ApproxRoot{z[i], rad.to_double_up()});
    }
    return out;
}

} // namespace ratiolim
