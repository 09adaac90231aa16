#pragma once

// Forward iteration of a linear recurrence, the empirical ratio-limit
// detector, and the ratio self-map whose fixed points are exactly the
// characteristic roots. Exact instances iterate in Gaussian-rational
// arithmetic; ratios are formed exactly and only converted to floats
// for the tolerance tests.

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ratiolim/bigcomplex.hpp"
#include "ratiolim/charpoly.hpp"
#include "ratiolim/rational.hpp"

namespace ratiolim {

struct ZeroComponent : std::domain_error {
    ZeroComponent() : std::domain_error("ratio map is only defined on nonzero components") {}
};

struct RecurrenceInstance {
    std::vector<GaussianRational> signature; // b_1..b_n
    std::vector<GaussianRational> initial;   // a_{-n+1}..a_0, ascending index

    RecurrenceInstance(std::vector<GaussianRational> sig, std::vector<GaussianRational> init)
        : signature(std::move(sig)), initial(std::move(init)) {
        if (signature.empty() || signature.size() != initial.size())
            throw std::invalid_argument(
                "RecurrenceInstance: signature and initial conditions must have equal length n >= 1");
        if (signature.back().is_zero())
            throw ZeroTrailingCoefficient();
    }

    int order() const { return static_cast<int>(signature.size()); }
};

/// Complex-float twin of RecurrenceInstance; routes through root
/// clustering instead of the exact square-free path.
struct FloatRecurrenceInstance {
    std::vector<std::complex<double>> signature;
    std::vector<std::complex<double>> initial;

    FloatRecurrenceInstance(std::vector<std::complex<double>> sig,
                            std::vector<std::complex<double>> init)
        : signature(std::move(sig)), initial(std::move(init)) {
        if (signature.empty() || signature.size() != initial.size())
            throw std::invalid_argument(
                "FloatRecurrenceInstance: signature and initial conditions must have equal length n >= 1");
        if (signature.back() == std::complex<double>(0.0, 0.0))
            throw ZeroTrailingCoefficient();
    }

    int order() const { return static_cast<int>(signature.size()); }
};

/// Terms F_{-n+1}..F_{k_max}; index k lives at position k + n - 1.
template <typename T>
std::vector<T> iterate_terms(std::span<const T> signature, std::span<const T> initial,
                             long k_max) {
    if (k_max < 0)
        throw std::invalid_argument("iterate: k_max must be >= 0");
    const std::size_t n = signature.size();
    std::vector<T> f(initial.begin(), initial.end());
    f.reserve(n + static_cast<std::size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) {
        T acc = signature[0] * f[f.size() - 1];
        for (std::size_t i = 1; i < n; ++i)
            acc = acc + signature[i] * f[f.size() - 1 - i];
        f.push_back(std::move(acc));
    }
    return f;
}

/// Exact forward iteration of the recurrence.
inline std::vector<GaussianRational> iterate(const RecurrenceInstance& inst, long k_max) {
    return iterate_terms<GaussianRational>(inst.signature, inst.initial, k_max);
}

struct RatioEstimate {
    enum class Status { Converged, Oscillating, ZeroTermsPersist, Undecided };

    Status status = Status::Undecided;
    std::optional<BigComplex> value; // set only for Converged
    std::optional<long> k0;          // largest index with F_k = 0, if any
    long samples_used = 0;
};

inline const char* to_string(RatioEstimate::Status s) {
    switch (s) {
        case RatioEstimate::Status::Converged: return "converged";
        case RatioEstimate::Status::Oscillating: return "oscillating";
        case RatioEstimate::Status::ZeroTermsPersist: return "zero_terms_persist";
        case RatioEstimate::Status::Undecided: return "undecided";
    }
    return "undecided";
}

namespace detail {

template <typename T>
BigComplex term_to_big_complex(const T& x, prec_t prec);

template <>
inline BigComplex term_to_big_complex(const GaussianRational& x, prec_t prec) {
    return to_big_complex(x, prec);
}

template <>
inline BigComplex term_to_big_complex(const BigComplex& x, prec_t prec) {
    return BigComplex(x.re.rounded_to(prec), x.im.rounded_to(prec));
}

// Window of consecutive ratios F_{k+1}/F_k for k in [k_lo, k_hi],
// converted to BigComplex; nullopt if any term in [k_lo, k_hi + 1] is zero.
template <typename T>
std::optional<std::vector<BigComplex>> ratio_window(const std::vector<T>& f, std::size_t n,
                                                    long k_lo, long k_hi, prec_t prec) {
    std::vector<BigComplex> out;
    out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (long k = k_lo; k <= k_hi + 1; ++k) {
        if (f[static_cast<std::size_t>(k + static_cast<long>(n) - 1)].is_zero())
            return std::nullopt;
    }
    for (long k = k_lo; k <= k_hi; ++k) {
        const T& num = f[static_cast<std::size_t>(k + static_cast<long>(n))];
        const T& den = f[static_cast<std::size_t>(k + static_cast<long>(n) - 1)];
        out.push_back(term_to_big_complex<T>(num / den, prec));
    }
    return out;
}

inline BigReal window_spread(const std::vector<BigComplex>& w) {
    BigReal spread = BigReal::from_long(0, w.empty() ? kMinPrecision : w[0].precision());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            BigReal d = complex_modulus(w[i] - w[j]);
            if (d > spread)
                spread = d;
        }
    return spread;
}

template <typename T>
RatioEstimate empirical_ratio_impl(std::span<const T> signature, std::span<const T> initial,
                                   long k_max, double tol, prec_t prec) {
    const std::size_t n = signature.size();
    const long window = std::max<long>(8, 2 * static_cast<long>(n));
    if (k_max < static_cast<long>(n) + window)
        throw std::invalid_argument("empirical_ratio: k_max must be >= n + window");
    if (!(tol > 0))
        throw std::invalid_argument("empirical_ratio: tol must be positive");

    const std::vector<T> f = iterate_terms<T>(signature, initial, k_max);

    RatioEstimate est;
    for (long k = -static_cast<long>(n) + 1; k <= k_max; ++k)
        if (f[static_cast<std::size_t>(k + static_cast<long>(n) - 1)].is_zero())
            est.k0 = k;
    for (long k = -static_cast<long>(n) + 1; k < k_max; ++k)
        if (!f[static_cast<std::size_t>(k + static_cast<long>(n) - 1)].is_zero())
            ++est.samples_used;

    // A zero term inside the final window is its own verdict; the
    // ratio limit quantifies over k past the last zero term.
    if (est.k0 && *est.k0 >= k_max - window) {
        est.status = RatioEstimate::Status::ZeroTermsPersist;
        return est;
    }

    const BigReal tol_r = BigReal::from_double(tol, prec);
    auto end_window = ratio_window(f, n, k_max - window, k_max - 1, prec);
    // Unreachable given the k0 check, but keep the guard local.
    if (!end_window) {
        est.status = RatioEstimate::Status::ZeroTermsPersist;
        return est;
    }
    const BigReal spread_end = detail::window_spread(*end_window);
    if (spread_end < tol_r) {
        est.status = RatioEstimate::Status::Converged;
        est.value = end_window->back();
        return est;
    }

    const long mid = k_max / 2;
    if (mid - window >= -static_cast<long>(n) + 1) {
        auto mid_window = ratio_window(f, n, mid - window, mid - 1, prec);
        if (mid_window) {
            const BigReal spread_mid = detail::window_spread(*mid_window);
            // Non-shrinking spread distinguishes true oscillation from
            // slow convergence (which stays Undecided).
            if (spread_end > spread_mid * BigReal::from_double(0.9, prec)) {
                est.status = RatioEstimate::Status::Oscillating;
                return est;
            }
        }
    }
    est.status = RatioEstimate::Status::Undecided;
    return est;
}

} // namespace detail

/// Windowed ratio-limit detector over the exact terms.
inline RatioEstimate empirical_ratio(const RecurrenceInstance& inst, long k_max, double tol,
                                     prec_t prec = 256) {
    return detail::empirical_ratio_impl<GaussianRational>(inst.signature, inst.initial, k_max,
                                                          tol, prec);
}

inline RatioEstimate empirical_ratio(const FloatRecurrenceInstance& inst, long k_max, double tol,
                                     prec_t prec = 256) {
    std::vector<BigComplex> sig, init;
    sig.reserve(inst.signature.size());
    init.reserve(inst.initial.size());
    for (const auto& b : inst.signature)
        sig.push_back(BigComplex::from_double(b.real(), b.imag(), prec));
    for (const auto& a : inst.initial)
        init.push_back(BigComplex::from_double(a.real(), a.imag(), prec));
    return detail::empirical_ratio_impl<BigComplex>(sig, init, k_max, tol, prec);
}

/// One application of the ratio map
///   f(z_1,...,z_n) = (z_2,...,z_n, b_1 + b_2/z_n + ... + b_n/(z_2...z_n)).
template <typename T>
std::vector<T> ratio_map_step(std::span<const GaussianRational> signature,
                              std::span<const T> z) {
    const std::size_t n = signature.size();
    if (n < 2)
        throw std::invalid_argument("ratio_map_step: requires order n >= 2");
    if (z.size() != n)
        throw std::invalid_argument("ratio_map_step: z must have n components");
    for (const T& zi : z)
        if (zi.is_zero())
            throw ZeroComponent();

    const auto lift = [&](const GaussianRational& b) -> T {
        if constexpr (std::is_same_v<T, GaussianRational>)
            return b;
        else
            return to_big_complex(b, z[0].precision());
    };

    std::vector<T> out(z.begin() + 1, z.end());
    T acc = lift(signature[0]);
    T prod = z[n - 1];
    for (std::size_t m = 2; m <= n; ++m) {
        if (m > 2)
            prod = prod * z[n - m + 1];
        acc = acc + lift(signature[m - 1]) / prod;
    }
    out.push_back(std::move(acc));
    return out;
}

/// Whether (psi,...,psi) is a fixed point of the ratio map within tol;
/// only the last component can differ, and that difference equals
/// -P(psi)/psi^(n-1).
inline bool fixed_point_check(std::span<const GaussianRational> signature, const BigComplex& psi,
                              double tol) {
    if (psi.is_zero())
        throw std::invalid_argument("fixed_point_check: psi must be nonzero");
    const std::size_t n = signature.size();
    const prec_t prec = psi.precision();
    BigComplex acc = to_big_complex(signature[0], prec);
    BigComplex prod = BigComplex::from_long(1, 0, prec);
    for (std::size_t m = 2; m <= n; ++m) {
        prod = prod * psi;
        acc = acc + to_big_complex(signature[m - 1], prec) / prod;
    }
    return complex_modulus(acc - psi) < BigReal::from_double(tol, prec);
}

} // namespace ratiolim
