#pragma once

// The solver pipeline: express the sequence over the basic solutions
// k^j * lambda_i^k, derive which roots actually appear in it, classify
// asymptotic simplicity (among surviving roots of maximal modulus,
// exactly one attains the maximal surviving power), and turn the
// classification into a ratio-limit verdict. Zero tests on the solved
// coefficients are exact whenever every root is an exact Gaussian
// rational; otherwise a thresholded policy with Borderline detection
// and precision escalation decides them.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratiolim/charpoly.hpp"
#include "ratiolim/linsolve.hpp"
#include "ratiolim/recurrence.hpp"

namespace ratiolim {

struct IllConditioned : std::runtime_error {
    double condition;
    explicit IllConditioned(double cond)
        : std::runtime_error("basis matrix condition estimate " + std::to_string(cond) +
                             " exceeds the precision budget"),
          condition(cond) {}
};

struct DubeauNotApplicable : std::runtime_error {
    DubeauNotApplicable()
        : std::runtime_error(
              "Dubeau condition requires a characteristic polynomial with a dominant zero of "
              "maximal multiplicity among its zeros of maximal modulus") {}
};

struct ZeroPolicy {
    double rel_tol_at_256 = 1e-30;
    double borderline_factor = 10.0;

    // Tightens when precision escalates, so a Borderline entry can
    // actually be resolved by re-solving at double precision.
    double rel_tol(prec_t prec) const {
        return rel_tol_at_256 * std::pow(2.0, static_cast<double>(256 - prec));
    }
};

struct AnalysisConfig {
    prec_t precision_bits = 256;
    prec_t precision_cap = 1024;
    ZeroPolicy zero_policy;
    double tie_abs_tol = 1e-30; // scaled by the maximal modulus R
    long k_max = 200;
    double tol = 1e-12;
    double agree_tol = 1e-6;

    RootFindConfig root_config() const { return RootFindConfig{precision_cap, {}}; }
};

// -------------------------------------------------------------------
// basis matrix
// -------------------------------------------------------------------

namespace detail {

/// (-r)^j as an exact rational (0^0 = 1).
inline Rational signed_power(std::size_t r, int j) {
    mpz_class mag;
    mpz_ui_pow_ui(mag.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(j));
    if (r != 0 && j % 2 == 1)
        mag = -mag;
    return Rational(mag);
}

} // namespace detail

/// Rows are k = 0, -1, ..., -n+1 top to bottom; the column block of
/// root lambda_i holds k^j lambda_i^k for j = 0..mu_i-1.
inline SquareMatrix<BigComplex> build_basis_matrix(const RootSet& roots, prec_t prec) {
    const std::size_t n = static_cast<std::size_t>(roots.order);
    SquareMatrix<BigComplex> c(n, BigComplex(prec));
    std::size_t col = 0;
    for (const RootEntry& e : roots.entries) {
        const BigComplex lam(e.value.re.rounded_to(prec), e.value.im.rounded_to(prec));
        const BigComplex inv = BigComplex::from_long(1, 0, prec) / lam;
        BigComplex pow = BigComplex::from_long(1, 0, prec); // lambda^(-r)
        for (std::size_t r = 0; r < n; ++r) {
            for (int j = 0; j < e.multiplicity; ++j) {
                BigReal kj = BigReal::from_rational(detail::signed_power(r, j), prec);
                c.at(r, col + static_cast<std::size_t>(j)) = kj * pow;
            }
            pow *= inv;
        }
        col += static_cast<std::size_t>(e.multiplicity);
    }
    return c;
}

/// Exact twin, valid when every root is an exact Gaussian rational.
inline SquareMatrix<GaussianRational> build_basis_matrix_exact(const RootSet& roots) {
    const std::size_t n = static_cast<std::size_t>(roots.order);
    SquareMatrix<GaussianRational> c(n, GaussianRational());
    std::size_t col = 0;
    for (const RootEntry& e : roots.entries) {
        const GaussianRational& lam = *e.exact;
        const GaussianRational inv = GaussianRational(1) / lam;
        GaussianRational pow(1);
        for (std::size_t r = 0; r < n; ++r) {
            for (int j = 0; j < e.multiplicity; ++j)
                c.at(r, col + static_cast<std::size_t>(j)) =
                    GaussianRational(detail::signed_power(r, j)) * pow;
            pow *= inv;
        }
        col += static_cast<std::size_t>(e.multiplicity);
    }
    return c;
}

// -------------------------------------------------------------------
// decomposition
// -------------------------------------------------------------------

struct Decomposition {
    RootSet roots;
    std::vector<std::vector<BigComplex>> coefficients; // [root][power]
    std::optional<std::vector<std::vector<GaussianRational>>> exact_coefficients;
    double coefficient_error = 0.0; // uniform per-entry bound; 0 in the exact lane
    double condition_estimate = 1.0;
    prec_t precision = 256;

    bool exact() const { return exact_coefficients.has_value(); }
};

namespace detail {

inline std::vector<std::vector<BigComplex>> split_blocks(const RootSet& roots,
                                                         const std::vector<BigComplex>& flat) {
    std::vector<std::vector<BigComplex>> out;
    out.reserve(roots.entries.size());
    std::size_t col = 0;
    for (const RootEntry& e : roots.entries) {
        std::vector<BigComplex> block;
        block.reserve(static_cast<std::size_t>(e.multiplicity));
        for (int j = 0; j < e.multiplicity; ++j)
            block.push_back(flat[col++]);
        out.push_back(std::move(block));
    }
    return out;
}

inline prec_t solve_precision(const RootSet& roots, prec_t prec) {
    prec_t p = prec;
    for (const RootEntry& e : roots.entries)
        p = std::max(p, e.value.precision());
    return p;
}

inline double coefficient_error_bound(const RootSet& roots, const ComplexSolveResult& sol,
                                      prec_t prec) {
    const double n = static_cast<double>(roots.order);
    double entry_rel = 0.0;
    for (const RootEntry& e : roots.entries) {
        const double lam = complex_modulus(e.value).to_double();
        entry_rel = std::max(entry_rel, (n - 1.0) * (e.radius / lam));
    }
    // accumulated rounding of the power ladder in the matrix entries
    entry_rel += (2.0 * n + 4.0) * std::pow(2.0, -static_cast<double>(prec));
    double max_c = 0.0;
    for (const BigComplex& z : sol.solution)
        max_c = std::max(max_c, complex_modulus(z).to_double_up());
    const double solve_eps = 8.0 * n * std::pow(2.0, -static_cast<double>(prec));
    return sol.condition_estimate * (solve_eps + entry_rel) * max_c;
}

} // namespace detail

/// Solve C c = a with the initial conditions reordered to match the
/// basis-matrix rows (a_0, a_{-1}, ..., a_{-n+1}). Stays exact when all
/// roots are exact; otherwise complex LU at the working precision,
/// throwing IllConditioned when the condition estimate exceeds
/// 2^(prec/2).
inline Decomposition solve_coefficients(const RootSet& roots,
                                        std::span<const GaussianRational> initial, prec_t prec) {
    const std::size_t n = static_cast<std::size_t>(roots.order);
    Decomposition d;
    d.roots = roots;
    d.precision = prec;

    if (roots.all_exact()) {
        std::vector<GaussianRational> rhs(n);
        for (std::size_t r = 0; r < n; ++r)
            rhs[r] = initial[n - 1 - r];
        std::vector<GaussianRational> flat =
            solve_exact(build_basis_matrix_exact(roots), std::move(rhs));
        std::vector<std::vector<GaussianRational>> exact;
        std::vector<BigComplex> flat_cx;
        flat_cx.reserve(flat.size());
        for (const auto& q : flat)
            flat_cx.push_back(to_big_complex(q, prec));
        std::size_t col = 0;
        for (const RootEntry& e : roots.entries) {
            std::vector<GaussianRational> block;
            for (int j = 0; j < e.multiplicity; ++j)
                block.push_back(flat[col + static_cast<std::size_t>(j)]);
            exact.push_back(std::move(block));
            col += static_cast<std::size_t>(e.multiplicity);
        }
        d.coefficients = detail::split_blocks(roots, flat_cx);
        d.exact_coefficients = std::move(exact);
        d.coefficient_error = 0.0;
        // condition estimate of C as a diagnostic only; the exact solve
        // does not depend on it
        try {
            std::vector<BigComplex> rhs_cx;
            rhs_cx.reserve(n);
            for (std::size_t r = 0; r < n; ++r)
                rhs_cx.push_back(to_big_complex(initial[n - 1 - r], prec));
            d.condition_estimate =
                solve_complex(build_basis_matrix(roots, prec), rhs_cx, prec).condition_estimate;
        } catch (const SingularMatrix&) {
            d.condition_estimate = std::numeric_limits<double>::infinity();
        }
        return d;
    }

    const prec_t sp = detail::solve_precision(roots, prec);
    std::vector<BigComplex> rhs;
    rhs.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        rhs.push_back(to_big_complex(initial[n - 1 - r], sp));
    SquareMatrix<BigComplex> c = build_basis_matrix(roots, sp);
    ComplexSolveResult sol = solve_complex(c, rhs, sp);
    if (sol.condition_estimate > std::pow(2.0, static_cast<double>(prec) / 2.0))
        throw IllConditioned(sol.condition_estimate);
    d.coefficient_error = detail::coefficient_error_bound(roots, sol, sp);
    d.condition_estimate = sol.condition_estimate;
    d.coefficients = detail::split_blocks(roots, sol.solution);
    d.precision = sp;
    return d;
}

/// Float-initial-conditions lane (doubles convert exactly).
inline Decomposition solve_coefficients(const RootSet& roots,
                                        std::span<const std::complex<double>> initial,
                                        prec_t prec) {
    const std::size_t n = static_cast<std::size_t>(roots.order);
    const prec_t sp = detail::solve_precision(roots, prec);
    std::vector<BigComplex> rhs;
    rhs.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        rhs.push_back(BigComplex::from_double(initial[n - 1 - r].real(),
                                              initial[n - 1 - r].imag(), sp));
    SquareMatrix<BigComplex> c = build_basis_matrix(roots, sp);
    ComplexSolveResult sol = solve_complex(c, rhs, sp);
    if (sol.condition_estimate > std::pow(2.0, static_cast<double>(prec) / 2.0))
        throw IllConditioned(sol.condition_estimate);
    Decomposition d;
    d.roots = roots;
    d.precision = sp;
    d.coefficient_error = detail::coefficient_error_bound(roots, sol, sp);
    d.condition_estimate = sol.condition_estimate;
    d.coefficients = detail::split_blocks(roots, sol.solution);
    return d;
}

// -------------------------------------------------------------------
// reconstruction
// -------------------------------------------------------------------

struct ReconstructedTerm {
    BigComplex value;
    double error_bound = 0.0;
};

/// F_k = sum_ij c_ij k^j lambda_i^k, with an error bound propagated
/// from the coefficient bounds and root radii.
inline ReconstructedTerm reconstruct_term(const Decomposition& d, long k) {
    const long n = d.roots.order;
    if (k < -n + 1)
        throw std::invalid_argument("reconstruct_term: k must be >= -n+1");
    const prec_t prec = d.precision;
    BigComplex acc(prec);
    double err = 0.0;
    double mag = 0.0;
    for (std::size_t i = 0; i < d.roots.entries.size(); ++i) {
        const RootEntry& e = d.roots.entries[i];
        const BigComplex lam_pow = e.value.pow_int(k);
        BigReal kj = BigReal::from_long(1, prec);
        const BigReal kr = BigReal::from_long(k, prec);
        const double lam = complex_modulus(e.value).to_double();
        const double lam_pow_d = std::pow(lam, static_cast<double>(k));
        const double dlam_pow_d =
            (k == 0) ? 0.0
                     : std::abs(static_cast<double>(k)) *
                           std::pow(lam, static_cast<double>(k - 1)) * e.radius;
        for (int j = 0; j < e.multiplicity; ++j) {
            if (j > 0)
                kj *= kr;
            if (!(k == 0 && j > 0)) // k^j = 0 contributes nothing at k=0, j>0
                acc += kj * (d.coefficients[i][static_cast<std::size_t>(j)] * lam_pow);
            const double kj_d = std::pow(std::abs(static_cast<double>(k)), j);
            const double c_mag =
                complex_modulus(d.coefficients[i][static_cast<std::size_t>(j)]).to_double_up();
            mag += (c_mag + d.coefficient_error) * kj_d * lam_pow_d;
            err += d.coefficient_error * kj_d * lam_pow_d + c_mag * kj_d * dlam_pow_d;
        }
    }
    err += mag * (6.0 * static_cast<double>(n) + std::abs(static_cast<double>(k)) + 8.0) *
           std::pow(2.0, -static_cast<double>(prec));
    return ReconstructedTerm{std::move(acc), err * 1.0625};
}

// -------------------------------------------------------------------
// surviving roots and classification
// -------------------------------------------------------------------

struct SurvivingZero {
    std::size_t root_index;  // into RootSet.entries
    int effective_top_power; // largest j with c_ij declared nonzero
};

struct SolutionCharPoly {
    enum class Kind { AsymptoticallySimple, NotAsymptoticallySimple, Borderline };

    std::vector<SurvivingZero> surviving;
    Kind kind = Kind::NotAsymptoticallySimple;
    std::optional<std::size_t> dominant_root_index;
    int dominant_top_power = 0;
    std::vector<std::size_t> witnesses;                     // tied root indices (NotAS)
    std::vector<std::pair<std::size_t, int>> borderline_entries; // (root, power)
    bool mixed_top_powers = false; // tied-modulus group had unequal top powers
    double zero_threshold = 0.0;
};

inline const char* to_string(SolutionCharPoly::Kind k) {
    switch (k) {
        case SolutionCharPoly::Kind::AsymptoticallySimple: return "asymptotically_simple";
        case SolutionCharPoly::Kind::NotAsymptoticallySimple: return "not_asymptotically_simple";
        case SolutionCharPoly::Kind::Borderline: return "borderline";
    }
    return "borderline";
}

namespace detail {

/// Indices of entries tied (within radii + abs_tol*R) with the maximal
/// modulus among `candidates`; exact squared-modulus comparison when
/// every candidate carries an exact value.
inline std::vector<std::size_t> max_modulus_group(const RootSet& roots,
                                                  const std::vector<std::size_t>& candidates,
                                                  double tie_abs_tol) {
    std::vector<std::size_t> group;
    bool all_exact = true;
    for (std::size_t i : candidates)
        if (!roots.entries[i].exact.has_value())
            all_exact = false;

    if (all_exact) {
        Rational best(0);
        for (std::size_t i : candidates) {
            Rational m = roots.entries[i].exact->squared_modulus();
            if (m > best)
                best = m;
        }
        for (std::size_t i : candidates)
            if (roots.entries[i].exact->squared_modulus() == best)
                group.push_back(i);
        return group;
    }

    double best = 0.0;
    std::size_t best_idx = candidates.front();
    for (std::size_t i : candidates) {
        double m = complex_modulus(roots.entries[i].value).to_double();
        if (m > best) {
            best = m;
            best_idx = i;
        }
    }
    const double best_rad = roots.entries[best_idx].radius;
    for (std::size_t i : candidates) {
        double m = complex_modulus(roots.entries[i].value).to_double();
        if (best - m <= roots.entries[i].radius + best_rad + tie_abs_tol * best)
            group.push_back(i);
    }
    return group;
}

} // namespace detail

/// Decide which roots survive in the solution and whether the surviving
/// configuration is asymptotically simple.
inline SolutionCharPoly solution_char_poly(const Decomposition& d, const ZeroPolicy& policy,
                                           double tie_abs_tol = 1e-30) {
    SolutionCharPoly scp;

    std::vector<std::vector<bool>> nonzero(d.roots.entries.size());
    if (d.exact()) {
        for (std::size_t i = 0; i < d.exact_coefficients->size(); ++i)
            for (const GaussianRational& c : (*d.exact_coefficients)[i])
                nonzero[i].push_back(!c.is_zero());
    } else {
        double max_c = 0.0;
        for (const auto& block : d.coefficients)
            for (const BigComplex& c : block)
                max_c = std::max(max_c, complex_modulus(c).to_double());
        const double thr =
            std::max(d.coefficient_error, policy.rel_tol(d.precision) * max_c);
        scp.zero_threshold = thr;
        for (std::size_t i = 0; i < d.coefficients.size(); ++i) {
            for (std::size_t j = 0; j < d.coefficients[i].size(); ++j) {
                const double m = complex_modulus(d.coefficients[i][j]).to_double();
                nonzero[i].push_back(m > thr);
                if (thr > 0 && m >= thr / policy.borderline_factor &&
                    m <= thr * policy.borderline_factor)
                    scp.borderline_entries.emplace_back(i, static_cast<int>(j));
            }
        }
    }

    for (std::size_t i = 0; i < nonzero.size(); ++i) {
        int top = -1;
        for (std::size_t j = 0; j < nonzero[i].size(); ++j)
            if (nonzero[i][j])
                top = static_cast<int>(j);
        if (top >= 0)
            scp.surviving.push_back(SurvivingZero{i, top});
    }

    if (!scp.borderline_entries.empty()) {
        scp.kind = SolutionCharPoly::Kind::Borderline;
        return scp;
    }
    if (scp.surviving.empty()) {
        // the all-zero solution; the caller reports Indeterminate
        scp.kind = SolutionCharPoly::Kind::NotAsymptoticallySimple;
        return scp;
    }

    std::vector<std::size_t> candidates;
    for (const auto& s : scp.surviving)
        candidates.push_back(s.root_index);
    const std::vector<std::size_t> group =
        detail::max_modulus_group(d.roots, candidates, tie_abs_tol);

    int j0 = -1;
    for (std::size_t g : group)
        for (const auto& s : scp.surviving)
            if (s.root_index == g)
                j0 = std::max(j0, s.effective_top_power);
    std::vector<std::size_t> attainers;
    for (std::size_t g : group)
        for (const auto& s : scp.surviving)
            if (s.root_index == g) {
                if (s.effective_top_power == j0)
                    attainers.push_back(g);
                else
                    scp.mixed_top_powers = true;
            }

    scp.dominant_top_power = j0;
    if (attainers.size() == 1) {
        scp.kind = SolutionCharPoly::Kind::AsymptoticallySimple;
        scp.dominant_root_index = attainers.front();
    } else {
        scp.kind = SolutionCharPoly::Kind::NotAsymptoticallySimple;
        scp.witnesses = std::move(attainers);
    }
    return scp;
}

// -------------------------------------------------------------------
// Dubeau sufficient condition
// -------------------------------------------------------------------

/// Dominant zero of P itself: unique maximal multiplicity among the
/// maximal-modulus zeros; nullopt when there is no unique one.
inline std::optional<std::size_t> dominant_zero_of_p(const RootSet& roots, double tie_abs_tol) {
    if (roots.entries.empty())
        return std::nullopt;
    std::vector<std::size_t> all(roots.entries.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    const std::vector<std::size_t> group = detail::max_modulus_group(roots, all, tie_abs_tol);
    int best_mu = 0;
    for (std::size_t g : group)
        best_mu = std::max(best_mu, roots.entries[g].multiplicity);
    std::vector<std::size_t> top;
    for (std::size_t g : group)
        if (roots.entries[g].multiplicity == best_mu)
            top.push_back(g);
    if (top.size() == 1)
        return top.front();
    return std::nullopt;
}

namespace detail {

/// a_0 lambda^(n-1) + sum_{i=1}^{n-1} a_{-i} sum_{j=1}^{n-i} b_{i+j} lambda^(n-j-1)
/// evaluated generically; T is GaussianRational or BigComplex.
template <typename T, typename Lift>
T dubeau_expression(std::span<const GaussianRational> signature,
                    std::span<const GaussianRational> initial, const T& lambda0, Lift&& lift) {
    const long n = static_cast<long>(signature.size());
    // lambda0^e for e = 0..n-1
    std::vector<T> pow{lift(GaussianRational(1))};
    for (long e = 1; e <= n - 1; ++e)
        pow.push_back(pow.back() * lambda0);
    T acc = lift(initial[static_cast<std::size_t>(n - 1)]) * pow[static_cast<std::size_t>(n - 1)];
    for (long i = 1; i <= n - 1; ++i) {
        const GaussianRational& a_mi = initial[static_cast<std::size_t>(n - 1 - i)];
        if (a_mi.is_zero())
            continue;
        T inner = lift(GaussianRational(0));
        for (long j = 1; j <= n - i; ++j)
            inner = inner + lift(signature[static_cast<std::size_t>(i + j - 1)]) *
                                pow[static_cast<std::size_t>(n - j - 1)];
        acc = acc + lift(a_mi) * inner;
    }
    return acc;
}

} // namespace detail

/// Exact form of the Dubeau test (lambda0 known exactly).
inline bool dubeau_condition(const RecurrenceInstance& inst, const GaussianRational& lambda0) {
    GaussianRational e = detail::dubeau_expression<GaussianRational>(
        inst.signature, inst.initial, lambda0, [](const GaussianRational& q) { return q; });
    return !e.is_zero();
}

/// Numeric form: nonzero under the zero policy at lambda0's precision;
/// lambda0_radius feeds a derivative-based term into the threshold.
inline bool dubeau_condition(const RecurrenceInstance& inst, const BigComplex& lambda0,
                             double lambda0_radius = 0.0, const ZeroPolicy& policy = {}) {
    const prec_t prec = lambda0.precision();
    const auto lift = [&](const GaussianRational& q) { return to_big_complex(q, prec); };
    BigComplex e =
        detail::dubeau_expression<BigComplex>(inst.signature, inst.initial, lambda0, lift);

    // scale and derivative bound for the threshold, in doubles
    const long n = static_cast<long>(inst.signature.size());
    const double lam = complex_modulus(lambda0).to_double();
    auto mag = [&](const GaussianRational& q) {
        return complex_modulus(to_big_complex(q, 64)).to_double();
    };
    double scale = mag(inst.initial.back()) * std::pow(lam, static_cast<double>(n - 1));
    double deriv = (n > 1) ? mag(inst.initial.back()) * static_cast<double>(n - 1) *
                                 std::pow(lam, static_cast<double>(n - 2))
                           : 0.0;
    for (long i = 1; i <= n - 1; ++i)
        for (long j = 1; j <= n - i; ++j) {
            const double t = mag(inst.initial[static_cast<std::size_t>(n - 1 - i)]) *
                             mag(inst.signature[static_cast<std::size_t>(i + j - 1)]);
            scale += t * std::pow(lam, static_cast<double>(n - j - 1));
            if (n - j - 1 > 0)
                deriv += t * static_cast<double>(n - j - 1) *
                         std::pow(lam, static_cast<double>(n - j - 2));
        }
    const double thr = policy.rel_tol(prec) * std::max(1.0, scale) + deriv * lambda0_radius;
    return complex_modulus(e).to_double() > thr;
}

/// RootSet-driven form; throws DubeauNotApplicable when P has no
/// dominant zero of maximal multiplicity.
inline bool dubeau_condition(const RecurrenceInstance& inst, const RootSet& roots,
                             const AnalysisConfig& cfg = {}) {
    const auto dom = dominant_zero_of_p(roots, cfg.tie_abs_tol);
    if (!dom)
        throw DubeauNotApplicable();
    const RootEntry& e = roots.entries[*dom];
    if (e.exact)
        return dubeau_condition(inst, *e.exact);
    return dubeau_condition(inst, e.value, e.radius, cfg.zero_policy);
}

// -------------------------------------------------------------------
// verdict pipeline
// -------------------------------------------------------------------

struct Diagnostics {
    prec_t precision_bits = 256;
    int escalations = 0;
    double condition_estimate = 1.0;
    double zero_threshold = 0.0;
    double coefficient_error = 0.0;
    bool exact_solve = false;
    bool mixed_top_powers = false;
    bool dubeau_applicable = false;
};

struct Verdict {
    enum class Outcome { LimitExists, NoLimit, Indeterminate };

    Outcome outcome = Outcome::Indeterminate;
    std::optional<BigComplex> value;          // the dominant zero, when the limit exists
    std::optional<std::size_t> root_index;    // its index in the RootSet
    std::string reason;                       // for Indeterminate
    std::optional<bool> dubeau;               // nullopt when not applicable
    Diagnostics diagnostics;

    bool dubeau_holds() const { return dubeau.value_or(false); }
};

inline const char* to_string(Verdict::Outcome o) {
    switch (o) {
        case Verdict::Outcome::LimitExists: return "limit_exists";
        case Verdict::Outcome::NoLimit: return "no_limit";
        case Verdict::Outcome::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

struct Analysis {
    RootSet roots;
    Decomposition decomposition;
    SolutionCharPoly solution_poly;
    Verdict verdict;
};

namespace detail {

inline Decomposition zero_decomposition(const RootSet& roots, prec_t prec, bool exact) {
    Decomposition d;
    d.roots = roots;
    d.precision = prec;
    d.condition_estimate = 1.0;
    for (const RootEntry& e : roots.entries)
        d.coefficients.emplace_back(static_cast<std::size_t>(e.multiplicity), BigComplex(prec));
    if (exact) {
        std::vector<std::vector<GaussianRational>> z;
        for (const RootEntry& e : roots.entries)
            z.emplace_back(static_cast<std::size_t>(e.multiplicity));
        d.exact_coefficients = std::move(z);
    }
    return d;
}

template <typename SolveRhs>
Analysis run_pipeline(std::function<RootSet(prec_t)> roots_at, SolveRhs&& solve_rhs,
                      bool zero_solution, const AnalysisConfig& cfg) {
    Analysis a;
    Verdict& v = a.verdict;
    int escalations = 0;
    std::string failure;

    for (prec_t prec = cfg.precision_bits;; prec *= 2, ++escalations) {
        try {
            a.roots = roots_at(prec);
            if (zero_solution) {
                a.decomposition = zero_decomposition(a.roots, prec, a.roots.all_exact());
                a.solution_poly = solution_char_poly(a.decomposition, cfg.zero_policy,
                                                     cfg.tie_abs_tol);
                v.outcome = Verdict::Outcome::Indeterminate;
                v.reason = "zero solution";
                break;
            }
            a.decomposition = solve_rhs(a.roots, prec);
            a.solution_poly =
                solution_char_poly(a.decomposition, cfg.zero_policy, cfg.tie_abs_tol);
            if (a.solution_poly.kind == SolutionCharPoly::Kind::Borderline &&
                prec * 2 <= cfg.precision_cap)
                continue;
            break;
        } catch (const IllConditioned&) {
            if (prec * 2 <= cfg.precision_cap)
                continue;
            failure = "ill-conditioned basis matrix at the precision cap";
            break;
        } catch (const SingularMatrix&) {
            if (prec * 2 <= cfg.precision_cap)
                continue;
            failure = "numerically singular basis matrix at the precision cap";
            break;
        } catch (const PrecisionExhausted& e) {
            failure = e.what();
            break;
        }
    }

    Diagnostics& diag = v.diagnostics;
    diag.precision_bits = a.decomposition.precision;
    diag.escalations = escalations;
    diag.condition_estimate = a.decomposition.condition_estimate;
    diag.zero_threshold = a.solution_poly.zero_threshold;
    diag.coefficient_error = a.decomposition.coefficient_error;
    diag.exact_solve = a.decomposition.exact();
    diag.mixed_top_powers = a.solution_poly.mixed_top_powers;

    if (!failure.empty()) {
        v.outcome = Verdict::Outcome::Indeterminate;
        v.reason = failure;
        return a;
    }
    if (zero_solution)
        return a;

    switch (a.solution_poly.kind) {
        case SolutionCharPoly::Kind::AsymptoticallySimple: {
            v.outcome = Verdict::Outcome::LimitExists;
            v.root_index = a.solution_poly.dominant_root_index;
            v.value = a.roots.entries[*v.root_index].value;
            break;
        }
        case SolutionCharPoly::Kind::NotAsymptoticallySimple:
            if (a.solution_poly.surviving.empty()) {
                // nonzero initial conditions but every coefficient was
                // declared zero: the solve error swamped the solution
                v.outcome = Verdict::Outcome::Indeterminate;
                v.reason = "all coefficients below the error threshold";
            } else {
                v.outcome = Verdict::Outcome::NoLimit;
            }
            break;
        case SolutionCharPoly::Kind::Borderline:
            v.outcome = Verdict::Outcome::Indeterminate;
            v.reason = "borderline coefficient zero test at the precision cap";
            break;
    }
    return a;
}

} // namespace detail

/// Full pipeline for an exact instance: roots -> basis matrix ->
/// coefficients -> survivor classification -> verdict (+ Dubeau flag).
inline Analysis analyze(const RecurrenceInstance& inst, const AnalysisConfig& cfg = {}) {
    bool zero_solution = true;
    for (const auto& a0 : inst.initial)
        if (!a0.is_zero())
            zero_solution = false;

    Analysis a = detail::run_pipeline(
        [&](prec_t prec) {
            return root_set(std::span<const GaussianRational>(inst.signature), prec,
                            cfg.root_config());
        },
        [&](const RootSet& rs, prec_t prec) {
            return solve_coefficients(rs, std::span<const GaussianRational>(inst.initial), prec);
        },
        zero_solution, cfg);

    if (!a.roots.entries.empty()) {
        try {
            a.verdict.dubeau = dubeau_condition(inst, a.roots, cfg);
            a.verdict.diagnostics.dubeau_applicable = true;
        } catch (const DubeauNotApplicable&) {
            a.verdict.dubeau = std::nullopt;
        }
    }
    return a;
}

/// Float-signature pipeline (root clustering lane).
inline Analysis analyze(const FloatRecurrenceInstance& inst, const AnalysisConfig& cfg = {}) {
    bool zero_solution = true;
    for (const auto& a0 : inst.initial)
        if (a0 != std::complex<double>(0.0, 0.0))
            zero_solution = false;

    Analysis a = detail::run_pipeline(
        [&](prec_t prec) {
            std::vector<BigComplex> sig;
            sig.reserve(inst.signature.size());
            for (const auto& b : inst.signature)
                sig.push_back(BigComplex::from_double(b.real(), b.imag(), prec));
            return root_set(std::span<const BigComplex>(sig), prec, cfg.root_config());
        },
        [&](const RootSet& rs, prec_t prec) {
            return solve_coefficients(rs, std::span<const std::complex<double>>(inst.initial),
                                      prec);
        },
        zero_solution, cfg);
    // The Dubeau test is defined over the exact instance form; the
    // float lane leaves the flag unset.
    return a;
}

inline Verdict predict_ratio_limit(const RecurrenceInstance& inst, const AnalysisConfig& cfg = {}) {
    return analyze(inst, cfg).verdict;
}

inline Verdict predict_ratio_limit(const FloatRecurrenceInstance& inst,
                                   const AnalysisConfig& cfg = {}) {
    return analyze(inst, cfg).verdict;
}

} // namespace ratiolim
