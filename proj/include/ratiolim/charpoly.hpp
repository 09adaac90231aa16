#pragma once

// Characteristic polynomial of a signature and its distinct zeros with
// multiplicities. Exact signatures go through Yun's square-free
// decomposition (multiplicities are discrete, never inferred from
// clustering); linear factors yield exact Gaussian-rational roots.
// Complex-float signatures fall back to root clustering.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratiolim/polynomial.hpp"
#include "ratiolim/roots.hpp"

namespace ratiolim {

struct ZeroTrailingCoefficient : std::invalid_argument {
    ZeroTrailingCoefficient()
        : std::invalid_argument("signature requires b_n != 0 (trailing coefficient is zero)") {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// P = x^n - b_1 x^(n-1) - ... - b_n for a signature (b_1,...,b_n).
inline ExactPolynomial build_char_poly(std::span<const GaussianRational> signature) {
    const std::size_t n = signature.size();
    if (n == 0)
        throw std::invalid_argument("build_char_poly: order must be >= 1");
    if (signature[n - 1].is_zero())
        throw ZeroTrailingCoefficient();
    std::vector<GaussianRational> c(n + 1);
    c[n] = GaussianRational(1);
    for (std::size_t k = 1; k <= n; ++k)
        c[n - k] = -signature[k - 1];
    return ExactPolynomial(std::move(c));
}

/// Same construction over complex-float coefficients.
inline ComplexPolynomial build_char_poly(std::span<const BigComplex> signature, prec_t prec) {
    const std::size_t n = signature.size();
    if (n == 0)
        throw std::invalid_argument("build_char_poly: order must be >= 1");
    if (signature[n - 1].is_zero())
        throw ZeroTrailingCoefficient();
    std::vector<BigComplex> c(n + 1, BigComplex(prec));
    c[n] = BigComplex::from_long(1, 0, prec);
    for (std::size_t k = 1; k <= n; ++k)
        c[n - k] = -signature[k - 1];
    return ComplexPolynomial(std::move(c));
}

struct RootEntry {
    BigComplex value;
    int multiplicity = 1;
    double radius = 0.0;
    // Present when the root came from a linear factor over Q(i); the
    // whole downstream solve can then stay exact.
    std::optional<GaussianRational> exact;
};

struct RootSet {
    std::vector<RootEntry> entries;
    int order = 0; // n = sum of multiplicities

    bool all_exact() const {
        for (const auto& e : entries)
            if (!e.exact.has_value())
                return false;
        return true;
    }
};

struct RootFindConfig {
    prec_t escalation_cap = 1024;
    AberthOptions aberth;
};

namespace detail {

inline void sort_root_entries(std::vector<RootEntry>& entries) {
    // (modulus desc, argument asc) for deterministic ordering.
    std::vector<std::pair<BigReal, BigReal>> key;
    key.reserve(entries.size());
    for (const auto& e : entries)
        key.emplace_back(complex_modulus(e.value), atan2(e.value.im, e.value.re));
    std::vector<std::size_t> idx(entries.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (key[a].first != key[b].first)
            return key[b].first < key[a].first;
        return key[a].second < key[b].second;
    });
    std::vector<RootEntry> sorted;
    sorted.reserve(entries.size());
    for (std::size_t i : idx)
        sorted.push_back(std::move(entries[i]));
    entries = std::move(sorted);
}

inline bool entries_separated(const std::vector<RootEntry>& entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].value.is_zero() || !entries[i].value.is_finite())
            return false;
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            BigReal dist = complex_modulus(entries[i].value - entries[j].value);
            double bound = entries[i].radius + entries[j].radius;
            if (!(dist.to_double() > bound))
                return false;
        }
    }
    return true;
}

inline RootEntry exact_linear_root(const ExactPolynomial& factor, int multiplicity, prec_t prec) {
    GaussianRational root = -(factor.coeffs[0] / factor.coeffs[1]);
    BigComplex value = to_big_complex(root, prec);
    BigReal rad = (BigReal::from_long(1, prec) + complex_modulus(value)).scale2(-prec + 2);
    return RootEntry{std::move(value), multiplicity, rad.to_double_up(), std::move(root)};
}

inline ComplexPolynomial to_complex_poly(const ExactPolynomial& p, prec_t prec) {
    std::vector<BigComplex> c;
    c.reserve(p.coeffs.size());
    for (const auto& q : p.coeffs)
        c.push_back(to_big_complex(q, prec));
    return ComplexPolynomial(std::move(c));
}

/// Bounded-denominator rational reconstruction by continued fractions.
inline std::optional<Rational> rationalize(double x, unsigned long max_den = 1000000) {
    if (!std::isfinite(x))
        return std::nullopt;
    const double x0 = x;
    mpz_class p_prev(0), p_cur(1), q_prev(1), q_cur(0); // h_{-2}, h_{-1} convention
    double rem = x;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(rem);
        if (std::abs(fl) > 9e18)
            return std::nullopt;
        mpz_class a(static_cast<long>(fl));
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        if (q_next > mpz_class(max_den))
            break;
        p_prev = p_cur; p_cur = p_next;
        q_prev = q_cur; q_cur = q_next;
        const double frac = rem - fl;
        Rational cand(p_cur, q_cur);
        cand.canonicalize();
        if (std::abs(cand.get_d() - x0) < 1e-13 * (1.0 + std::abs(x0)))
            return cand;
        if (frac < 1e-15)
            break;
        rem = 1.0 / frac;
    }
    return std::nullopt;
}

/// If z sits numerically on a small Gaussian rational that is an exact
/// root of f, return it (verified by exact evaluation).
inline std::optional<GaussianRational> verified_rational_root(const ExactPolynomial& f,
                                                              const BigComplex& z) {
    auto re = rationalize(z.re.to_double());
    auto im = rationalize(z.im.to_double());
    if (!re || !im)
        return std::nullopt;
    GaussianRational cand(*re, *im);
    if (!f.eval(cand).is_zero())
        return std::nullopt;
    return cand;
}

/// Peel verified rational roots off a square-free factor (exact
/// deflation); the remainder keeps only genuinely irrational roots.
struct SplitFactor {
    std::vector<GaussianRational> rational_roots;
    ExactPolynomial remainder;
};

inline SplitFactor split_rational_roots(const ExactPolynomial& factor, prec_t probe_prec,
                                        const AberthOptions& opt) {
    SplitFactor out;
    out.remainder = factor;
    if (factor.degree() < 2)
        return out;
    const auto probes = aberth_roots(to_complex_poly(factor, probe_prec), opt);
    for (const ApproxRoot& pr : probes) {
        if (out.remainder.degree() < 1)
            break;
        auto cand = verified_rational_root(out.remainder, pr.value);
        if (!cand)
            continue;
        std::vector<GaussianRational> lin{-(*cand), GaussianRational(1)};
        auto [quot, rem] = divmod(out.remainder, ExactPolynomial(std::move(lin)));
        if (!rem.is_zero())
            continue; // cannot happen for a verified root; stay safe
        out.remainder = std::move(quot);
        out.rational_roots.push_back(std::move(*cand));
    }
    return out;
}

} // namespace detail

/// Roots of a square-free exact polynomial with certified,
/// pairwise-disjoint inclusion disks. Escalates the working precision
/// (x2 up to the cap) until the disks separate.
inline std::vector<ApproxRoot> find_roots(const ExactPolynomial& p, prec_t prec,
                                          const RootFindConfig& cfg = {}) {
    if (p.degree() < 1)
        throw std::invalid_argument("find_roots: degree must be >= 1");
    for (prec_t pr = prec;; pr *= 2) {
        std::vector<ApproxRoot> roots;
        if (p.degree() == 1) {
            RootEntry e = detail::exact_linear_root(p, 1, pr);
            roots.push_back(ApproxRoot{std::move(e.value), e.radius});
        } else {
            roots = aberth_roots(detail::to_complex_poly(p, pr), cfg.aberth);
        }
        bool ok = true;
        for (std::size_t i = 0; i < roots.size() && ok; ++i) {
            // a zero root is legitimate here (root_set rejects it via b_n != 0)
            if (!roots[i].value.is_finite())
                ok = false;
            for (std::size_t j = i + 1; j < roots.size() && ok; ++j) {
                BigReal dist = complex_modulus(roots[i].value - roots[j].value);
                if (!(dist.to_double() > roots[i].radius + roots[j].radius))
                    ok = false;
            }
        }
        if (ok)
            return roots;
        if (pr * 2 > cfg.escalation_cap)
            throw PrecisionExhausted("find_roots: root disks still overlap at " +
                                     std::to_string(pr) + " bits");
    }
}

/// Distinct zeros of the characteristic polynomial of an exact
/// signature, multiplicities from the square-free decomposition.
inline RootSet root_set(std::span<const GaussianRational> signature, prec_t prec,
                        const RootFindConfig& cfg = {}) {
    const ExactPolynomial p = build_char_poly(signature);
    const auto factors = square_free_decompose(p);

    // Peel exactly-verified Gaussian-rational roots off each factor
    // once, so zero tests downstream can stay exact wherever the roots
    // allow it. Numeric roots only suggest candidates; verification and
    // deflation are exact.
    struct PreparedFactor {
        std::vector<GaussianRational> rational_roots;
        ExactPolynomial remainder; // square-free, no small-rational roots
        int multiplicity;
    };
    std::vector<PreparedFactor> prepared;
    prepared.reserve(factors.size());
    for (const auto& f : factors) {
        if (f.factor.degree() == 1) {
            prepared.push_back(PreparedFactor{
                {-(f.factor.coeffs[0] / f.factor.coeffs[1])}, ExactPolynomial{}, f.multiplicity});
            continue;
        }
        detail::SplitFactor sf = detail::split_rational_roots(f.factor, prec, cfg.aberth);
        if (sf.remainder.degree() == 1) {
            sf.rational_roots.push_back(-(sf.remainder.coeffs[0] / sf.remainder.coeffs[1]));
            sf.remainder = ExactPolynomial{};
        }
        prepared.push_back(
            PreparedFactor{std::move(sf.rational_roots), std::move(sf.remainder), f.multiplicity});
    }

    for (prec_t pr = prec;; pr *= 2) {
        RootSet rs;
        rs.order = static_cast<int>(signature.size());
        for (const auto& f : prepared) {
            for (const GaussianRational& root : f.rational_roots) {
                BigComplex value = to_big_complex(root, pr);
                BigReal rad =
                    (BigReal::from_long(1, pr) + complex_modulus(value)).scale2(-pr + 2);
                rs.entries.push_back(
                    RootEntry{std::move(value), f.multiplicity, rad.to_double_up(), root});
            }
            if (f.remainder.degree() >= 1) {
                for (auto& r :
                     aberth_roots(detail::to_complex_poly(f.remainder, pr), cfg.aberth))
                    rs.entries.push_back(
                        RootEntry{std::move(r.value), f.multiplicity, r.radius, std::nullopt});
            }
        }
        if (detail::entries_separated(rs.entries)) {
            detail::sort_root_entries(rs.entries);
            return rs;
        }
        if (pr * 2 > cfg.escalation_cap)
            throw PrecisionExhausted("root_set: root disks still overlap at " +
                                     std::to_string(pr) + " bits");
    }
}

/// Clustering fallback for complex-float signatures: roots of P itself,
/// merged when closer than 2^(-prec/2) * (1 + max modulus) or when their
/// certified disks overlap; multiplicity = cluster cardinality.
inline RootSet root_set(std::span<const BigComplex> signature, prec_t prec,
                        const RootFindConfig& cfg = {}) {
    const ComplexPolynomial p = build_char_poly(signature, prec);
    const int n = p.degree();
    std::vector<ApproxRoot> roots = aberth_roots(p, cfg.aberth);

    BigReal maxmod = BigReal::from_long(0, prec);
    for (const auto& r : roots) {
        BigReal m = complex_modulus(r.value);
        if (m > maxmod)
            maxmod = m;
    }
    const double cluster_tol =
        ((BigReal::from_long(1, prec) + maxmod).scale2(-(prec / 2))).to_double_up();

    // Union-find over (distance <= cluster_tol) OR (disks overlap).
    std::vector<std::size_t> parent(roots.size());
    for (std::size_t i = 0; i < parent.size(); ++i)
        parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            double dist = complex_modulus(roots[i].value - roots[j].value).to_double();
            if (dist <= cluster_tol || dist <= roots[i].radius + roots[j].radius)
                parent[find(i)] = find(j);
        }
    }

    RootSet rs;
    rs.order = n;
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (find(i) != i)
            continue;
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < roots.size(); ++j)
            if (find(j) == i)
                members.push_back(j);
        BigComplex centroid = BigComplex::from_long(0, 0, prec);
        for (std::size_t j : members)
            centroid += roots[j].value;
        centroid = centroid / BigComplex::from_long(static_cast<long>(members.size()), 0, prec);
        double radius = 0.0;
        for (std::size_t j : members) {
            double d = complex_modulus(roots[j].value - centroid).to_double_up() +
                       roots[j].radius;
            radius = std::max(radius, d);
        }
        rs.entries.push_back(
            RootEntry{std::move(centroid), static_cast<int>(members.size()), radius, std::nullopt});
    }

    if (!detail::entries_separated(rs.entries))
        throw PrecisionExhausted("root_set: clusters not separable at " + std::to_string(prec) +
                                 " bits");
    detail::sort_root_entries(rs.entries);
    return rs;
}

} // namespace ratiolim
