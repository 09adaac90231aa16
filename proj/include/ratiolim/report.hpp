#pragma once

// Instance-file schema, the analysis report record, and its two
// serializations: a human-readable text block and a lossless
// line-delimited JSON form (BigComplex values travel as hex-float
// strings with their precision, so parse(serialize(r)) == r).

#include <chrono>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratiolim/decompose.hpp"

namespace ratiolim {

using nlohmann::json;

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parsed instance file: exactly one of `exact` / `flt` is set.
/// Strings and integers are exact entries; any floating-point number
/// routes the whole instance to the clustering lane (mixing floats
/// with rational strings is rejected as ambiguous).
struct InstanceSpec {
    std::optional<RecurrenceInstance> exact;
    std::optional<FloatRecurrenceInstance> flt;
    std::optional<long> precision_bits;
    std::optional<long> k_max;
    std::optional<double> tol;

    bool float_lane() const { return flt.has_value(); }
    int order() const { return exact ? exact->order() : flt->order(); }
};

namespace detail {

enum class EntryKind { Exact, Float };

inline EntryKind scan_entries(const json& arr, const char* field) {
    if (!arr.is_array() || arr.empty())
        throw InstanceError(std::string(field) + " must be a non-empty array");
    bool any_float = false, any_string = false;
    for (const auto& v : arr) {
        if (v.is_string())
            any_string = true;
        else if (v.is_number_float())
            any_float = true;
        else if (!v.is_number_integer())
            throw InstanceError(std::string(field) +
                                " entries must be numbers or Gaussian-rational strings");
    }
    if (any_float && any_string)
        throw InstanceError(std::string(field) +
                            " mixes float numbers with exact rational strings");
    return any_float ? EntryKind::Float : EntryKind::Exact;
}

inline std::vector<GaussianRational> exact_entries(const json& arr) {
    std::vector<GaussianRational> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_string())
            out.push_back(parse_gaussian_rational(v.get<std::string>()));
        else
            out.push_back(GaussianRational(Rational(v.get<long>())));
    }
    return out;
}

inline std::vector<std::complex<double>> float_entries(const json& arr) {
    std::vector<std::complex<double>> out;
    out.reserve(arr.size());
    for (const auto& v : arr)
        out.emplace_back(v.get<double>(), 0.0);
    return out;
}

} // namespace detail

/// Parse {"signature": [...], "initial": [...], "precision_bits"?,
/// "k_max"?, "tol"?}.
inline InstanceSpec parse_instance(const json& j) {
    if (!j.is_object())
        throw InstanceError("instance record must be a JSON object");
    if (!j.contains("signature") || !j.contains("initial"))
        throw InstanceError("instance record needs \"signature\" and \"initial\" arrays");

    const detail::EntryKind ks = detail::scan_entries(j.at("signature"), "signature");
    const detail::EntryKind ki = detail::scan_entries(j.at("initial"), "initial");

    InstanceSpec spec;
    try {
        if (ks == detail::EntryKind::Float || ki == detail::EntryKind::Float) {
            spec.flt.emplace(detail::float_entries(j.at("signature")),
                             detail::float_entries(j.at("initial")));
        } else {
            spec.exact.emplace(detail::exact_entries(j.at("signature")),
                               detail::exact_entries(j.at("initial")));
        }
    } catch (const ParseError& e) {
        throw InstanceError(e.what());
    } catch (const std::invalid_argument& e) {
        throw InstanceError(e.what());
    } catch (const json::exception& e) {
        throw InstanceError(e.what());
    }

    try {
        if (j.contains("precision_bits")) {
            const long p = j.at("precision_bits").get<long>();
            if (p < kMinPrecision)
                throw InstanceError("precision_bits must be >= 53");
            spec.precision_bits = p;
        }
        if (j.contains("k_max"))
            spec.k_max = j.at("k_max").get<long>();
        if (j.contains("tol")) {
            const double t = j.at("tol").get<double>();
            if (!(t > 0))
                throw InstanceError("tol must be positive");
            spec.tol = t;
        }
    } catch (const json::exception& e) {
        throw InstanceError(e.what());
    }
    return spec;
}

inline InstanceSpec parse_instance_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError(e.what()); // message carries line/column
    }
    return parse_instance(j);
}

// -------------------------------------------------------------------
// report record (serialization-friendly: strings, ints, doubles)
// -------------------------------------------------------------------

struct HexComplex {
    std::string re_hex;
    std::string im_hex;
    long precision = 0;

    bool operator==(const HexComplex&) const = default;

    static HexComplex from(const BigComplex& z) {
        return {z.re.to_hex_string(), z.im.to_hex_string(), static_cast<long>(z.precision())};
    }
    BigComplex to_big_complex() const {
        return {BigReal::from_string(re_hex, precision), BigReal::from_string(im_hex, precision)};
    }
    std::string display(int digits = 20) const { return to_big_complex().to_string(digits); }
};

struct ReportRoot {
    HexComplex value;
    int multiplicity = 1;
    double radius = 0.0;
    std::optional<std::string> exact;

    bool operator==(const ReportRoot&) const = default;
};

struct ReportCoefficient {
    std::size_t root_index = 0;
    int power = 0;
    HexComplex value;
    double error = 0.0;
    std::optional<std::string> exact;

    bool operator==(const ReportCoefficient&) const = default;
};

struct ReportSurvivor {
    std::size_t root_index = 0;
    int top_power = 0;

    bool operator==(const ReportSurvivor&) const = default;
};

struct ReportEmpirical {
    std::string status;
    std::optional<HexComplex> value;
    std::optional<long> k0;
    long samples_used = 0;
    long k_max = 0;
    double tol = 0.0;

    bool operator==(const ReportEmpirical&) const = default;
};

struct ReportDiagnostics {
    long precision_bits = 256;
    int escalations = 0;
    double condition_estimate = 1.0;
    double zero_threshold = 0.0;
    double coefficient_error = 0.0;
    bool exact_solve = false;
    bool mixed_top_powers = false;

    bool operator==(const ReportDiagnostics&) const = default;
};

struct AnalysisReport {
    std::vector<std::string> signature;
    std::vector<std::string> initial;
    bool float_lane = false;

    std::vector<ReportRoot> roots;
    std::vector<ReportCoefficient> coefficients;

    std::vector<ReportSurvivor> surviving;
    std::string classification;
    std::optional<std::size_t> dominant_root_index;
    int dominant_top_power = 0;
    std::vector<std::size_t> witnesses;

    std::string outcome;
    std::optional<HexComplex> limit_value;
    std::optional<std::size_t> limit_root_index;
    std::string reason;

    std::optional<bool> dubeau;
    std::optional<ReportEmpirical> empirical;
    std::optional<bool> agreement;

    ReportDiagnostics diagnostics;
    double timing_ms = 0.0;

    bool operator==(const AnalysisReport&) const = default;
};

// -------------------------------------------------------------------
// agreement (solver verdict vs empirical estimate)
// -------------------------------------------------------------------

/// nullopt when either side is not decisive (Indeterminate verdicts;
/// Undecided or ZeroTermsPersist estimates).
inline std::optional<bool> compute_agreement(const Verdict& verdict, const RatioEstimate& est,
                                             double agree_tol) {
    if (verdict.outcome == Verdict::Outcome::Indeterminate)
        return std::nullopt;
    switch (est.status) {
        case RatioEstimate::Status::Undecided:
        case RatioEstimate::Status::ZeroTermsPersist:
            return std::nullopt;
        case RatioEstimate::Status::Converged: {
            if (verdict.outcome != Verdict::Outcome::LimitExists)
                return false;
            const BigComplex diff = *verdict.value - *est.value;
            return complex_modulus(diff).to_double() <= agree_tol;
        }
        case RatioEstimate::Status::Oscillating:
            return verdict.outcome == Verdict::Outcome::NoLimit;
    }
    return std::nullopt;
}

// -------------------------------------------------------------------
// drivers
// -------------------------------------------------------------------

namespace detail {

inline double sane(double x) { return std::isfinite(x) ? x : 1e308; }

inline void fill_analysis(AnalysisReport& rep, const Analysis& a) {
    for (const RootEntry& e : a.roots.entries) {
        ReportRoot r;
        r.value = HexComplex::from(e.value);
        r.multiplicity = e.multiplicity;
        r.radius = sane(e.radius);
        if (e.exact)
            r.exact = to_string(*e.exact);
        rep.roots.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < a.decomposition.coefficients.size(); ++i) {
        for (std::size_t j = 0; j < a.decomposition.coefficients[i].size(); ++j) {
            ReportCoefficient c;
            c.root_index = i;
            c.power = static_cast<int>(j);
            c.value = HexComplex::from(a.decomposition.coefficients[i][j]);
            c.error = sane(a.decomposition.coefficient_error);
            if (a.decomposition.exact())
                c.exact = to_string((*a.decomposition.exact_coefficients)[i][j]);
            rep.coefficients.push_back(std::move(c));
        }
    }
    for (const SurvivingZero& s : a.solution_poly.surviving)
        rep.surviving.push_back(ReportSurvivor{s.root_index, s.effective_top_power});
    rep.classification = to_string(a.solution_poly.kind);
    rep.dominant_root_index = a.solution_poly.dominant_root_index;
    rep.dominant_top_power = a.solution_poly.dominant_top_power;
    rep.witnesses = a.solution_poly.witnesses;

    rep.outcome = to_string(a.verdict.outcome);
    if (a.verdict.value)
        rep.limit_value = HexComplex::from(*a.verdict.value);
    rep.limit_root_index = a.verdict.root_index;
    rep.reason = a.verdict.reason;
    rep.dubeau = a.verdict.dubeau;

    const Diagnostics& d = a.verdict.diagnostics;
    rep.diagnostics = ReportDiagnostics{static_cast<long>(d.precision_bits), d.escalations,
                                        sane(d.condition_estimate), sane(d.zero_threshold),
                                        sane(d.coefficient_error), d.exact_solve,
                                        d.mixed_top_powers};
}

inline std::string float_to_text(const std::complex<double>& z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real();
    if (z.imag() != 0.0)
        os << (z.imag() < 0 ? "" : "+") << z.imag() << " i";
    return os.str();
}

} // namespace detail

/// Resolve per-instance overrides on top of the base configuration.
inline AnalysisConfig resolve_config(const InstanceSpec& spec, AnalysisConfig cfg) {
    if (spec.precision_bits) {
        cfg.precision_bits = *spec.precision_bits;
        cfg.precision_cap = std::max(cfg.precision_cap, cfg.precision_bits);
    }
    if (spec.k_max)
        cfg.k_max = *spec.k_max;
    if (spec.tol)
        cfg.tol = *spec.tol;
    return cfg;
}

/// Run the solver pipeline (and optionally the empirical cross-check)
/// on one parsed instance and assemble the report record.
inline AnalysisReport run_analysis(const InstanceSpec& spec, const AnalysisConfig& base,
                                   bool with_empirical) {
    const AnalysisConfig cfg = resolve_config(spec, base);
    const auto start = std::chrono::steady_clock::now();

    AnalysisReport rep;
    rep.float_lane = spec.float_lane();
    if (spec.exact) {
        for (const auto& b : spec.exact->signature)
            rep.signature.push_back(to_string(b));
        for (const auto& a0 : spec.exact->initial)
            rep.initial.push_back(to_string(a0));
    } else {
        for (const auto& b : spec.flt->signature)
            rep.signature.push_back(detail::float_to_text(b));
        for (const auto& a0 : spec.flt->initial)
            rep.initial.push_back(detail::float_to_text(a0));
    }

    Analysis analysis = spec.exact ? analyze(*spec.exact, cfg) : analyze(*spec.flt, cfg);
    detail::fill_analysis(rep, analysis);

    if (with_empirical) {
        RatioEstimate est = spec.exact
                                ? empirical_ratio(*spec.exact, cfg.k_max, cfg.tol,
                                                  cfg.precision_bits)
                                : empirical_ratio(*spec.flt, cfg.k_max, cfg.tol,
                                                  cfg.precision_bits);
        ReportEmpirical re;
        re.status = to_string(est.status);
        if (est.value)
            re.value = HexComplex::from(*est.value);
        re.k0 = est.k0;
        re.samples_used = est.samples_used;
        re.k_max = cfg.k_max;
        re.tol = cfg.tol;
        rep.empirical = std::move(re);
        rep.agreement = compute_agreement(analysis.verdict, est, cfg.agree_tol);
    }

    const auto stop = std::chrono::steady_clock::now();
    rep.timing_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return rep;
}

// -------------------------------------------------------------------
// JSON serialization (lossless)
// -------------------------------------------------------------------

namespace detail {

inline json hex_to_json(const HexComplex& h) {
    return json{{"re_hex", h.re_hex},
                {"im_hex", h.im_hex},
                {"precision", h.precision},
                {"display", h.display()}};
}

inline HexComplex hex_from_json(const json& j) {
    HexComplex h;
    h.re_hex = j.at("re_hex").get<std::string>();
    h.im_hex = j.at("im_hex").get<std::string>();
    h.precision = j.at("precision").get<long>();
    return h;
}

template <typename T>
json opt_to_json(const std::optional<T>& v) {
    if (!v)
        return nullptr;
    return *v;
}

} // namespace detail

inline json to_json(const AnalysisReport& r) {
    json roots = json::array();
    for (const auto& e : r.roots)
        roots.push_back(json{{"value", detail::hex_to_json(e.value)},
                             {"multiplicity", e.multiplicity},
                             {"radius", e.radius},
                             {"exact", detail::opt_to_json(e.exact)}});
    json coeffs = json::array();
    for (const auto& c : r.coefficients)
        coeffs.push_back(json{{"root_index", c.root_index},
                              {"power", c.power},
                              {"value", detail::hex_to_json(c.value)},
                              {"error", c.error},
                              {"exact", detail::opt_to_json(c.exact)}});
    json surv = json::array();
    for (const auto& s : r.surviving)
        surv.push_back(json{{"root_index", s.root_index}, {"top_power", s.top_power}});

    json j{{"instance",
            json{{"signature", r.signature},
                 {"initial", r.initial},
                 {"float_lane", r.float_lane}}},
           {"roots", roots},
           {"coefficients", coeffs},
           {"solution_poly",
            json{{"surviving", surv},
                 {"classification", r.classification},
                 {"dominant_root_index", detail::opt_to_json(r.dominant_root_index)},
                 {"dominant_top_power", r.dominant_top_power},
                 {"witnesses", r.witnesses}}},
           {"verdict",
            json{{"outcome", r.outcome},
                 {"value", r.limit_value ? detail::hex_to_json(*r.limit_value) : json(nullptr)},
                 {"root_index", detail::opt_to_json(r.limit_root_index)},
                 {"reason", r.reason}}},
           {"dubeau", detail::opt_to_json(r.dubeau)},
           {"agreement", detail::opt_to_json(r.agreement)},
           {"diagnostics",
            json{{"precision_bits", r.diagnostics.precision_bits},
                 {"escalations", r.diagnostics.escalations},
                 {"condition_estimate", r.diagnostics.condition_estimate},
                 {"zero_threshold", r.diagnostics.zero_threshold},
                 {"coefficient_error", r.diagnostics.coefficient_error},
                 {"exact_solve", r.diagnostics.exact_solve},
                 {"mixed_top_powers", r.diagnostics.mixed_top_powers}}},
           {"timing_ms", r.timing_ms}};
    if (r.empirical) {
        j["empirical"] =
            json{{"status", r.empirical->status},
                 {"value",
                  r.empirical->value ? detail::hex_to_json(*r.empirical->value) : json(nullptr)},
                 {"k0", detail::opt_to_json(r.empirical->k0)},
                 {"samples_used", r.empirical->samples_used},
                 {"k_max", r.empirical->k_max},
                 {"tol", r.empirical->tol}};
    } else {
        j["empirical"] = nullptr;
    }
    return j;
}

inline AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    const json& inst = j.at("instance");
    r.signature = inst.at("signature").get<std::vector<std::string>>();
    r.initial = inst.at("initial").get<std::vector<std::string>>();
    r.float_lane = inst.at("float_lane").get<bool>();

    for (const auto& e : j.at("roots")) {
        ReportRoot rr;
        rr.value = detail::hex_from_json(e.at("value"));
        rr.multiplicity = e.at("multiplicity").get<int>();
        rr.radius = e.at("radius").get<double>();
        if (!e.at("exact").is_null())
            rr.exact = e.at("exact").get<std::string>();
        r.roots.push_back(std::move(rr));
    }
    for (const auto& e : j.at("coefficients")) {
        ReportCoefficient c;
        c.root_index = e.at("root_index").get<std::size_t>();
        c.power = e.at("power").get<int>();
        c.value = detail::hex_from_json(e.at("value"));
        c.error = e.at("error").get<double>();
        if (!e.at("exact").is_null())
            c.exact = e.at("exact").get<std::string>();
        r.coefficients.push_back(std::move(c));
    }
    const json& sp = j.at("solution_poly");
    for (const auto& e : sp.at("surviving"))
        r.surviving.push_back(
            ReportSurvivor{e.at("root_index").get<std::size_t>(), e.at("top_power").get<int>()});
    r.classification = sp.at("classification").get<std::string>();
    if (!sp.at("dominant_root_index").is_null())
        r.dominant_root_index = sp.at("dominant_root_index").get<std::size_t>();
    r.dominant_top_power = sp.at("dominant_top_power").get<int>();
    r.witnesses = sp.at("witnesses").get<std::vector<std::size_t>>();

    const json& v = j.at("verdict");
    r.outcome = v.at("outcome").get<std::string>();
    if (!v.at("value").is_null())
        r.limit_value = detail::hex_from_json(v.at("value"));
    if (!v.at("root_index").is_null())
        r.limit_root_index = v.at("root_index").get<std::size_t>();
    r.reason = v.at("reason").get<std::string>();

    if (!j.at("dubeau").is_null())
        r.dubeau = j.at("dubeau").get<bool>();
    if (!j.at("agreement").is_null())
        r.agreement = j.at("agreement").get<bool>();

    if (!j.at("empirical").is_null()) {
        const json& e = j.at("empirical");
        ReportEmpirical re;
        re.status = e.at("status").get<std::string>();
        if (!e.at("value").is_null())
            re.value = detail::hex_from_json(e.at("value"));
        if (!e.at("k0").is_null())
            re.k0 = e.at("k0").get<long>();
        re.samples_used = e.at("samples_used").get<long>();
        re.k_max = e.at("k_max").get<long>();
        re.tol = e.at("tol").get<double>();
        r.empirical = std::move(re);
    }

    const json& d = j.at("diagnostics");
    r.diagnostics.precision_bits = d.at("precision_bits").get<long>();
    r.diagnostics.escalations = d.at("escalations").get<int>();
    r.diagnostics.condition_estimate = d.at("condition_estimate").get<double>();
    r.diagnostics.zero_threshold = d.at("zero_threshold").get<double>();
    r.diagnostics.coefficient_error = d.at("coefficient_error").get<double>();
    r.diagnostics.exact_solve = d.at("exact_solve").get<bool>();
    r.diagnostics.mixed_top_powers = d.at("mixed_top_powers").get<bool>();

    r.timing_ms = j.at("timing_ms").get<double>();
    return r;
}

// -------------------------------------------------------------------
// text rendering
// -------------------------------------------------------------------

inline std::string render_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "instance: signature (";
    for (std::size_t i = 0; i < r.signature.size(); ++i)
        os << (i ? ", " : "") << r.signature[i];
    os << "), initial (";
    for (std::size_t i = 0; i < r.initial.size(); ++i)
        os << (i ? ", " : "") << r.initial[i];
    os << ")" << (r.float_lane ? "   [float lane]" : "") << "\n";

    os << "roots:\n";
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
        const auto& e = r.roots[i];
        os << "  [" << i << "] " << e.value.display() << "   mu=" << e.multiplicity
           << "   radius=" << e.radius;
        if (e.exact)
            os << "   exact=" << *e.exact;
        os << "\n";
    }
    os << "coefficients c_ij:\n";
    for (const auto& c : r.coefficients) {
        os << "  root " << c.root_index << " power " << c.power << ": " << c.value.display()
           << "   err<=" << c.error;
        if (c.exact)
            os << "   exact=" << *c.exact;
        os << "\n";
    }
    os << "solution poly: " << r.classification;
    if (!r.surviving.empty()) {
        os << "   surviving {";
        for (std::size_t i = 0; i < r.surviving.size(); ++i)
            os << (i ? ", " : "") << "root " << r.surviving[i].root_index << " top j="
               << r.surviving[i].top_power;
        os << "}";
    }
    os << "\n";
    os << "verdict: " << r.outcome;
    if (r.limit_value)
        os << "   limit = " << r.limit_value->display();
    if (!r.reason.empty())
        os << "   (" << r.reason << ")";
    os << "\n";
    os << "dubeau condition: "
       << (r.dubeau ? (*r.dubeau ? "holds" : "fails") : "not applicable") << "\n";
    if (r.empirical) {
        os << "empirical: " << r.empirical->status;
        if (r.empirical->value)
            os << "   value = " << r.empirical->value->display();
        os << "   (k_max=" << r.empirical->k_max << ", tol=" << r.empirical->tol << ")\n";
        os << "agreement: "
           << (r.agreement ? (*r.agreement ? "yes" : "NO (verdict/empirical mismatch)") : "n/a") << "\n";
    }
    os << "diagnostics: precision=" << r.diagnostics.precision_bits
       << " bits, escalations=" << r.diagnostics.escalations
       << ", cond(C)=" << r.diagnostics.condition_estimate
       << ", exact_solve=" << (r.diagnostics.exact_solve ? "yes" : "no") << "\n";
    os << "timing: " << r.timing_ms << " ms\n";
    return os.str();
}

} // namespace ratiolim
