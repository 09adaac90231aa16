#include <catch2/catch.hpp>

#include <random>

#include "ratiolim/decompose.hpp"
#include "support/helpers.hpp"
#include "support/planted.hpp"

using namespace ratiolim;
using namespace ratiolim::testsupport;

TEST_CASE("basis matrix layout") {
    SECTION("double root at 1: [[1,0],[1,-1]]") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(2), gr(-1)}, 256);
        auto c = build_basis_matrix(rs, 256);
        REQUIRE(c.at(0, 0) == BigComplex::from_long(1, 0, 256));
        REQUIRE(c.at(0, 1) == BigComplex::from_long(0, 0, 256));
        REQUIRE(c.at(1, 0) == BigComplex::from_long(1, 0, 256));
        REQUIRE(c.at(1, 1) == BigComplex::from_long(-1, 0, 256));
    }
    SECTION("two simple roots: [[1,1],[1/l1, 1/l2]]") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(0), gr(1)}, 256); // roots 1, -1
        auto c = build_basis_matrix(rs, 256);
        REQUIRE(c.at(0, 0) == BigComplex::from_long(1, 0, 256));
        REQUIRE(c.at(0, 1) == BigComplex::from_long(1, 0, 256));
        // rows k = 0, -1; second row holds lambda^{-1}
        REQUIRE(dist(c.at(1, 0) * to_big_complex(*rs.entries[0].exact, 256),
                     BigComplex::from_long(1, 0, 256)) <= 1e-70);
        REQUIRE(dist(c.at(1, 1) * to_big_complex(*rs.entries[1].exact, 256),
                     BigComplex::from_long(1, 0, 256)) <= 1e-70);
    }
    SECTION("order 1: [[1]]") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(2)}, 256);
        auto c = build_basis_matrix(rs, 256);
        REQUIRE(c.n == 1);
        REQUIRE(c.at(0, 0) == BigComplex::from_long(1, 0, 256));
    }
}

TEST_CASE("solve_coefficients hand-checked examples") {
    SECTION("(2,-1)/(1,1): c = (1, 0)") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(2), gr(-1)}, 256);
        std::vector<GaussianRational> init{gr(1), gr(1)};
        auto d = solve_coefficients(rs, init, 256);
        REQUIRE(d.exact());
        REQUIRE((*d.exact_coefficients)[0][0] == gr(1));
        REQUIRE((*d.exact_coefficients)[0][1] == gr(0));
    }
    SECTION("(2,-1)/(0,1): c = (1, 1), F_k = (1+k) 1^k") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(2), gr(-1)}, 256);
        std::vector<GaussianRational> init{gr(0), gr(1)};
        auto d = solve_coefficients(rs, init, 256);
        REQUIRE((*d.exact_coefficients)[0][0] == gr(1));
        REQUIRE((*d.exact_coefficients)[0][1] == gr(1));
    }
    SECTION("(0,1)/(1,2): c = 3/2 at root 1, 1/2 at root -1") {
        RootSet rs = root_set(std::vector<GaussianRational>{gr(0), gr(1)}, 256);
        std::vector<GaussianRational> init{gr(1), gr(2)};
        auto d = solve_coefficients(rs, init, 256);
        REQUIRE(d.exact());
        for (std::size_t i = 0; i < rs.entries.size(); ++i) {
            if (*rs.entries[i].exact == gr(1))
                REQUIRE((*d.exact_coefficients)[i][0] == gr(3, 2));
            else
                REQUIRE((*d.exact_coefficients)[i][0] == gr(1, 2));
        }
    }
}

TEST_CASE("reconstruct_term matches iteration") {
    SECTION("constant sequence at k = 10") {
        auto inst = make_inst({2, -1}, {1, 1});
        auto a = analyze(inst);
        auto rec = reconstruct_term(a.decomposition, 10);
        REQUIRE(dist(rec.value, BigComplex::from_long(1, 0, 256)) <= rec.error_bound);
        REQUIRE(rec.error_bound <= 1e-9);
    }
    SECTION("F_k = k+1 at k = 10") {
        auto inst = make_inst({2, -1}, {0, 1});
        auto a = analyze(inst);
        auto rec = reconstruct_term(a.decomposition, 10);
        REQUIRE(dist(rec.value, BigComplex::from_long(11, 0, 256)) <= rec.error_bound);
    }
    SECTION("Fibonacci initial (0,1): F_10 = 89 by hand iteration") {
        auto inst = make_inst({1, 1}, {0, 1});
        REQUIRE(iterate(inst, 10).back() == gr(89));
        auto a = analyze(inst);
        auto rec = reconstruct_term(a.decomposition, 10);
        REQUIRE(dist(rec.value, BigComplex::from_long(89, 0, 256)) <= rec.error_bound);
    }
    SECTION("Fibonacci initial (1,0): F_10 = 55 by hand iteration") {
        auto inst = make_inst({1, 1}, {1, 0});
        REQUIRE(iterate(inst, 10).back() == gr(55));
        auto a = analyze(inst);
        auto rec = reconstruct_term(a.decomposition, 10);
        REQUIRE(dist(rec.value, BigComplex::from_long(55, 0, 256)) <= rec.error_bound);
    }
    SECTION("precondition k >= -n+1") {
        auto a = analyze(make_inst({1, 1}, {0, 1}));
        REQUIRE_THROWS_AS(reconstruct_term(a.decomposition, -2), std::invalid_argument);
    }
}

TEST_CASE("solution characteristic polynomial classification") {
    SECTION("constant sequence: AS with dominant 1, top power 0") {
        auto a = analyze(make_inst({2, -1}, {1, 1}));
        REQUIRE(a.solution_poly.kind == SolutionCharPoly::Kind::AsymptoticallySimple);
        REQUIRE(a.solution_poly.surviving.size() == 1);
        REQUIRE(a.solution_poly.surviving[0].effective_top_power == 0);
    }
    SECTION("(0,1)/(1,2): both roots survive, tied -> NotAS") {
        auto a = analyze(make_inst({0, 1}, {1, 2}));
        REQUIRE(a.solution_poly.kind == SolutionCharPoly::Kind::NotAsymptoticallySimple);
        REQUIRE(a.solution_poly.surviving.size() == 2);
        REQUIRE(a.solution_poly.witnesses.size() == 2);
    }
    SECTION("(2,-1)/(0,1): AS with top power 1") {
        auto a = analyze(make_inst({2, -1}, {0, 1}));
        REQUIRE(a.solution_poly.kind == SolutionCharPoly::Kind::AsymptoticallySimple);
        REQUIRE(a.solution_poly.surviving.size() == 1);
        REQUIRE(a.solution_poly.surviving[0].effective_top_power == 1);
    }
}

TEST_CASE("predict_ratio_limit verdicts") {
    SECTION("(2,-1)/(1,1) -> LimitExists(1), dubeau fails") {
        auto v = predict_ratio_limit(make_inst({2, -1}, {1, 1}));
        REQUIRE(v.outcome == Verdict::Outcome::LimitExists);
        REQUIRE(*v.value == BigComplex::from_long(1, 0, 256));
        REQUIRE(v.dubeau.has_value());
        REQUIRE_FALSE(*v.dubeau);
    }
    SECTION("(1,1)/(0,1) -> LimitExists(phi), dubeau holds") {
        auto v = predict_ratio_limit(make_inst({1, 1}, {0, 1}));
        REQUIRE(v.outcome == Verdict::Outcome::LimitExists);
        const BigComplex phi(golden_ratio(256), BigReal::from_long(0, 256));
        REQUIRE(dist(*v.value, phi) <= 1e-12);
        REQUIRE(v.dubeau.has_value());
        REQUIRE(*v.dubeau);
    }
    SECTION("(0,1)/(1,2) -> NoLimit") {
        auto v = predict_ratio_limit(make_inst({0, 1}, {1, 2}));
        REQUIRE(v.outcome == Verdict::Outcome::NoLimit);
    }
    SECTION("(0,1)/(1,1) -> LimitExists(1): the -1 coefficient vanishes exactly") {
        auto a = analyze(make_inst({0, 1}, {1, 1}));
        REQUIRE(a.verdict.outcome == Verdict::Outcome::LimitExists);
        REQUIRE(*a.verdict.value == BigComplex::from_long(1, 0, 256));
        REQUIRE(a.decomposition.exact());
        REQUIRE(a.solution_poly.surviving.size() == 1);
    }
    SECTION("order 1: (3)/(2) -> LimitExists(3)") {
        auto v = predict_ratio_limit(make_inst({3}, {2}));
        REQUIRE(v.outcome == Verdict::Outcome::LimitExists);
        REQUIRE(*v.value == BigComplex::from_long(3, 0, 256));
    }
    SECTION("all-zero initial conditions -> Indeterminate(zero solution)") {
        auto v = predict_ratio_limit(make_inst({1, 1}, {0, 0}));
        REQUIRE(v.outcome == Verdict::Outcome::Indeterminate);
        REQUIRE(v.reason == "zero solution");
    }
}

TEST_CASE("dubeau condition hand-checked") {
    SECTION("(2,-1)/(1,1) at lambda0 = 1: expression is exactly 0") {
        REQUIRE_FALSE(dubeau_condition(make_inst({2, -1}, {1, 1}), gr(1)));
    }
    SECTION("(2,-1)/(0,1) at lambda0 = 1: expression is 1") {
        REQUIRE(dubeau_condition(make_inst({2, -1}, {0, 1}), gr(1)));
    }
    SECTION("(1,1)/(1,0) at lambda0 = phi: a_0 phi + a_{-1} b_2 = 1") {
        const BigComplex phi(golden_ratio(256), BigReal::from_long(0, 256));
        REQUIRE(dubeau_condition(make_inst({1, 1}, {1, 0}), phi, 1e-70));
    }
    SECTION("not applicable when P has tied dominant roots") {
        // roots +-2 tie in modulus and multiplicity
        auto pm2 = crafted_instance({{gr(2), 1}, {gr(-2), 1}},
                                    {{gr(1)}, {gr(1)}});
        RootSet rs = root_set(pm2.inst.signature, 256);
        REQUIRE_THROWS_AS(dubeau_condition(pm2.inst, rs, AnalysisConfig{}),
                          DubeauNotApplicable);
    }
}

TEST_CASE("crafted survivor patterns are recovered") {
    for (const auto& ci : make_corpus(1001, 5)) {
        if (!ci.expected_outcome)
            continue;
        auto v = predict_ratio_limit(ci.inst);
        REQUIRE(v.outcome == *ci.expected_outcome);
        if (ci.expected_limit) {
            REQUIRE(dist(*v.value, to_big_complex(*ci.expected_limit, 256)) <= 1e-30);
        }
    }
}

TEST_CASE("scaling the initial conditions never changes the verdict") {
    std::mt19937 rng(919);
    auto corpus = make_corpus(2024, 25);
    const GaussianRational scales[] = {gr(3), gr(-1, 2), gri(0, 2), GaussianRational(Rational(3, 2), Rational(-1, 3))};
    for (const auto& ci : corpus) {
        auto base = analyze(ci.inst);
        const GaussianRational& s = scales[rng() % 4];
        std::vector<GaussianRational> scaled;
        for (const auto& a0 : ci.inst.initial)
            scaled.push_back(a0 * s);
        auto v2 = analyze(RecurrenceInstance(ci.inst.signature, scaled));
        REQUIRE(base.verdict.outcome == v2.verdict.outcome);
        // surviving sets coincide
        REQUIRE(base.solution_poly.surviving.size() == v2.solution_poly.surviving.size());
        for (std::size_t i = 0; i < base.solution_poly.surviving.size(); ++i) {
            REQUIRE(base.solution_poly.surviving[i].root_index ==
                    v2.solution_poly.surviving[i].root_index);
            REQUIRE(base.solution_poly.surviving[i].effective_top_power ==
                    v2.solution_poly.surviving[i].effective_top_power);
        }
    }
}

TEST_CASE("whenever dubeau holds the verdict is the dominant zero of P") {
    auto corpus = make_corpus(3407, 40);
    int seen = 0;
    for (const auto& ci : corpus) {
        auto a = analyze(ci.inst);
        if (!a.verdict.dubeau || !*a.verdict.dubeau)
            continue;
        ++seen;
        REQUIRE(a.verdict.outcome == Verdict::Outcome::LimitExists);
        auto dom = dominant_zero_of_p(a.roots, 1e-30);
        REQUIRE(dom.has_value());
        REQUIRE(*a.verdict.root_index == *dom);
    }
    REQUIRE(seen >= 5);
}

TEST_CASE("solve residual stays within the conditioning bound") {
    // float-lane solve on the Fibonacci system: C c = a holds tightly
    RootSet rs = root_set(std::vector<GaussianRational>{gr(1), gr(1)}, 256);
    std::vector<GaussianRational> init{gr(0), gr(1)};
    auto d = solve_coefficients(rs, init, 256);
    REQUIRE_FALSE(d.exact());
    auto c = build_basis_matrix(rs, d.precision);
    // rhs rows are (a_0, a_{-1})
    std::vector<BigComplex> rhs{to_big_complex(init[1], d.precision),
                                to_big_complex(init[0], d.precision)};
    std::vector<BigComplex> flat;
    for (const auto& block : d.coefficients)
        for (const auto& z : block)
            flat.push_back(z);
    for (std::size_t r = 0; r < 2; ++r) {
        BigComplex acc(d.precision);
        for (std::size_t j = 0; j < 2; ++j)
            acc += c.at(r, j) * flat[j];
        REQUIRE(dist(acc, rhs[r]) <= 1e-60);
    }
    REQUIRE(d.condition_estimate < 1e3);
    REQUIRE(d.coefficient_error < 1e-60);
}

TEST_CASE("zero-test policy bands") {
    // synthetic float-lane decomposition: roots 2 and 1, coefficients
    // planted straight into the struct
    auto make_dec = [](double c2_mag) {
        RootSet rs;
        rs.order = 2;
        rs.entries.push_back(RootEntry{BigComplex::from_long(2, 0, 256), 1, 1e-70, std::nullopt});
        rs.entries.push_back(RootEntry{BigComplex::from_long(1, 0, 256), 1, 1e-70, std::nullopt});
        Decomposition d;
        d.roots = rs;
        d.precision = 256;
        d.coefficient_error = 0.0;
        d.coefficients.push_back({BigComplex::from_long(1, 0, 256)});
        d.coefficients.push_back({BigComplex::from_double(c2_mag, 0, 256)});
        return d;
    };
    ZeroPolicy policy; // rel_tol 1e-30 at 256 bits, borderline factor 10

    SECTION("entry inside the borderline band flags the classification") {
        auto scp = solution_char_poly(make_dec(3e-30), policy);
        REQUIRE(scp.kind == SolutionCharPoly::Kind::Borderline);
        REQUIRE(scp.borderline_entries.size() == 1);
        REQUIRE(scp.borderline_entries[0].first == 1);
    }
    SECTION("well above the band: decisively nonzero") {
        auto scp = solution_char_poly(make_dec(2e-29), policy);
        REQUIRE(scp.kind == SolutionCharPoly::Kind::AsymptoticallySimple);
        REQUIRE(scp.surviving.size() == 2);
    }
    SECTION("well below the band: decisively zero") {
        auto scp = solution_char_poly(make_dec(1e-40), policy);
        REQUIRE(scp.kind == SolutionCharPoly::Kind::AsymptoticallySimple);
        REQUIRE(scp.surviving.size() == 1); // the tiny coefficient is dropped
    }
    SECTION("the threshold tightens at higher precision") {
        REQUIRE(policy.rel_tol(512) < policy.rel_tol(256) * 1e-60);
    }
}

TEST_CASE("ill-conditioned systems trigger the escalation error") {
    // synthetic root set with a 2^-140 gap: condition ~ 2^140 > 2^128
    RootSet rs;
    rs.order = 2;
    BigReal one = BigReal::from_long(1, 512);
    BigReal eps = one.scale2(-140);
    rs.entries.push_back(RootEntry{BigComplex(one, BigReal(512)), 1, 0.0, std::nullopt});
    rs.entries.push_back(RootEntry{BigComplex(one + eps, BigReal(512)), 1, 0.0, std::nullopt});
    std::vector<GaussianRational> init{gr(1), gr(2)};
    REQUIRE_THROWS_AS(solve_coefficients(rs, init, 256), IllConditioned);
}
