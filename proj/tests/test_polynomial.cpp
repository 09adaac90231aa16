#include <catch2/catch.hpp>

#include <random>

#include "ratiolim/charpoly.hpp"
#include "support/helpers.hpp"
#include "support/planted.hpp"

using namespace ratiolim;
using namespace ratiolim::testsupport;

TEST_CASE("build_char_poly transcribes the signature") {
    SECTION("(1,1) -> x^2 - x - 1") {
        auto p = build_char_poly(std::vector<GaussianRational>{gr(1), gr(1)});
        REQUIRE(p.degree() == 2);
        REQUIRE(p.coeffs[0] == gr(-1));
        REQUIRE(p.coeffs[1] == gr(-1));
        REQUIRE(p.coeffs[2] == gr(1));
    }
    SECTION("(2,-1) -> (x-1)^2") {
        auto p = build_char_poly(std::vector<GaussianRational>{gr(2), gr(-1)});
        REQUIRE(p.coeffs[0] == gr(1));
        REQUIRE(p.coeffs[1] == gr(-2));
        REQUIRE(p.coeffs[2] == gr(1));
    }
    SECTION("(0,1) -> x^2 - 1, b_1 = 0 allowed") {
        auto p = build_char_poly(std::vector<GaussianRational>{gr(0), gr(1)});
        REQUIRE(p.coeffs[0] == gr(-1));
        REQUIRE(p.coeffs[1] == gr(0));
        REQUIRE(p.coeffs[2] == gr(1));
    }
    SECTION("b_n = 0 is rejected") {
        REQUIRE_THROWS_AS(build_char_poly(std::vector<GaussianRational>{gr(1), gr(0)}),
                          ZeroTrailingCoefficient);
    }
    SECTION("empty signature is rejected") {
        REQUIRE_THROWS_AS(build_char_poly(std::vector<GaussianRational>{}),
                          std::invalid_argument);
    }
}

TEST_CASE("polynomial arithmetic basics") {
    ExactPolynomial a(std::vector<GaussianRational>{gr(1), gr(2), gr(1)}); // (x+1)^2
    ExactPolynomial b(std::vector<GaussianRational>{gr(1), gr(1)});        // x+1
    auto [q, r] = divmod(a, b);
    REQUIRE(r.is_zero());
    REQUIRE(q == b);
    REQUIRE(a.derivative() == ExactPolynomial(std::vector<GaussianRational>{gr(2), gr(2)}));
    REQUIRE(a.eval(gr(2)) == gr(9));
    REQUIRE(gcd(a, b) == b.monic());
}

TEST_CASE("square-free decomposition examples") {
    SECTION("(x-1)^2") {
        auto p = build_char_poly(std::vector<GaussianRational>{gr(2), gr(-1)});
        auto sf = square_free_decompose(p);
        REQUIRE(sf.size() == 1);
        REQUIRE(sf[0].multiplicity == 2);
        REQUIRE(sf[0].factor ==
                ExactPolynomial(std::vector<GaussianRational>{gr(-1), gr(1)}));
    }
    SECTION("x^2 - x - 1 already square-free") {
        auto p = build_char_poly(std::vector<GaussianRational>{gr(1), gr(1)});
        auto sf = square_free_decompose(p);
        REQUIRE(sf.size() == 1);
        REQUIRE(sf[0].multiplicity == 1);
        REQUIRE(sf[0].factor == p.monic());
    }
    SECTION("(x-1)^3 expanded by hand") {
        // x^3 - 3x^2 + 3x - 1
        ExactPolynomial p(std::vector<GaussianRational>{gr(-1), gr(3), gr(-3), gr(1)});
        auto sf = square_free_decompose(p);
        REQUIRE(sf.size() == 1);
        REQUIRE(sf[0].multiplicity == 3);
        REQUIRE(sf[0].factor ==
                ExactPolynomial(std::vector<GaussianRational>{gr(-1), gr(1)}));
    }
    SECTION("nonconstant precondition") {
        REQUIRE_THROWS_AS(square_free_decompose(
                              ExactPolynomial(std::vector<GaussianRational>{gr(5)})),
                          std::invalid_argument);
    }
}

TEST_CASE("square-free decomposition on planted products") {
    std::mt19937 rng(313);
    for (int t = 0; t < 60; ++t) {
        auto roots = ratiolim::testsupport::detail::random_planted(rng, 5);
        ExactPolynomial p = poly_from_planted(roots);
        auto sf = square_free_decompose(p);

        // product of factor^mult reconstructs the monic polynomial
        ExactPolynomial prod(std::vector<GaussianRational>{gr(1)});
        for (const auto& f : sf)
            for (int m = 0; m < f.multiplicity; ++m)
                prod = prod * f.factor;
        REQUIRE(prod == p.monic());

        // every factor is square-free: gcd(f, f') constant
        for (const auto& f : sf)
            REQUIRE(gcd(f.factor, f.factor.derivative()).degree() == 0);

        // factors are pairwise coprime
        for (std::size_t i = 0; i < sf.size(); ++i)
            for (std::size_t j = i + 1; j < sf.size(); ++j)
                REQUIRE(gcd(sf[i].factor, sf[j].factor).degree() == 0);

        // degree of the multiplicity-m factor equals the number of
        // planted roots with multiplicity m
        for (const auto& f : sf) {
            int expected = 0;
            for (const auto& r : roots)
                if (r.multiplicity == f.multiplicity)
                    ++expected;
            REQUIRE(f.factor.degree() == expected);
        }
    }
}
