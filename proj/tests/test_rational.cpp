#include <catch2/catch.hpp>

#include <random>

#include "ratiolim/rational.hpp"

using namespace ratiolim;

TEST_CASE("gaussian rational parsing") {
    SECTION("integer shorthand") {
        auto x = parse_gaussian_rational("3");
        REQUIRE(x.re == Rational(3));
        REQUIRE(x.im == 0);
        REQUIRE(x == parse_gaussian_rational("3/1"));
    }
    SECTION("full form with both parts") {
        auto x = parse_gaussian_rational("-7/2 + 1/4 i");
        REQUIRE(x.re == Rational(-7, 2));
        REQUIRE(x.im == Rational(1, 4));
    }
    SECTION("negative imaginary part") {
        auto x = parse_gaussian_rational("1/3-2/5i");
        REQUIRE(x.re == Rational(1, 3));
        REQUIRE(x.im == Rational(-2, 5));
    }
    SECTION("whitespace insensitivity") {
        REQUIRE(parse_gaussian_rational("  1/2 + 3 i ") == parse_gaussian_rational("1/2+3i"));
    }
    SECTION("pure imaginary") {
        auto x = parse_gaussian_rational("2/3 i");
        REQUIRE(x.re == 0);
        REQUIRE(x.im == Rational(2, 3));
    }
    SECTION("non-canonical input reduces") {
        auto x = parse_gaussian_rational("4/6");
        REQUIRE(to_string(x) == "2/3");
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(parse_gaussian_rational(""), ParseError);
        REQUIRE_THROWS_AS(parse_gaussian_rational("1/0"), ParseError);
        REQUIRE_THROWS_AS(parse_gaussian_rational("abc"), ParseError);
        REQUIRE_THROWS_AS(parse_gaussian_rational("1.5"), ParseError);
        REQUIRE_THROWS_AS(parse_gaussian_rational("1+2j"), ParseError);
    }
}

TEST_CASE("gaussian rational print round-trip") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 30);
    for (int i = 0; i < 300; ++i) {
        Rational re(num(rng), den(rng));
        re.canonicalize();
        Rational im(num(rng), den(rng));
        im.canonicalize();
        GaussianRational x{re, im};
        REQUIRE(parse_gaussian_rational(to_string(x)) == x);
    }
    REQUIRE(to_string(GaussianRational(Rational(0), Rational(-1, 2))) == "0-1/2 i");
    REQUIRE(to_string(GaussianRational(Rational(5))) == "5");
}

TEST_CASE("gaussian rationals form an exact field") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 12);
    auto random_gr = [&] {
        Rational re(num(rng), den(rng)), im(num(rng), den(rng));
        re.canonicalize();
        im.canonicalize();
        return GaussianRational{re, im};
    };
    for (int i = 0; i < 200; ++i) {
        GaussianRational a = random_gr();
        GaussianRational b = random_gr();
        REQUIRE((a + b) - b == a);
        if (!b.is_zero()) {
            REQUIRE((a * b) / b == a);
        }
        REQUIRE(a * b == b * a);
        REQUIRE((a - a).is_zero());
    }
    REQUIRE_THROWS_AS(GaussianRational(Rational(1)) / GaussianRational(), std::domain_error);
}

TEST_CASE("squared modulus is exact") {
    GaussianRational z{Rational(3), Rational(4)};
    REQUIRE(z.squared_modulus() == Rational(25));
    GaussianRational w{Rational(1, 2), Rational(1, 3)};
    REQUIRE(w.squared_modulus() == Rational(13, 36));
    REQUIRE(z.conj().squared_modulus() == z.squared_modulus());
}
