#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/rational.hpp"

#include <random>

using namespace lyapsyn;

TEST_CASE("parse and print") {
    CHECK(rat_str(rat_parse("3/4")) == "3/4");
    CHECK(rat_str(rat_parse("-3/4")) == "-3/4");
    CHECK(rat_str(rat_parse("6/4")) == "3/2");
    CHECK(rat_str(rat_parse("0")) == "0");
    CHECK(rat_str(rat_parse("-0")) == "0");
    CHECK(rat_parse("1/2") == Rational(1, 2));
    CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
}

TEST_CASE("decimal literals convert exactly") {
    CHECK(rat_from_decimal("1.5") == Rational(3, 2));
    CHECK(rat_from_decimal("-0.25") == Rational(-1, 4));
    CHECK(rat_from_decimal("2.0") == Rational(2));
    CHECK(rat_from_decimal("0.1") == Rational(1, 10));
}

TEST_CASE("pow and factorial") {
    CHECK(rat_pow(Rational(3, 2), 13) == Rational(BigInt(1594323), BigInt(8192)));
    CHECK(rat_pow(Rational(-2), 3) == Rational(-8));
    CHECK(rat_pow(Rational(7), 0) == Rational(1));
    CHECK(factorial(0) == 1);
    CHECK(factorial(4) == 24);
    CHECK(factorial(13) == BigInt("6227020800"));
}

TEST_CASE("lowest terms invariant") {
    Rational q = Rational(BigInt(123456)) / Rational(BigInt(-781264));
    CHECK(rat_den(q) > 0);
    using boost::multiprecision::gcd;
    CHECK(gcd(BigInt(boost::multiprecision::abs(rat_num(q))), rat_den(q)) == 1);
}

TEST_CASE("simplest rational in interval") {
    auto simplest = [](const char* lo, bool ls, const char* hi, bool hs) {
        std::optional<Rational> l, h;
        if (lo) l = rat_parse(lo);
        if (hi) h = rat_parse(hi);
        auto r = simplest_rational_between(l, ls, h, hs);
        REQUIRE(r.has_value());
        return rat_str(*r);
    };
    CHECK(simplest(nullptr, false, nullptr, false) == "0");
    CHECK(simplest("0", true, nullptr, false) == "1");
    CHECK(simplest(nullptr, false, "0", true) == "-1");
    CHECK(simplest("0", true, "1/2", true) == "1/3");
    CHECK(simplest("0", true, "1/3", true) == "1/4");
    CHECK(simplest("9/8", true, "2", true) == "3/2");
    CHECK(simplest("-1", false, "1", false) == "0");
    CHECK(simplest("7/5", false, "7/5", false) == "7/5");
    CHECK(simplest("2", true, "3", true) == "5/2");
    CHECK(simplest("-7/3", true, "-9/5", true) == "-2");
    CHECK_FALSE(simplest_rational_between(Rational(1), true, Rational(1), false).has_value());
    CHECK_FALSE(simplest_rational_between(Rational(2), false, Rational(1), false).has_value());
}

TEST_CASE("simplest result lies inside the interval") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        Rational a((long)(rng() % 2000) - 1000, (long)(rng() % 40) + 1);
        Rational b((long)(rng() % 2000) - 1000, (long)(rng() % 40) + 1);
        if (a > b) std::swap(a, b);
        bool ls = rng() & 1, hs = rng() & 1;
        if (a == b && (ls || hs)) continue;
        auto r = simplest_rational_between(a, ls, b, hs);
        REQUIRE(r.has_value());
        CHECK((ls ? *r > a : *r >= a));
        CHECK((hs ? *r < b : *r <= b));
    }
}
