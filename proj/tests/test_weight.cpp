#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "eopt/rng.hpp"
#include "eopt/weight.hpp"

using eopt::EvalError;
using eopt::ParseError;
using eopt::WeightFn;

TEST_CASE("parses and evaluates basic forms") {
    CHECK(WeightFn::parse("1")(0.3) == 1.0);
    CHECK(WeightFn::parse("1-x")(1.0) == 0.0);
    CHECK(WeightFn::parse("(1-x)^0.5*(2+x)^0.5")(0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(WeightFn::parse("exp(x)")(1.0) == Catch::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(WeightFn::parse(" ( 1 - x ) * ( 1 + x ) ")(0.5) == Catch::Approx(0.75));
    CHECK(WeightFn::parse("1.5e2")(0.0) == 150.0);
    CHECK(WeightFn::parse("2.5E-1")(0.0) == 0.25);
}

TEST_CASE("precedence and associativity") {
    CHECK(WeightFn::parse("1+2*x^2")(3.0) == 19.0);
    CHECK(WeightFn::parse("2^3^2")(0.0) == 512.0);  // right-associative power
    CHECK(WeightFn::parse("-2^2")(0.0) == 4.0);     // unary minus binds below '^'
    CHECK(WeightFn::parse("1-2-3")(0.0) == -4.0);
    CHECK(WeightFn::parse("8/4/2")(0.0) == 1.0);
}

TEST_CASE("power edge cases") {
    CHECK(WeightFn::parse("x^x")(0.0) == 1.0);  // 0^0 = 1
    CHECK(WeightFn::parse("(1-x)^0")(5.0) == 1.0);
    CHECK(WeightFn::parse("(-2)^3")(0.0) == -8.0);
    CHECK_THROWS_AS(WeightFn::parse("(1-x)^0.5")(2.0), EvalError);
}

TEST_CASE("evaluation errors are distinct") {
    CHECK_THROWS_WITH(WeightFn::parse("(1-x)^0.5")(2.0),
                      Catch::Matchers::ContainsSubstring("negative base"));
    CHECK_THROWS_WITH(WeightFn::parse("1/x")(0.0),
                      Catch::Matchers::ContainsSubstring("division by zero"));
    CHECK_THROWS_WITH(WeightFn::parse("exp(x)")(1000.0),
                      Catch::Matchers::ContainsSubstring("non-finite"));
    CHECK_THROWS_WITH(WeightFn::parse("10^x")(400.0),
                      Catch::Matchers::ContainsSubstring("non-finite"));
}

TEST_CASE("syntax errors carry offsets") {
    try {
        WeightFn::parse("1+");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK_FALSE(e.expected().empty());
    }

    try {
        WeightFn::parse("(1-x");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.expected() == "')'");
    }

    CHECK_THROWS_AS(WeightFn::parse("2**3"), ParseError);
    CHECK_THROWS_AS(WeightFn::parse(""), ParseError);
    CHECK_THROWS_AS(WeightFn::parse("1 2"), ParseError);
    CHECK_THROWS_WITH(WeightFn::parse("sin(x)"),
                      Catch::Matchers::ContainsSubstring("unknown identifier"));
    CHECK_THROWS_WITH(WeightFn::parse("1+y"), Catch::Matchers::ContainsSubstring("unknown identifier"));
    CHECK_THROWS_AS(WeightFn::parse("exp x"), ParseError);
}

namespace {

// Random well-formed expression source, depth-bounded, avoiding '/' and '^'
// so evaluation cannot fault inside the round-trip comparison.
std::string random_expr(eopt::Rng& rng, int depth) {
    if (depth == 0 || rng.uniform01() < 0.3) {
        if (rng.uniform01() < 0.5) return "x";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", rng.uniform(0.1, 3.0));
        return buf;
    }
    const double pick = rng.uniform01();
    const std::string l = random_expr(rng, depth - 1);
    const std::string r = random_expr(rng, depth - 1);
    if (pick < 0.3) return "(" + l + "+" + r + ")";
    if (pick < 0.6) return "(" + l + "-" + r + ")";
    if (pick < 0.85) return "(" + l + "*" + r + ")";
    if (pick < 0.95) return "(-" + l + ")";
    return "exp(" + l + ")";
}

}  // namespace

TEST_CASE("round-trip through canonical text") {
    eopt::Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        const std::string src = random_expr(rng, 4);
        const WeightFn w = WeightFn::parse(src);
        const WeightFn w2 = WeightFn::parse(w.canonical_text());
        for (int k = 0; k < 100; ++k) {
            const double x = rng.uniform(-1.0, 1.0);
            const double a = w(x);
            const double b = w2(x);
            CHECK(b == Catch::Approx(a).epsilon(1e-15).margin(0.0));
        }
    }
}

TEST_CASE("evaluation is deterministic") {
    const WeightFn w = WeightFn::parse("(1-x)^0.5*(2+x)^0.5+exp(x)*0.25");
    for (double x : {-0.99, -0.5, 0.0, 0.123456789, 0.99}) {
        const double a = w(x);
        const double b = w(x);
        CHECK(a == b);  // bit-identical
    }
}

TEST_CASE("positivity check") {
    CHECK(eopt::positivity_check(WeightFn::parse("1"), -1, 1).pass);
    CHECK(eopt::positivity_check(WeightFn::parse("1-x"), -1, 1).pass);  // open interval
    CHECK(eopt::positivity_check(WeightFn::parse("exp(x)"), -3, 3).pass);

    const auto fail = eopt::positivity_check(WeightFn::parse("x"), -1, 1);
    CHECK_FALSE(fail.pass);
    CHECK(fail.offending_x < 0.0);

    const auto fault = eopt::positivity_check(WeightFn::parse("1/x"), -1, 1);
    CHECK_FALSE(fault.pass);
    CHECK_FALSE(fault.reason.empty());

    CHECK_THROWS_AS(eopt::positivity_check(WeightFn::parse("1"), -1, 1, 1), std::domain_error);
}

TEST_CASE("closed-form weight family detection") {
    auto expo = [](const char* s) { return eopt::jacobi_weight_exponents(WeightFn::parse(s)); };
    CHECK(expo("1") == std::make_pair(0, 0));
    CHECK(expo("1-x") == std::make_pair(1, 0));
    CHECK(expo("1+x") == std::make_pair(0, 1));
    CHECK(expo("(1-x)*(1+x)") == std::make_pair(1, 1));
    CHECK(expo("(1+x)*(1-x)") == std::make_pair(1, 1));
    CHECK(expo(" 1 - x ") == std::make_pair(1, 0));
    CHECK_FALSE(expo("2").has_value());
    CHECK_FALSE(expo("exp(x)").has_value());
    CHECK_FALSE(expo("(1-x)^0.5*(2+x)^0.5").has_value());
}
