#include "flatnormal/error.hpp"
#include "flatnormal/expression.hpp"
#include "flatnormal/fundamental.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace flatnormal;
using flatnormal::testing::Sampler;
using flatnormal::testing::vec2;

namespace {

std::string read_data(const std::string& file) {
    std::ifstream in(std::string(FLATNORMAL_TEST_DATA) + "/" + file);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

double eval(const std::string& text, std::vector<double> u = {}) {
    return Expression::parse(text, static_cast<int>(u.size()))(u);
}

ErrorKind parse_error_kind(const std::string& text, int parameters) {
    try {
        (void)Expression::parse(text, parameters);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::numerical;
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(eval("2 + 3 * 4") == 14.0);
    CHECK(eval("(2 + 3) * 4") == 20.0);
    CHECK(eval("-2^2") == -4.0);
    CHECK(eval("2^3^2") == 512.0);
    CHECK(eval("2^-1") == 0.5);
    CHECK(eval("8 / 4 / 2") == 1.0);
    CHECK(eval("1 - 2 - 3") == -4.0);
    CHECK(eval("1.5e2 + .5") == 150.5);
    CHECK(eval("pi") == std::numbers::pi);
    CHECK(eval("e") == std::numbers::e);
    CHECK(eval("u1 * u2 - u3", {2.0, 3.0, 1.0}) == 5.0);
}

TEST_CASE("functions agree with the standard library") {
    Sampler s(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = s.uniform(0.1, 0.9);
        CHECK(eval("sech(u1)", {x}) == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-15));
        CHECK(eval("coth(u1) * tan(u1)", {x}) == doctest::Approx(std::tan(x) / std::tanh(x)).epsilon(1e-15));
        CHECK(eval("log(tan(u1 / 2))", {x}) == doctest::Approx(std::log(std::tan(x / 2))).epsilon(1e-15));
        CHECK(eval("asinh(u1) + acosh(1 + u1) + atanh(u1)", {x}) ==
              doctest::Approx(std::asinh(x) + std::acosh(1 + x) + std::atanh(x)).epsilon(1e-15));
        CHECK(eval("sqrt(exp(u1)) - asin(u1) * acos(u1) + atan(u1)", {x}) ==
              doctest::Approx(std::sqrt(std::exp(x)) - std::asin(x) * std::acos(x) + std::atan(x)).epsilon(1e-15));
        CHECK(eval("sec(u1) + csc(u1) + cot(u1) + csch(u1)", {x}) ==
              doctest::Approx(1 / std::cos(x) + 1 / std::sin(x) + 1 / std::tan(x) + 1 / std::sinh(x)).epsilon(1e-14));
        CHECK(eval("u1 ^ u1", {x}) == doctest::Approx(std::pow(x, x)).epsilon(1e-15));
    }
}

TEST_CASE("hyper-dual evaluation carries exact derivatives") {
    const Expression f = Expression::parse("sin(u1) * u2^2 + u1^u2", 2);
    const double a = 0.7;
    const double b = 1.3;
    const HyperDual r = f(std::vector<HyperDual>{HyperDual(a, 1, 0, 0), HyperDual(b, 0, 1, 0)});
    CHECK(r.v == doctest::Approx(std::sin(a) * b * b + std::pow(a, b)).epsilon(1e-15));
    CHECK(r.d1 == doctest::Approx(std::cos(a) * b * b + b * std::pow(a, b - 1)).epsilon(1e-14));
    CHECK(r.d2 == doctest::Approx(2 * std::sin(a) * b + std::pow(a, b) * std::log(a)).epsilon(1e-14));
    // d2/du1du2 of u1^u2 = a^(b-1) (1 + b log a)
    CHECK(r.d12 == doctest::Approx(2 * std::cos(a) * b + std::pow(a, b - 1) * (1 + b * std::log(a))).epsilon(1e-14));
}

TEST_CASE("named constants and constancy") {
    const Expression c = Expression::parse("2 * a + pi", 2, {{"a", 1.5}});
    CHECK(c.is_constant());
    CHECK(c(std::vector<double>{0, 0}) == doctest::Approx(3 + std::numbers::pi));
    CHECK_FALSE(Expression::parse("a * u2", 2, {{"a", 1.0}}).is_constant());
}

TEST_CASE("expression syntax errors") {
    for (const char* bad : {"sin(u1", "1 +", "2 $ 3", "foo(1)", "u3", "u0", "sin u1", "(1))", "", "1 2"})
        CHECK_MESSAGE(parse_error_kind(bad, 2) == ErrorKind::parse, bad);
    try {
        (void)Expression::parse("1 + * 2", 1);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("column 5") != std::string::npos);
    }
}

TEST_CASE("chart file reproduces the tractricoid metric") {
    const ImmersionChart chart = parse_chart_file(read_data("pseudosphere.chart"), "tractricoid");
    CHECK(chart.name == "tractricoid");
    CHECK(chart.n == 2);
    CHECK(chart.has_ad());
    REQUIRE(chart.intrinsic_curvature);
    CHECK(*chart.intrinsic_curvature == -1.0);
    CHECK(chart.domain[1].hi == doctest::Approx(2 * std::numbers::pi));
    Sampler s(5);
    for (int trial = 0; trial < 10; ++trial) {
        const double u = s.uniform(0.5, 2.5);
        const auto g = first_fundamental_form(chart, vec2(u, s.uniform(0.5, 5.5)));
        CHECK(g(0, 0) == doctest::Approx(std::pow(std::tanh(u), 2)).epsilon(1e-13));
        CHECK(g(1, 1) == doctest::Approx(std::pow(1 / std::cosh(u), 2)).epsilon(1e-13));
        CHECK(std::abs(g(0, 1)) < 1e-15);
    }
}

TEST_CASE("chart file errors carry line numbers") {
    try {
        (void)parse_chart_file(read_data("broken.chart"));
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find("line 6") != std::string::npos);
    }
    const std::string head = "dimension = 2\nambient = euclidean 3\ndomain u1 = 0, 1\ndomain u2 = 0, 1\n";
    CHECK_THROWS_AS(parse_chart_file(head + "x1 = u1\nx2 = u2\n"), Error);              // missing x3
    CHECK_THROWS_AS(parse_chart_file(head + "x1 = u1\nx2 = u2\nx3 = 0\nx4 = 0\n"), Error);
    CHECK_THROWS_AS(parse_chart_file(head + "colour = red\n"), Error);
    CHECK_THROWS_AS(parse_chart_file("dimension = 2\nambient = sphere 3\n"), Error);
    CHECK_THROWS_AS(parse_chart_file("dimension = 2\nambient = sphere 3 -1\n"), Error);
    CHECK_THROWS_AS(parse_chart_file("ambient = euclidean 3\n"), Error);
    CHECK_THROWS_AS(parse_chart_file("dimension = 1\nambient = euclidean 2\ndomain u1 = 1, 0\nx1 = u1\nx2 = 0\n"),
                    Error);
    const auto flat = parse_chart_file("dimension = 1\nambient = euclidean 2\nconst L = 2\n"
                                       "domain u1 = 0, L\nx1 = u1\nx2 = 0\n");
    CHECK(flat.domain[0].hi == 2.0);
}
