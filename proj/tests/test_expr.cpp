#include <doctest.h>

#include <cmath>
#include <random>

#include "pbm/errors.hpp"
#include "pbm/expr.hpp"
#include "ast_gen.hpp"

using namespace pbm;

namespace {

double eval1(std::string_view text, double x) { return Expression::parse(text, 1)(x); }

ErrorCode code_of(std::string_view text, int arity, double x = 1.0) {
    try {
        Expression::parse(text, arity)(x, x);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error for " << text);
    return ErrorCode::io;
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("map definitions from the worked examples evaluate as written") {
    CHECK(eval1("z^2 / 2", 8) == 32);
    const auto eta = Expression::parse("piecewise(z in [0,64): 0; otherwise: z/2)", 1);
    CHECK(eta(2) == 0);
    CHECK(eta(100) == 50);
    CHECK(Expression::parse("max(x, y)", 2)(3, 5) == 5);
    CHECK(eval1("log(u+3)", 0) == doctest::Approx(1.0986122886681098).epsilon(1e-15));
    CHECK(std::abs(eval1("x^(1/3)", 8) - 2.0) <= 1e-12);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval1("2^3^2", 0) == 512);
    CHECK(eval1("2+3*4", 0) == 14);
    CHECK(eval1("(2+3)*4", 0) == 20);
    CHECK(eval1("8 / 4 / 2", 0) == 1);
    CHECK(eval1("10 - 4 - 3", 0) == 3);
    CHECK(eval1("2 * 3 ^ 2", 0) == 18);
    // unary minus sits below ^ in the grammar, so it binds to the base
    CHECK(eval1("-2^2", 0) == 4);
    CHECK(eval1("-(2^2)", 0) == -4);
    CHECK(eval1("2^-1", 0) == 0.5);
    CHECK(eval1("--3", 0) == 3);
}

TEST_CASE("piecewise endpoints respect open and closed brackets") {
    const auto half_open = Expression::parse("piecewise(z in [0,64): 0; otherwise: z/2)", 1);
    CHECK(half_open(0) == 0);
    CHECK(half_open(std::nextafter(64.0, 0.0)) == 0);
    CHECK(half_open(64) == 32);
    const auto closed = Expression::parse("piecewise(z in [0,64]: 0; otherwise: z/2)", 1);
    CHECK(closed(64) == 0);
    CHECK(closed(std::nextafter(64.0, 100.0)) == std::nextafter(64.0, 100.0) / 2);
    const auto open_left = Expression::parse("piecewise(z in (0, 8): 1/4; otherwise: 1)", 1);
    CHECK(open_left(0) == 1);
    CHECK(open_left(4) == 0.25);
    CHECK(open_left(8) == 1);
}

TEST_CASE("first matching branch wins where conditions overlap") {
    const auto f = Expression::parse("piecewise(x in [0, 10]: 1; x in [5, 20]: 2; otherwise: 3)", 1);
    CHECK(f(7) == 1);
    CHECK(f(15) == 2);
    CHECK(f(25) == 3);
}

TEST_CASE("set unions and unbounded intervals") {
    const auto g = Expression::parse("piecewise(z in [0, 0] or [8, inf): 2; otherwise: 0)", 1);
    CHECK(g(0) == 2);
    CHECK(g(1) == 0);
    CHECK(g(8) == 2);
    CHECK(g(1e300) == 2);
    const auto h = Expression::parse("piecewise(z in (0, 8) or z in [32, 64): 1; otherwise: 0)", 1);
    CHECK(h(4) == 1);
    CHECK(h(16) == 0);
    CHECK(h(32) == 1);
    CHECK(g.breakpoints() == std::vector<double>{0, 8});
}

TEST_CASE("evaluation errors") {
    CHECK(code_of("log(x - 1)", 1) == ErrorCode::domain);
    CHECK(code_of("sqrt(x - 2)", 1) == ErrorCode::domain);
    CHECK(code_of("1 / (x - 1)", 1) == ErrorCode::division_by_zero);
    CHECK(eval1("cbrt(x - 9)", 1) == -2);
    CHECK(eval1("abs(x - 9)", 1) == 8);
}

TEST_CASE("syntax errors carry offset and expected tokens") {
    try {
        Expression::parse("z + * 2", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(Expression::parse("", 1), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("piecewise(z in [0, 1): 1)", 1), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("max(1)", 1), Error);
    CHECK_THROWS_AS(Expression::parse("(1 + 2", 1), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("foo(1)", 1), Error);
}

TEST_CASE("variables beyond the declared arity are rejected") {
    CHECK(code_of("x + y", 1) == ErrorCode::arity);
    CHECK(code_of("x + y + w", 2) == ErrorCode::arity);
    CHECK(Expression::parse("t / 2", 2).variables() == std::vector<std::string>{"t", "z"});
    CHECK(Expression::parse("w - z", 2)(5, 2) == 3);
    CHECK(Expression::parse("a * b", 2, {"b", "a"})(2, 10) == 20);
}

TEST_CASE("number formatting is shortest round-trip") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, 64.0, 0.0}) {
        const std::string s = format_number(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_number(64) == "64");
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("print then parse is the identity on 60 random trees per arity") {
    for (int arity : {1, 2}) {
        pbm::test::AstGen gen(1234 + static_cast<std::uint64_t>(arity), arity);
        std::vector<std::string> vars = arity == 1 ? std::vector<std::string>{"z"} : std::vector<std::string>{"x", "y"};
        for (int i = 0; i < 60; ++i) {
            const ExprPtr ast = gen.tree(4);
            const std::string text = print(*ast);
            const auto back = Expression::parse(text, arity, vars);
            INFO(text);
            CHECK(structurally_equal(*ast, back.root()));
            CHECK(print(back.root()) == text);
        }
    }
}

TEST_CASE("evaluation is repeatable bit for bit") {
    const auto f = Expression::parse("sqrt(z) / (16 * sqrt(2)) + log(z + 3) ^ 1.5", 1);
    for (double z = 0; z < 100; z += 0.37) {
        const double a = f(z);
        CHECK(f(z) == a);
    }
}

TEST_CASE("interval set parsing and normalization") {
    const auto raw = parse_interval_set("[0, 1] or [1, 2) or (5, inf)");
    CHECK(raw.size() == 3);
    const auto s = normalize(raw);
    REQUIRE(s.size() == 2);
    CHECK(s[0].lo == 0);
    CHECK(s[0].hi == 2);
    CHECK_FALSE(s[0].hi_closed);
    CHECK(contains(s, 1.5));
    CHECK_FALSE(contains(s, 5));
    CHECK(contains(s, 6));
    CHECK_THROWS_AS(normalize(parse_interval_set("[3, 1]")), Error);
    CHECK(to_string(s) == "[0, 2) or (5, inf)");
}

}  // TEST_SUITE
