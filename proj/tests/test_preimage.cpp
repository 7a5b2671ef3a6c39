#include <doctest.h>

#include <cmath>

#include "pbm/errors.hpp"
#include "pbm/preimage.hpp"

using namespace pbm;

namespace {

ErrorCode failure(const Expression& f, double target, const Carrier& c, std::optional<Expression> inv = std::nullopt) {
    try {
        solve_preimage(f, target, c, inv);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a failure");
    return ErrorCode::io;
}

}  // namespace

TEST_SUITE("preimage") {

TEST_CASE("bisection finds cube roots on the half line") {
    const auto cube = Expression::parse("z^3", 1);
    const auto c = Carrier::nonnegative_reals();
    for (double target : {0.0, 1.0, 8.0, 100.0, 1000.0, 1e9}) {
        const auto r = solve_preimage(cube, target, c);
        CHECK_FALSE(r.from_inverse);
        CHECK(std::abs(std::cbrt(target) - r.x) <= 1e-9 * std::max(1.0, std::cbrt(target)));
        CHECK(r.residual <= 1e-9 * std::max(1.0, target));
    }
}

TEST_CASE("the leftmost bracketed root wins") {
    // (x - 1)(x - 3) has roots 1 and 3
    const auto f = Expression::parse("(x - 1) * (x - 3)", 1);
    const auto r = solve_preimage(f, 0.0, Carrier::parse("[0, 10]"));
    CHECK(r.x == doctest::Approx(1.0));
}

TEST_CASE("a supplied inverse is used and checked forward") {
    const auto q = Expression::parse("z^2 / 2", 1);
    const auto inv = Expression::parse("sqrt(2 * x)", 1);
    const auto r = solve_preimage(q, 32.0, Carrier::nonnegative_reals(), inv);
    CHECK(r.from_inverse);
    CHECK(r.x == 8.0);
    CHECK(r.residual == 0.0);
    CHECK(failure(q, 32.0, Carrier::nonnegative_reals(), Expression::parse("x", 1)) == ErrorCode::inverse_inconsistent);
}

TEST_CASE("targets outside the range have no bracket") {
    const auto f = Expression::parse("x + 5", 1);
    CHECK(failure(f, 1.0, Carrier::parse("[0, 10]")) == ErrorCode::no_bracket_found);
    // the range gap of a map that jumps from 64^3 to 64^6
    const auto z = Expression::parse("piecewise(z in [0, 64): z^3; otherwise: z^6)", 1);
    CHECK(failure(z, 1e6, Carrier::nonnegative_reals()) == ErrorCode::no_bracket_found);
}

TEST_CASE("a root exactly on a scan point is accepted") {
    const auto f = Expression::parse("x", 1);
    const auto r = solve_preimage(f, 4.0, Carrier::parse("[0, 8]"));
    CHECK(r.x == doctest::Approx(4.0));
    CHECK(r.residual <= 1e-9);
}

TEST_CASE("results stay inside a carrier made of several intervals") {
    const auto f = Expression::parse("x / 2", 1);
    const auto c = Carrier::parse("[0, 1] or [4, 6]");
    const auto r = solve_preimage(f, 2.5, c);
    CHECK(c.contains(r.x, 1e-9));
    CHECK(r.x == doctest::Approx(5.0));
}

}  // TEST_SUITE
