#include <doctest.h>

#include <cmath>

#include "pbm/errors.hpp"
#include "pbm/solver.hpp"
#include "support.hpp"

using namespace pbm;
using pbm::test::bundled;
using pbm::test::uniform_scenario;

namespace {

// The interleaved sequence for the example_2_6 maps, using closed-form inverses.
std::vector<double> native_sequence(double v0, std::size_t terms) {
    std::vector<double> d;
    double v = v0;
    for (std::size_t k = 0; k < terms; ++k) {
        if (k % 2 == 0) {
            d.push_back(v);                // h v
            v = std::cbrt(d.back());       // Z v' = d
        } else {
            d.push_back(v < 64 ? 0 : v / 2);  // eta v
            v = std::sqrt(2 * d.back());      // Q v' = d
        }
    }
    return d;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("example_2_6 traces match the closed-form sequence and converge to 0") {
    const auto sc = bundled("example_2_6");
    for (double v0 : {0.0, 1.0, 8.0, 100.0, 1000.0}) {
        const auto t = build_sequence(sc, v0);
        INFO("v0 = " << v0);
        REQUIRE(t.converged());
        CHECK(t.limit == 0.0);
        CHECK(t.max_preimage_residual() <= 1e-9);
        const auto expected = native_sequence(v0, t.d_points.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(std::abs(t.d_points[k] - expected[k]) <= 1e-9 * std::max(1.0, expected[k]));
        }
        CHECK(t.step_distances.size() + 1 == t.d_points.size());
        CHECK(t.gate_flags.size() == t.d_points.size());
    }
}

TEST_CASE("starting at the fixed point settles immediately") {
    const auto t = build_sequence(bundled("example_2_6"), 0.0);
    REQUIRE(t.converged());
    CHECK(t.d_points.size() == 6);
    for (double d : t.d_points) CHECK(d == 0);
}

TEST_CASE("gate flags follow gamma(Q v) on even and delta(Z v) on odd steps") {
    const auto t1 = build_sequence(bundled("example_2_6"), 1.0);
    // gamma(Q 1) = gamma(0.5) = 1/32
    CHECK_FALSE(t1.gate_flags[0]);
    CHECK_FALSE(t1.all_gates());
    const auto t8 = build_sequence(bundled("example_2_6"), 8.0);
    CHECK(t8.all_gates());
}

TEST_CASE("even-step distances never grow on fully gated traces") {
    const auto sc = bundled("example_2_6");
    for (double v0 : {8.0, 100.0, 1000.0}) {
        const auto t = build_sequence(sc, v0);
        REQUIRE(t.all_gates());
        CHECK(check_even_step_monotonicity(t, sc.space).ok());
        CHECK(t.step_distances.back() < 1e-9);
    }
}

TEST_CASE("geometric sequences in the cyclic demo") {
    const auto sc = bundled("corollary_2_4_demo");
    const auto t = build_sequence(sc, 1.0);
    REQUIRE(t.converged());
    for (std::size_t k = 0; k + 1 < t.d_points.size(); ++k) {
        CHECK(t.d_points[k] == std::ldexp(1.0, -static_cast<int>(k) - 1));
    }
    const auto lim = detect_limit(t, sc.space);
    CHECK(lim.ok());
    CHECK(lim.limit <= 1e-9);
}

TEST_CASE("unconverged traces are reported, not certified") {
    const auto sc = bundled("corollary_2_4_demo");
    IterationOptions o;
    o.max_iters = 3;
    const auto t = build_sequence(sc, 1.0, o);
    CHECK(t.status == TraceStatus::max_iters);
    try {
        detect_limit(t, sc.space);
        FAIL("expected NotConverged");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_converged);
    }
}

TEST_CASE("a target in the range gap ends the trace with a preimage failure") {
    const auto t = build_sequence(bundled("example_2_2"), 1e6);
    CHECK(t.status == TraceStatus::preimage_failure);
    CHECK(t.failure_step == 0);
    CHECK_FALSE(t.failure_message.empty());
}

TEST_CASE("coincidence points match the analytic roots") {
    const auto sc = bundled("example_2_6");
    const auto grid = grid_points(0, 100, 0.01);
    const auto hq = find_coincidence_points(sc.space, sc.h, sc.Q, grid);
    // x = x^2 / 2
    REQUIRE(hq.points.size() == 2);
    CHECK(std::abs(hq.points[0] - 0.0) <= 1e-6);
    CHECK(std::abs(hq.points[1] - 2.0) <= 1e-6);
    // eta(x) = x^3 only at 0: below 64 eta is 0, above it x / 2 < x^3
    const auto ez = find_coincidence_points(sc.space, sc.eta, sc.Z, grid);
    REQUIRE(ez.points.size() == 1);
    CHECK(ez.points[0] == 0);
    for (double r : hq.residuals) CHECK(r <= 1e-9);
}

TEST_CASE("coincidences between grid points are bisected") {
    const auto sp = abs_metric_space();
    const auto f = Expression::parse("x^2", 1);
    const auto g = Expression::parse("2", 1);
    const auto c = find_coincidence_points(sp, f, g, grid_points(0, 3, 0.1));
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("weak compatibility") {
    const auto sc = bundled("example_2_6");
    CHECK(check_weak_compatibility(sc.space, sc.h, sc.Q, std::vector<double>{0, 2}).verdict == Verdict::pass);
    CHECK(check_weak_compatibility(sc.space, sc.eta, sc.Z, std::vector<double>{0}).verdict == Verdict::pass);
    // 2x and x^2 meet at 2 but 2(2^2) = 8 and (2 * 2)^2 = 16
    const auto f = Expression::parse("2 * x", 1);
    const auto g = Expression::parse("x^2", 1);
    const auto r = check_weak_compatibility(abs_metric_space(), f, g, std::vector<double>{0, 2});
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.violated == 1);
    CHECK(check_weak_compatibility(abs_metric_space(), f, g, std::vector<double>{}).verdict == Verdict::vacuous);
}

TEST_CASE("fixed-point certificates") {
    const auto sc = bundled("example_2_6");
    const auto zero = certify_common_fixed_point(sc, 0);
    CHECK(zero.certified);
    for (double r : zero.residuals) CHECK(r == 0);
    const auto two = certify_common_fixed_point(sc, 2);
    CHECK_FALSE(two.certified);
    CHECK(two.equal[0]);  // h(2) = 2
    CHECK_FALSE(two.equal[1]);

    const auto id = uniform_scenario("x");
    for (double d : {0.0, 3.5, 77.0}) CHECK(certify_common_fixed_point(id, d).certified);
}

TEST_CASE("uniqueness search") {
    const auto u = search_uniqueness(bundled("example_2_6"), grid_points(0, 100, 0.25));
    REQUIRE(u.unique());
    CHECK(u.points.front().point == 0);
    CHECK(u.grid_points == 401);

    const auto many = search_uniqueness(uniform_scenario("x"), std::vector<double>{0, 1, 2});
    CHECK(many.multiple());
    CHECK(many.points.size() == 3);

    const auto none = search_uniqueness(uniform_scenario("x + 1"), grid_points(0, 5, 1));
    CHECK(none.points.empty());
    CHECK_FALSE(none.warning.empty());
}

TEST_CASE("fixed points between grid points are found by bisection") {
    // x / 2 + 1.3 has its fixed point at 2.6
    const auto u = search_uniqueness(uniform_scenario("x / 2 + 1.3"), grid_points(0, 5, 1));
    REQUIRE(u.unique());
    CHECK(u.points.front().point == doctest::Approx(2.6));
}

}  // TEST_SUITE
