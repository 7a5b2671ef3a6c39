#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "pbm/errors.hpp"
#include "pbm/space.hpp"

using namespace pbm;

namespace {

PartialBMetricSpace space_of(std::string_view distance, double s = 1.0, std::string_view carrier = "[0, inf)") {
    return PartialBMetricSpace(Carrier::parse(carrier), Expression::parse(distance, 2), s);
}

const AxiomReport& find(const std::vector<AxiomReport>& rs, AxiomId id) {
    for (const auto& r : rs) {
        if (r.axiom == id) return r;
    }
    FAIL("axiom missing from report");
    return rs.front();
}

// Straight transcription of the four axioms over every pair and ordered
// triple, used as the reference for the library's verdicts.
std::array<bool, 4> pbm_oracle(double (*pd)(double, double), double s, const std::vector<double>& xs) {
    auto eq = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
    auto le = [&](double a, double b) { return a <= b || eq(a, b); };
    std::array<bool, 4> ok{true, true, true, true};
    for (double x : xs) {
        for (double y : xs) {
            const bool same = eq(pd(x, x), pd(x, y)) && eq(pd(x, y), pd(y, y));
            if (same && x != y) ok[0] = false;
            if (!le(pd(x, x), pd(x, y))) ok[1] = false;
            if (!eq(pd(x, y), pd(y, x))) ok[2] = false;
            for (double z : xs) {
                if (!le(pd(x, y), s * (pd(x, z) + pd(z, y)) - pd(z, z))) ok[3] = false;
            }
        }
    }
    return ok;
}

std::vector<double> random_points(std::uint64_t seed, std::size_t n, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, hi);
    std::vector<double> xs(n);
    for (auto& x : xs) x = u(rng);
    return xs;
}

}  // namespace

TEST_SUITE("space") {

TEST_CASE("max distance passes every partial b-metric axiom on random samples") {
    const auto sp = max_metric_space();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto xs = random_points(seed, 40, 100.0);
        xs.push_back(0.0);
        const auto reports = check_pbm_axioms(sp, xs);
        REQUIRE(reports.size() == 4);
        for (const auto& r : reports) {
            CHECK(r.pass);
            CHECK(r.witnesses.empty());
        }
    }
}

TEST_CASE("max distance is not a b-metric: self-distance is nonzero") {
    const std::vector<double> xs{0, 1, 2};
    const auto reports = check_b_metric_axioms(max_metric_space(), xs);
    CHECK_FALSE(find(reports, AxiomId::b1_zero_self_distance).pass);
    CHECK(find(reports, AxiomId::b2_symmetry).pass);
}

TEST_CASE("absolute difference is a metric, squared difference a b-metric with s = 2") {
    const auto xs = random_points(7, 30, 10.0);
    for (const auto& r : check_b_metric_axioms(abs_metric_space(), xs)) CHECK(r.pass);
    for (const auto& r : check_b_metric_axioms(space_of("(x - y)^2", 2.0), xs)) CHECK(r.pass);
    const auto s1 = check_b_metric_axioms(space_of("(x - y)^2", 1.0), std::vector<double>{0, 1, 2});
    CHECK_FALSE(find(s1, AxiomId::b3_relaxed_triangle).pass);
}

TEST_CASE("clamped max minus one collapses distinct points") {
    // pd(0,0) = pd(0,0.5) = pd(0.5,0.5) = 0, so indistinguishability is the axiom that fails
    const std::vector<double> xs{0, 0.5, 2};
    const auto sp = space_of("max(max(x, y) - 1, 0)");
    const auto oracle = pbm_oracle([](double x, double y) { return std::max(std::max(x, y) - 1, 0.0); }, 1.0, xs);
    const auto reports = check_pbm_axioms(sp, xs);
    CHECK_FALSE(oracle[0]);
    for (int i = 0; i < 4; ++i) CHECK(reports[static_cast<std::size_t>(i)].pass == oracle[static_cast<std::size_t>(i)]);
    const auto& p1 = find(reports, AxiomId::p1_indistinguishability);
    REQUIRE_FALSE(p1.witnesses.empty());
    CHECK(p1.witnesses.front().points == std::vector<double>{0, 0.5});
}

TEST_CASE("verdicts agree with the brute-force oracle on several distances") {
    struct Case {
        const char* text;
        double (*fn)(double, double);
        double s;
    };
    const Case cases[] = {
        {"x + y", [](double x, double y) { return x + y; }, 1.0},
        {"(x - y)^2", [](double x, double y) { return (x - y) * (x - y); }, 1.0},
        {"(x - y)^2", [](double x, double y) { return (x - y) * (x - y); }, 2.0},
        {"max(x, y) + abs(x - y)", [](double x, double y) { return std::max(x, y) + std::abs(x - y); }, 1.0},
        {"x", [](double x, double) { return x; }, 1.0},
    };
    for (const auto& c : cases) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto xs = random_points(seed, 12, 5.0);
            xs.push_back(0);
            xs.push_back(1);
            xs.push_back(2);
            const auto oracle = pbm_oracle(c.fn, c.s, xs);
            const auto reports = check_pbm_axioms(space_of(c.text, c.s), xs);
            INFO(c.text << " s=" << c.s);
            for (std::size_t i = 0; i < 4; ++i) CHECK(reports[i].pass == oracle[i]);
        }
    }
}

TEST_CASE("sum distance violates small self-distance") {
    const auto reports = check_pbm_axioms(space_of("x + y"), std::vector<double>{0, 1, 2});
    CHECK_FALSE(find(reports, AxiomId::p2_small_self_distance).pass);
}

TEST_CASE("squared difference with s = 1 violates the modified triangle, witnesses re-evaluate") {
    const auto sp = space_of("(x - y)^2");
    const auto reports = check_pbm_axioms(sp, std::vector<double>{0, 1, 2});
    const auto& p4 = find(reports, AxiomId::p4_modified_triangle);
    CHECK_FALSE(p4.pass);
    REQUIRE_FALSE(p4.witnesses.empty());
    for (const auto& w : p4.witnesses) {
        CHECK(w.gap > 0);
        CHECK(recompute_gap(sp, AxiomId::p4_modified_triangle, w) == doctest::Approx(w.gap));
        CHECK(w.lhs - w.rhs == doctest::Approx(w.gap));
    }
}

TEST_CASE("witness count is capped but violations are all counted") {
    const auto sp = space_of("x + y");
    const auto xs = random_points(3, 50, 10.0);
    AxiomCheckOptions opts;
    opts.witness_cap = 5;
    const auto& p2 = find(check_pbm_axioms(sp, xs, opts), AxiomId::p2_small_self_distance);
    CHECK(p2.witnesses.size() == 5);
    CHECK(p2.violations > 5);
}

TEST_CASE("worker count does not change the report") {
    const auto sp = space_of("(x - y)^2");
    const auto xs = random_points(11, 40, 3.0);
    AxiomCheckOptions one, four;
    four.workers = 4;
    const auto a = check_pbm_axioms(sp, xs, one);
    const auto b = check_pbm_axioms(sp, xs, four);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].violations == b[i].violations);
        REQUIRE(a[i].witnesses.size() == b[i].witnesses.size());
        for (std::size_t k = 0; k < a[i].witnesses.size(); ++k) CHECK(a[i].witnesses[k].points == b[i].witnesses[k].points);
    }
}

TEST_CASE("empty sample sets and bad coefficients are rejected") {
    CHECK_THROWS_AS(check_pbm_axioms(max_metric_space(), std::vector<double>{}), Error);
    CHECK_THROWS_AS(PartialBMetricSpace(Carrier::nonnegative_reals(), builtin_distance("max"), 0.5), Error);
    CHECK_THROWS_AS(Carrier::parse("[-1, 2]"), Error);
    CHECK_THROWS_AS(builtin_distance("cosine"), Error);
}

TEST_CASE("distance evaluation failures name the distance") {
    const auto sp = space_of("log(x - y)");
    try {
        sp.pd(1, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::distance_evaluation);
    }
}

TEST_CASE("carrier sampling is sorted, in the carrier and seed-determined") {
    const auto c = Carrier::parse("[0, 1] or (2, 3)");
    SamplingOptions o;
    o.grid_per_interval = 5;
    o.random_count = 20;
    const auto a = sample_carrier(c, o);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
    for (double x : a) CHECK(c.contains(x));
    CHECK(sample_carrier(c, o) == a);
    o.seed = 1;
    CHECK(sample_carrier(c, o) != a);
}

TEST_CASE("grid points include the upper end despite rounding") {
    const auto g = grid_points(0, 100, 0.5);
    CHECK(g.size() == 201);
    CHECK(g.back() == 100);
    CHECK(grid_points(0, 1, 0.1).size() == 11);
}

TEST_CASE("indistinguishability under the max distance") {
    const auto sp = max_metric_space();
    CHECK(pbm_equal(sp, 0, 0));
    CHECK(pbm_equal(sp, 3, 3));
    CHECK_FALSE(pbm_equal(sp, 2, 3));
    CHECK_FALSE(pbm_equal(sp, 0, 1e-6));
}

TEST_CASE("convergence and Cauchy diagnostics on geometric and oscillating sequences") {
    const auto sp = max_metric_space();
    std::vector<double> geo;
    for (int k = 0; k < 60; ++k) geo.push_back(std::ldexp(1.0, -k));
    CHECK(check_convergence(sp, geo, 0.0).converges);
    const auto c = check_cauchy_numeric(sp, geo);
    CHECK(c.cauchy);
    CHECK(c.limit_estimate <= 1e-9);

    std::vector<double> osc;
    for (int k = 0; k < 20; ++k) osc.push_back(k % 2);
    CHECK_FALSE(check_convergence(sp, osc, 0.0).converges);
    CHECK_FALSE(check_cauchy_numeric(sp, osc).cauchy);

    CHECK_THROWS_AS(check_cauchy_numeric(sp, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("constant sequences converge even with nonzero self-distance") {
    const auto sp = max_metric_space();
    const std::vector<double> seq(10, 4.0);
    CHECK(check_convergence(sp, seq, 4.0).converges);
    const auto c = check_cauchy_numeric(sp, seq);
    CHECK(c.cauchy);
    CHECK(c.limit_estimate == 4.0);
}

}  // TEST_SUITE
