#include "pbm/function_classes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

#include "pbm/errors.hpp"

namespace pbm {

XiFunction xi_identity() { return {Expression::parse("t", 1)}; }

CClassFunction make_cclass(CClassPreset preset) {
    switch (preset) {
        case CClassPreset::half_t: return {Expression::parse("t / 2", 2, {"t", "z"}), preset};
        case CClassPreset::truncated_difference:
            return {Expression::parse("max(t - z, 0)", 2, {"t", "z"}), preset};
        case CClassPreset::custom: break;
    }
    throw Error(ErrorCode::unknown_preset, "custom is not a preset");
}

CClassFunction cclass_from_name(std::string_view name) {
    if (name == "half-t") return make_cclass(CClassPreset::half_t);
    if (name == "truncated-difference") return make_cclass(CClassPreset::truncated_difference);
    throw Error(ErrorCode::unknown_preset, "unknown C-class preset '" + std::string(name) + "'");
}

std::string_view to_string(CClassPreset p) noexcept {
    switch (p) {
        case CClassPreset::half_t: return "half-t";
        case CClassPreset::truncated_difference: return "truncated-difference";
        case CClassPreset::custom: return "custom";
    }
    return "?";
}

std::vector<double> default_xi_samples() {
    return {0.0, 1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 1000.0};
}

std::vector<std::pair<double, double>> default_cclass_pairs() {
    static constexpr std::array<double, 10> kValues = {0.0, 1e-6, 0.01, 0.5, 1.0, 2.0, 3.0, 8.0, 32.0, 100.0};
    std::vector<std::pair<double, double>> out;
    for (double t : kValues)
        for (double z : kValues) out.emplace_back(t, z);
    return out;
}

std::vector<std::vector<double>> default_omega_probes(double tol) {
    constexpr int kLen = 32;
    std::vector<std::vector<double>> out;
    for (double c : {10.0 * tol, 0.5, 1.0, 10.0}) out.emplace_back(kLen, c);
    std::vector<double> one_plus, inv, geo;
    for (int n = 1; n <= kLen; ++n) {
        one_plus.push_back(1.0 + 1.0 / n);
        inv.push_back(1.0 / n);
        geo.push_back(std::ldexp(1.0, -n));
    }
    out.push_back(std::move(one_plus));
    out.push_back(std::move(inv));
    out.push_back(std::move(geo));
    return out;
}

namespace {

double eval1(const Expression& f, double t, std::string_view what) {
    try {
        return f(t);
    } catch (const Error& e) {
        throw Error(ErrorCode::evaluation, std::string(what) + " at " + format_number(t) + ": " + e.what());
    }
}

double eval2(const Expression& f, double t, double z, std::string_view what) {
    try {
        return f(t, z);
    } catch (const Error& e) {
        throw Error(ErrorCode::evaluation,
                    std::string(what) + " at (" + format_number(t) + ", " + format_number(z) + "): " + e.what());
    }
}

bool side_continuous(const Expression& f, double t, double ft, double dir, double tol) {
    constexpr int kHalvings = 6;
    const double h0 = 1e-3 * std::max(1.0, std::abs(t));
    if (t + dir * h0 < 0.0) return true;
    std::array<double, kHalvings + 1> inc{};
    for (int k = 0; k <= kHalvings; ++k) {
        const double h = std::ldexp(h0, -k);
        inc[k] = std::abs(eval1(f, t + dir * h, "continuity probe") - ft);
    }
    const double slack = tol * tol_scale(ft, 0.0);
    for (int k = 0; k < kHalvings; ++k) {
        if (inc[k + 1] > inc[k] + slack) return false;
    }
    return inc[kHalvings] <= slack || inc[kHalvings] < 0.5 * inc[0];
}

void record_continuity(ComplianceReport& r, const Expression& f, double t, double tol) {
    if (continuity_heuristic(f, t, tol)) {
        r.record_satisfied(0.0);
    } else {
        r.record_violation({{t}, 0.0, 0.0, 0.0, "increments do not shrink: possible jump"});
    }
}

}  // namespace

bool continuity_heuristic(const Expression& f, double t, double tol) {
    const double ft = eval1(f, t, "continuity probe");
    return side_continuous(f, t, ft, +1.0, tol) && side_continuous(f, t, ft, -1.0, tol);
}

ComplianceReport check_xi(const XiFunction& xi, std::span<const double> samples, double tol) {
    if (!std::is_sorted(samples.begin(), samples.end())) {
        throw Error(ErrorCode::unsorted_samples, "xi samples must be ascending");
    }
    if (!std::binary_search(samples.begin(), samples.end(), 0.0)) {
        throw Error(ErrorCode::invalid_argument, "xi samples must contain 0");
    }
    ComplianceReport r("xi-class");
    std::vector<double> values;
    values.reserve(samples.size());
    for (double t : samples) values.push_back(eval1(xi.expr, t, "xi"));

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = samples[i];
        const double v = values[i];
        if (t <= tol) {
            if (t == 0.0) {
                if (std::abs(v) <= tol) {
                    r.record_satisfied(tol - std::abs(v));
                } else {
                    r.record_violation({{t}, v, 0.0, std::abs(v), "xi(0) != 0"});
                }
            }
        } else if (v > tol) {
            r.record_satisfied(v - tol);
        } else {
            r.record_violation({{t}, v, tol, tol - v, "xi vanishes away from 0"});
        }
        if (i + 1 < samples.size()) {
            const double next = values[i + 1];
            if (approx_le(v, next, tol)) {
                r.record_satisfied(next - v);
            } else {
                r.record_violation({{t, samples[i + 1]}, v, next, v - next, "xi decreases"});
            }
        }
        record_continuity(r, xi.expr, t, tol);
    }
    return r.finalize();
}

ComplianceReport check_cclass(const CClassFunction& h, std::span<const std::pair<double, double>> pairs, double tol) {
    if (pairs.empty()) throw Error(ErrorCode::empty_sample_set, "no C-class sample pairs");
    ComplianceReport r("cclass");
    for (const auto& [t, z] : pairs) {
        if (t < 0.0 || z < 0.0) throw Error(ErrorCode::invalid_argument, "C-class samples must be nonnegative");
        const double v = eval2(h.expr, t, z, "H");
        if (approx_le(v, t, tol)) {
            r.record_satisfied(t - v);
        } else {
            r.record_violation({{t, z}, v, t, v - t, "H(t, z) > t"});
        }
        if (approx_equal(v, t, tol)) {
            const double m = std::min(t, z);
            if (m <= tol) {
                r.record_satisfied(tol - m);
            } else {
                r.record_violation({{t, z}, m, tol, m - tol, "H(t, z) = t with t, z > 0"});
            }
        } else {
            r.record_vacuous();
        }
    }
    return r.finalize();
}

ComplianceReport check_omega1(const OmegaOneFunction& omega, const std::vector<std::vector<double>>& probes,
                              double tol) {
    constexpr std::size_t kMinLength = 16;
    ComplianceReport r("omega1-class");
    std::set<double> continuity_points;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto& seq = probes[p];
        if (seq.size() < kMinLength) {
            throw Error(ErrorCode::sequence_too_short,
                        "probe " + std::to_string(p) + " has " + std::to_string(seq.size()) + " terms, need 16");
        }
        double eps = std::numeric_limits<double>::infinity();
        double min_omega = std::numeric_limits<double>::infinity();
        for (std::size_t n = seq.size() / 2; n < seq.size(); ++n) {
            const double w = eval1(omega.expr, seq[n], "omega");
            eps = std::min(eps, std::abs(seq[n]));
            min_omega = std::min(min_omega, w);
            continuity_points.insert(seq[n]);
        }
        for (double s : seq) {
            const double w = eval1(omega.expr, s, "omega");
            if (w < -tol) {
                r.record_violation({{static_cast<double>(p), s}, w, 0.0, -w, "omega negative"});
                break;
            }
        }
        if (eps <= tol) {
            r.record_vacuous();
        } else if (min_omega > tol) {
            r.record_satisfied(min_omega - tol);
        } else {
            r.record_violation({{static_cast<double>(p), eps}, min_omega, tol, tol - min_omega,
                                "omega(s_n) -> 0 while s_n stays >= " + format_number(eps)});
        }
    }
    for (double t : continuity_points) record_continuity(r, omega.expr, t, tol);
    return r.finalize();
}

}  // namespace pbm
