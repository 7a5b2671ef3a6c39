#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "pbm/expr.hpp"
#include "pbm/report.hpp"
#include "pbm/tolerance.hpp"

namespace pbm {

/// Altering distance: continuous, nondecreasing, zero exactly at 0.
struct XiFunction {
    Expression expr;
};

/// Continuous ω with ω(s_n) -> 0 implying s_n -> 0.
struct OmegaOneFunction {
    Expression expr;
};

/// Class Ω (ω(s_n) -> inf implying s_n -> 0). Carried as a declaration only;
/// there is no checker for it.
struct OmegaFunction {
    Expression expr;
};

enum class CClassPreset { half_t, truncated_difference, custom };

/// H(t, z) <= t, with H(t, z) = t only when t = 0 or z = 0.
struct CClassFunction {
    Expression expr;
    CClassPreset preset = CClassPreset::custom;
};

XiFunction xi_identity();
CClassFunction make_cclass(CClassPreset preset);
/// "half-t" or "truncated-difference"; throws Error(unknown_preset).
CClassFunction cclass_from_name(std::string_view name);
std::string_view to_string(CClassPreset p) noexcept;

std::vector<double> default_xi_samples();
std::vector<std::pair<double, double>> default_cclass_pairs();
/// Constants {10 tol, 0.5, 1, 10}, 1 + 1/n, 1/n and 2^-n, each 32 terms long.
std::vector<std::vector<double>> default_omega_probes(double tol = kDefaultTol);

/// Shrinking-increment test at t: |f(t ± h) - f(t)| for h halving six times
/// must not grow and must shrink below half its first value (or below tol).
/// The left side is skipped when t - h < 0.
bool continuity_heuristic(const Expression& f, double t, double tol);

/// samples must be sorted ascending and contain 0.
ComplianceReport check_xi(const XiFunction& xi, std::span<const double> samples, double tol = kDefaultTol);

ComplianceReport check_cclass(const CClassFunction& h, std::span<const std::pair<double, double>> pairs,
                              double tol = kDefaultTol);

/// Each probe needs at least 16 terms. Probes whose second half stays above
/// tol must keep ω above tol there; vanishing probes are vacuous.
ComplianceReport check_omega1(const OmegaOneFunction& omega, const std::vector<std::vector<double>>& probes,
                              double tol = kDefaultTol);

}  // namespace pbm
