#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbm/expr.hpp"
#include "pbm/function_classes.hpp"
#include "pbm/preimage.hpp"
#include "pbm/report.hpp"
#include "pbm/space.hpp"
#include "pbm/tolerance.hpp"

namespace pbm {

enum class MapId { h, eta, Q, Z };

std::string_view to_string(MapId id) noexcept;
/// "h", "eta", "Q", "Z"; throws Error(invalid_argument).
MapId map_id_from_name(std::string_view name);

struct Toolkit {
    XiFunction xi;
    OmegaOneFunction omega;
    CClassFunction H;
};

/// Four self-maps of a partial b-metric space together with the admissibility
/// pair (gamma, delta) and the (xi, omega, H) toolkit.
struct Scenario {
    std::string name;
    PartialBMetricSpace space;
    Expression h, eta, Q, Z;
    Expression gamma, delta;
    Toolkit toolkit;
    std::vector<MapId> declared_closed_ranges;
    std::optional<Expression> inverse_Q, inverse_Z;

    const Expression& map(MapId id) const;
};

/// max{pd(Qw, Zz), pd(hw, Qw), pd(Zz, ηz), (pd(Qw, ηz) + pd(hw, Zz)) / 2s}
double n_s(const Scenario& sc, double w, double z);

/// gamma(Qw) * delta(Zz) >= 1, compared exactly.
bool gate(const Scenario& sc, double w, double z);

struct PairVerdict {
    enum class Kind { vacuous, satisfied, violated };
    Kind kind = Kind::vacuous;
    double lhs = 0.0;  ///< xi(s^3 pd(hw, ηz))
    double rhs = 0.0;  ///< H(xi(N_s), omega(N_s))
    double margin = 0.0;
};

/// The contraction inequality at one pair; vacuous when the gate is closed.
PairVerdict check_tac_at(const Scenario& sc, double w, double z, double tol = kDefaultTol);

struct GridSpec {
    double lo = 0.0;
    double hi = 100.0;
    double step = 0.5;

    /// "lo:hi:step"; throws Error(invalid_argument).
    static GridSpec parse(std::string_view text);
    std::string to_string() const;
    std::vector<double> points() const;
};

/// Sorted, unique (w, z) axes; the check runs over their product.
struct PairGrid {
    std::vector<double> w_axis;
    std::vector<double> z_axis;
    std::size_t size() const noexcept { return w_axis.size() * z_axis.size(); }
};

/// Piecewise endpoints of every map and admissibility function, plus the
/// preimages of the gamma/delta endpoints under Q, Z, eta and h, and the
/// nearest doubles on both sides of each. Only carrier points are kept.
std::vector<double> scenario_breakpoints(const Scenario& sc);

/// Lattice from `box` plus the given breakpoints inside the box, restricted
/// to the carrier. Same axis for w and z.
PairGrid build_pair_grid(const Scenario& sc, const GridSpec& box, std::span<const double> breakpoints);

struct GridCheckOptions {
    double tol = kDefaultTol;
    std::size_t witness_cap = 32;
    unsigned workers = 1;
};

/// Throws Error(empty_grid).
ComplianceReport verify_tac_grid(const Scenario& sc, const PairGrid& grid, const GridCheckOptions& opts = {});

/// gamma(Qw) >= 1 => delta(hw) >= 1 and delta(Zw) >= 1 => gamma(ηw) >= 1, per sample.
/// Thresholds are exact, like the gate.
ComplianceReport check_cyclic_admissible(const Scenario& sc, std::span<const double> samples);

/// hO ⊆ ZO and ηO ⊆ QO, sampled: every h(w) must have a Z-preimage and every
/// η(w) a Q-preimage in the carrier.
ComplianceReport check_range_inclusion(const Scenario& sc, std::span<const double> samples,
                                       const PreimageOptions& opts = {});

/// All four maps send the samples into the carrier.
ComplianceReport check_self_maps(const Scenario& sc, std::span<const double> samples,
                                 double membership_tol = kDefaultTol);

/// Some candidate v0 has gamma(Qv0) >= 1 and delta(Zv0) >= 1. When none does
/// the report is vacuous with a detail note rather than failed, matching an
/// identically closed gate, which leaves the contraction vacuous too.
ComplianceReport check_initial_gate(const Scenario& sc, std::span<const double> candidates);

/// Sequences b ± 2^-n (n = 1..40) approaching each gamma/delta breakpoint b
/// from inside {gamma >= 1} ∩ {delta >= 1} must have their limit in that set.
ComplianceReport check_superlevel_closure(const Scenario& sc);

/// At least one range is declared partially b-closed; for each declared range,
/// limits of f(b ± 2^-n) at the map's breakpoints must have a preimage.
ComplianceReport check_closed_ranges(const Scenario& sc, const PreimageOptions& opts = {});

/// Cyclic preset: carrier C ∪ D, Q = Z = identity, gamma = 1_C, delta = 1_D.
/// Throws Error(empty_intersection) when C ∩ D is empty.
Scenario make_cyclic_preset(const IntervalSet& C, const IntervalSet& D, Expression h, Expression eta,
                            Expression distance, double s_coeff, Toolkit toolkit, std::string name = "cyclic");

struct WeakContractionToolkit {
    Toolkit toolkit;
    Expression gamma;  ///< identically 1
    Expression delta;  ///< identically 1
};

/// H(t, v) = t - v for t >= v, 0 otherwise, with gamma = delta = 1.
WeakContractionToolkit make_weak_contraction_preset(XiFunction xi, OmegaOneFunction omega);

}  // namespace pbm
