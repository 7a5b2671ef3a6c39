#pragma once

#include <string>
#include <string_view>

#include "pbm/contraction.hpp"
#include "pbm/scenario_file.hpp"

namespace pbm::test {

inline ScenarioFile bundled_file(std::string_view name) { return load_scenario(*bundled_scenario(name), std::string(name)); }

inline Scenario bundled(std::string_view name) { return bundled_file(name).scenario; }

inline Toolkit default_toolkit() {
    return {xi_identity(), {Expression::parse("log(u + 3)", 1)}, make_cclass(CClassPreset::half_t)};
}

/// One map for all four roles, gate always open.
inline Scenario uniform_scenario(std::string_view map, std::string_view distance = "abs(x - y)",
                                 std::string_view carrier = "[0, inf)") {
    const auto f = Expression::parse(map, 1);
    return Scenario{"uniform",
                    PartialBMetricSpace(Carrier::parse(carrier), Expression::parse(distance, 2), 1.0),
                    f,
                    f,
                    f,
                    f,
                    Expression::parse("1", 1),
                    Expression::parse("1", 1),
                    default_toolkit(),
                    {},
                    std::nullopt,
                    std::nullopt};
}

}  // namespace pbm::test
