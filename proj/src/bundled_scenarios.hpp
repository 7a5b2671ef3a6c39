#pragma once

#include <array>
#include <string_view>

namespace pbm::detail {

struct BundledScenario {
    std::string_view name;
    std::string_view text;
};

// Defined in a source generated from scenarios/*.scn at configure time.
extern const std::array<BundledScenario, 4> kBundledScenarios;

}  // namespace pbm::detail
