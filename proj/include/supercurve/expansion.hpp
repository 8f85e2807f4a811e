#pragma once

#include "supercurve/chart.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace supercurve {

// Derivative along one odd fiber direction, acting on tuples (columns) of
// chart functions.  Must be an odd operator; pairwise supercommuting with
// the other fiber derivatives on the elements it is applied to.
using FiberDerivative =
    std::function<std::vector<ChartFunction>(const std::vector<ChartFunction>&)>;

// Expansion A = sum_mu A_mu theta^mu with components written to the LEFT of
// the ascending odd word theta^mu and killed by every fiber derivative.
struct OddExpansion {
    std::vector<std::string> fiber;  // odd coordinate names, bit i = fiber[i]
    std::map<std::uint32_t, std::vector<ChartFunction>> components;
};

OddExpansion expand_odd(const std::vector<ChartFunction>& a,
                        const std::vector<std::string>& fiber,
                        const std::vector<FiberDerivative>& nabla);

std::vector<ChartFunction> reassemble(const OddExpansion& e);

} // namespace supercurve
