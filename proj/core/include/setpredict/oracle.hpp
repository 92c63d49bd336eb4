#pragma once

#include <functional>
#include <span>
#include <vector>

#include "setpredict/inference.hpp"
#include "setpredict/network.hpp"
#include "setpredict/set_model.hpp"

namespace setpredict {
namespace oracle {

// Deliberately naive reference implementations. They share the model
// definition (set_log_density) with the rest of the library but none of the
// decoding or differentiation shortcuts, so agreement tests exercise those
// paths end to end.

// Maximises set_log_density by enumerating all 2^M subsets in bitmask
// counting order. Tie rule re-implemented from scratch: higher score, then
// smaller cardinality, then lexicographically smaller sorted index
// sequence. Refuses M > 20.
MapResult brute_force_map(const DualOutput& out, const CardinalityStats& stats,
                          HyperVolumeUnit u);

// Central differences (f(x + h e_j) - f(x - h e_j)) / (2h) per coordinate.
// Throws if any probe evaluates to NaN.
std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> point, double step);

// Total mass sum over all subsets of exp(set_log_density). Diagnostic only;
// the per-label product does not normalise over subsets so this need not be 1.
double enumerate_set_mass(const DualOutput& out, const CardinalityStats& stats,
                          HyperVolumeUnit u);

}  // namespace oracle
}  // namespace setpredict
