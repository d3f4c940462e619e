#pragma once

#include <span>
#include <vector>

namespace mscale {

/// Finite-difference weights for the m-th derivative at z from arbitrary
/// distinct nodes (Fornberg's recursion). Returns one weight per node.
std::vector<double> fd_weights(double z, std::span<const double> nodes, int m);

/// m-th derivative of sampled data at sample k, from the `width` nearest samples
/// (shifted inward at the ends). width = 5 gives 4th order for m = 1.
double sampled_derivative(std::span<const double> s, std::span<const double> f, std::size_t k, int m = 1,
                          std::size_t width = 5);

}  // namespace mscale
