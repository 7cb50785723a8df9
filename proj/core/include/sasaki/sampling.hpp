#pragma once

#include <cstdint>
#include <vector>

#include "sasaki/manifold.hpp"

namespace sasaki {

/// Cell-centred grid with `per_axis` points along each coordinate of the box.
std::vector<Vec> grid_points(const std::vector<Interval>& box, int per_axis);

/// Uniform points in the box, reproducible for a given seed.
std::vector<Vec> random_points(const std::vector<Interval>& box, int count, std::uint64_t seed);

/// Shrinks every interval towards its centre by `fraction` of its width on each side.
std::vector<Interval> inset(const std::vector<Interval>& box, double fraction);

}  // namespace sasaki
