#pragma once

#include <string>
#include <vector>

#include "sasaki/manifold.hpp"

namespace sasaki {

/// Names accepted by builtin_manifold.
const std::vector<std::string>& builtin_names();

/// polar-r2, hyperbolic-r4, exp-r2 or flat-r2; throws std::invalid_argument otherwise.
ChartManifold builtin_manifold(const std::string& name);

/// The textual definition behind a builtin, usable for inline configs.
struct ManifoldDefinition {
    std::string name;
    std::vector<std::string> coords;
    std::vector<Interval> domain;
    ExprTable metric;
    ExprTable structure;
    ExprTable frame;
    std::vector<std::pair<std::string, double>> params;

    ChartManifold build() const;
};

ManifoldDefinition builtin_definition(const std::string& name);

}  // namespace sasaki
