#include "sasaki/builtins.hpp"

#include <stdexcept>

namespace sasaki {

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"polar-r2", "hyperbolic-r4", "exp-r2", "flat-r2"};
    return names;
}

ChartManifold ManifoldDefinition::build() const {
    return ChartManifold(name, coords, domain, metric, structure, params, frame);
}

ManifoldDefinition builtin_definition(const std::string& name) {
    ManifoldDefinition d;
    d.name = name;
    if (name == "polar-r2") {
        d.coords = {"r", "theta"};
        d.domain = {{0.3, 3.0}, {0.1, 1.4}};
        d.metric = {{"1", "0"}, {"0", "r^2"}};
        d.structure = {{"sin(2*theta)", "r*cos(2*theta)"}, {"cos(2*theta)/r", "-sin(2*theta)"}};
        d.frame = {{"1", "0"}, {"0", "1/r"}};
    } else if (name == "hyperbolic-r4") {
        d.coords = {"x", "y", "z", "t"};
        d.domain = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
        d.metric = {{"1", "0", "0", "0"}, {"0", "exp(-2*x)", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "exp(-2*z)"}};
        d.structure = {{"1", "0", "0", "0"}, {"0", "1", "0", "0"}, {"0", "0", "-1", "0"}, {"0", "0", "0", "-1"}};
        d.frame = {{"1", "0", "0", "0"}, {"0", "exp(x)", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "exp(z)"}};
    } else if (name == "exp-r2") {
        d.coords = {"x", "y"};
        d.domain = {{0.0, 1.0}, {0.0, 1.0}};
        d.metric = {{"exp(2*x)", "0"}, {"0", "exp(2*y)"}};
        d.structure = {{"0", "exp(y-x)"}, {"exp(x-y)", "0"}};
        d.frame = {{"exp(-x)", "0"}, {"0", "exp(-y)"}};
    } else if (name == "flat-r2") {
        d.coords = {"x", "y"};
        d.domain = {{0.0, 1.0}, {0.0, 1.0}};
        d.metric = {{"1", "0"}, {"0", "1"}};
        d.structure = {{"0", "1"}, {"1", "0"}};
        d.frame = {{"1", "0"}, {"0", "1"}};
    } else {
        throw std::invalid_argument("unknown builtin manifold '" + name + "'");
    }
    return d;
}

ChartManifold builtin_manifold(const std::string& name) { return builtin_definition(name).build(); }

}  // namespace sasaki
