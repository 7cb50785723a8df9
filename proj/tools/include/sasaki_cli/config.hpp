#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sasaki/builtins.hpp"
#include "sasaki/field.hpp"
#include "sasaki/manifold.hpp"

namespace sasaki::cli {

/// Bad config: unreadable file, YAML syntax, unknown key, unresolved name or
/// an expression that does not parse. line/column are 1-based, 0 if unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& file, int line, int column, const std::string& message);
    const std::string& file() const { return file_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string file_;
    int line_;
    int column_;
};

struct FieldConfig {
    std::string name;
    FrameTag frame = FrameTag::Natural;
    std::vector<std::string> components;
    /// Expected classification flags, e.g. {biharmonic_vf, true}; checked by classify.
    std::vector<std::pair<std::string, bool>> expect;
};

/// Sample points: a cell-centred grid and/or uniform random points over `box`
/// (default: the manifold's domain), plus explicit points.
struct SampleConfig {
    int grid = 0;
    int random = 0;
    std::vector<Interval> box;
    std::vector<Vec> points;
};

struct VariationConfig {
    std::string field;
    FieldConfig direction;
    std::string bump;  // empty: default bump over box
    std::vector<Interval> box;
    std::vector<double> steps{1e-2, 2e-2};
};

struct RunConfig {
    std::string source;
    std::string manifold_ref;  // builtin name, or empty for an inline definition
    ManifoldDefinition manifold;
    std::vector<FieldConfig> fields;
    double delta1 = 0.0;
    double delta2 = 1.0;
    SampleConfig samples;
    double tol = 1e-8;
    int quadrature_points = 16;
    std::vector<Interval> quadrature_box;
    std::optional<VariationConfig> variation;
    int bundle_points = 20;
    int example_grid = 0;  // 0: per-example default
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Builtin manifold, a 5-per-axis grid and no fields.
RunConfig default_config(const std::string& builtin);

ChartManifold build_manifold(const RunConfig& cfg);
VectorFieldSpec build_field(const ChartManifold& m, const FieldConfig& f);
std::vector<Vec> sample_points(const RunConfig& cfg, const ChartManifold& m, std::uint64_t seed);

/// Inline YAML for a manifold definition, as accepted under `manifold:`.
std::string manifold_yaml(const ManifoldDefinition& def);

}  // namespace sasaki::cli
