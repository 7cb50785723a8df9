#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sasaki/expr.hpp"
#include "sasaki/tensor.hpp"

namespace sasaki {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

using ExprTable = std::vector<std::vector<std::string>>;

/// One coordinate chart of an even-dimensional manifold carrying a metric
/// g_ij and a (1,1) structure phi^i_j, all given as expressions.
///
/// The metric is read from the upper triangle; a lower triangle that parses
/// to a different expression is rejected. An optional orthonormal frame is a
/// table whose column a holds the coordinate components of e_a; it is used
/// only for reporting and for frame-tagged vector fields.
class ChartManifold {
public:
    ChartManifold(std::string name, std::vector<std::string> coords, std::vector<Interval> domain,
                  const ExprTable& metric, const ExprTable& structure,
                  std::vector<std::pair<std::string, double>> params = {}, const ExprTable& frame = {});

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<Interval>& domain() const { return domain_; }
    const std::vector<std::string>& param_names() const { return param_names_; }
    const std::vector<double>& param_values() const { return param_values_; }

    const Expr& metric(int i, int j) const;
    const Expr& structure(int i, int j) const { return structure_[index(i, j)]; }
    bool has_frame() const { return !frame_.empty(); }
    /// Coordinate component i of frame vector e_a.
    const Expr& frame(int i, int a) const { return frame_[index(i, a)]; }

    /// Parses text over this chart's coordinates and parameters.
    Expr parse(std::string_view text) const;

    JetTensor metric_jets(std::span<const double> p, int order) const;
    JetTensor structure_jets(std::span<const double> p, int order) const;
    JetTensor frame_jets(std::span<const double> p, int order) const;

    bool contains(std::span<const double> p) const;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * dim() + j); }

    std::string name_;
    std::vector<std::string> coords_;
    std::vector<Interval> domain_;
    std::vector<std::string> param_names_;
    std::vector<double> param_values_;
    std::vector<Expr> metric_;  // full table, lower mirrored from upper
    std::vector<Expr> structure_;
    std::vector<Expr> frame_;
};

}  // namespace sasaki
