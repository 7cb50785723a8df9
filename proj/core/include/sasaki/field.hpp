#pragma once

#include <span>
#include <string>
#include <vector>

#include "sasaki/manifold.hpp"

namespace sasaki {

enum class FrameTag { Natural, Orthonormal };

/// Vector field given by component expressions, either over the coordinate
/// frame or over the chart's declared orthonormal frame e_a.
struct VectorFieldSpec {
    std::string name;
    std::vector<Expr> components;
    FrameTag frame = FrameTag::Natural;

    static VectorFieldSpec parse(const ChartManifold& m, const std::vector<std::string>& components,
                                 FrameTag frame = FrameTag::Natural, std::string name = {});

    /// Coordinate-frame components xi^i as expressions.
    std::vector<Expr> natural(const ChartManifold& m) const;
};

/// Jets of the coordinate components at p.
JetVec field_jets(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, int order);

/// f * xi, componentwise, keeping the frame tag.
VectorFieldSpec scaled(const Expr& f, const VectorFieldSpec& xi);
VectorFieldSpec combine(double a, const VectorFieldSpec& x, double b, const VectorFieldSpec& y, const ChartManifold& m);

/// Frame conversions at a point. Column a of the frame matrix is e_a.
Vec frame_to_natural(const ChartManifold& m, std::span<const double> p, const Vec& c);
Vec natural_to_frame(const ChartManifold& m, std::span<const double> p, const Vec& x);

}  // namespace sasaki
