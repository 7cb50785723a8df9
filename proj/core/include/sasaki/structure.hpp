#pragma once

#include <span>
#include <string>
#include <vector>

#include "sasaki/manifold.hpp"

namespace sasaki {

/// One axiom check over a sample. For ordinary checks `value` is the largest
/// residual and the check passes when it stays below tol. Margin checks
/// (phi != +-I, det g != 0) report the smallest margin and pass when it
/// exceeds tol.
struct StructureCheck {
    std::string name;
    double value = 0.0;
    Vec worst_point;
    bool margin = false;
    bool pass = true;
};

struct StructureReport {
    std::string manifold;
    double tol = 0.0;
    std::size_t points = 0;
    std::vector<StructureCheck> checks;

    bool all_pass() const;
    const StructureCheck* find(const std::string& name) const;
};

/// Para-Kaehler-Norden axioms on a point sample:
///   phi_squared_identity        |phi^2 - I|
///   phi_not_plus_minus_identity min(|phi - I|, |phi + I|)   (margin)
///   trace_phi                   |tr phi|
///   metric_nondegenerate        |det g|                     (margin)
///   norden_purity               |g phi - (g phi)^T|
///   metric_compatibility        |nabla g|
///   parallel_structure          |nabla phi|
///   curvature_purity_slots      |R(phi X, Y) - R(X, phi Y)|
///   curvature_purity_phi_left   |R(phi X, Y) - phi R(X, Y)|
///   curvature_purity_phi_right  |R(X, Y) phi - phi R(X, Y)|
/// All norms are coordinate sup-norms over components.
StructureReport validate_structure(const ChartManifold& m, std::span<const Vec> points, double tol);

}  // namespace sasaki
