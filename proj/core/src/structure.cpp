#include "sasaki/structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sasaki/geometry.hpp"

namespace sasaki {

bool StructureReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const StructureCheck& c) { return c.pass; });
}

const StructureCheck* StructureReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

struct Tracker {
    StructureCheck check;

    Tracker(std::string name, bool margin) {
        check.name = std::move(name);
        check.margin = margin;
        check.value = margin ? std::numeric_limits<double>::infinity() : 0.0;
    }

    void record(double v, std::span<const double> p) {
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        const bool worse = check.margin ? v < check.value : v > check.value;
        if (worse || check.worst_point.empty()) {
            if (worse) check.value = v;
            check.worst_point.assign(p.begin(), p.end());
        }
    }
};

double det(const RealTensor& a) {
    const int n = a.dim();
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(a.data().data(), n, n)
        .determinant();
}

}  // namespace

StructureReport validate_structure(const ChartManifold& m, std::span<const Vec> points, double tol) {
    const int n = m.dim();
    Tracker sq("phi_squared_identity", false);
    Tracker notid("phi_not_plus_minus_identity", true);
    Tracker tr("trace_phi", false);
    Tracker nondeg("metric_nondegenerate", true);
    Tracker norden("norden_purity", false);
    Tracker compat("metric_compatibility", false);
    Tracker parallel("parallel_structure", false);
    Tracker slots("curvature_purity_slots", false);
    Tracker left("curvature_purity_phi_left", false);
    Tracker right("curvature_purity_phi_right", false);

    for (const auto& p : points) {
        const BaseJets b = base_jets(m, p, 2, GeometryLevel::Curvature);
        const RealTensor g = values(b.geo.g);
        const RealTensor phi = values(b.phi);
        const RealTensor R = values(b.geo.riemann);

        double r_sq = 0.0, r_minus = 0.0, r_plus = 0.0, r_norden = 0.0, trace = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += phi(i, i);
            for (int j = 0; j < n; ++j) {
                double s = 0.0, gp_ij = 0.0, gp_ji = 0.0;
                for (int k = 0; k < n; ++k) {
                    s += phi(i, k) * phi(k, j);
                    gp_ij += g(i, k) * phi(k, j);
                    gp_ji += g(j, k) * phi(k, i);
                }
                const double id = i == j ? 1.0 : 0.0;
                r_sq = std::max(r_sq, std::abs(s - id));
                r_minus = std::max(r_minus, std::abs(phi(i, j) - id));
                r_plus = std::max(r_plus, std::abs(phi(i, j) + id));
                r_norden = std::max(r_norden, std::abs(gp_ij - gp_ji));
            }
        }
        sq.record(r_sq, p);
        notid.record(std::min(r_minus, r_plus), p);
        tr.record(std::abs(trace), p);
        nondeg.record(std::abs(det(g)), p);
        norden.record(r_norden, p);

        compat.record(sup_norm(values(covariant_derivative_lower2(b.geo.g, b.geo.gamma))), p);
        parallel.record(sup_norm(values(covariant_derivative(b.phi, b.geo.gamma))), p);

        // R^l_k i j with X = d_i, Y = d_j, acting on d_k.
        double r_slots = 0.0, r_left = 0.0, r_right = 0.0;
        for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double phix = 0.0, phiy = 0.0, phir = 0.0, rphi = 0.0;
                        for (int a = 0; a < n; ++a) {
                            phix += R(l, k, a, j) * phi(a, i);
                            phiy += R(l, k, i, a) * phi(a, j);
                            phir += phi(l, a) * R(a, k, i, j);
                            rphi += R(l, a, i, j) * phi(a, k);
                        }
                        r_slots = std::max(r_slots, std::abs(phix - phiy));
                        r_left = std::max(r_left, std::abs(phix - phir));
                        r_right = std::max(r_right, std::abs(rphi - phir));
                    }
        slots.record(r_slots, p);
        left.record(r_left, p);
        right.record(r_right, p);
    }

    StructureReport report;
    report.manifold = m.name();
    report.tol = tol;
    report.points = points.size();
    for (Tracker* t : {&sq, &notid, &tr, &nondeg, &norden, &compat, &parallel, &slots, &left, &right}) {
        StructureCheck c = std::move(t->check);
        c.pass = c.margin ? c.value > tol : c.value < tol;
        report.checks.push_back(std::move(c));
    }
    return report;
}

}  // namespace sasaki
