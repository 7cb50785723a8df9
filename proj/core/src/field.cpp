#include "sasaki/field.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace sasaki {

VectorFieldSpec VectorFieldSpec::parse(const ChartManifold& m, const std::vector<std::string>& components, FrameTag frame,
                                       std::string name) {
    if (components.size() != static_cast<std::size_t>(m.dim()))
        throw std::invalid_argument("vector field '" + name + "' needs " + std::to_string(m.dim()) + " components");
    if (frame == FrameTag::Orthonormal && !m.has_frame())
        throw std::invalid_argument("vector field '" + name + "' uses the orthonormal frame, but '" + m.name() + "' declares none");
    VectorFieldSpec out;
    out.name = std::move(name);
    out.frame = frame;
    for (const auto& c : components) out.components.push_back(m.parse(c));
    return out;
}

std::vector<Expr> VectorFieldSpec::natural(const ChartManifold& m) const {
    if (frame == FrameTag::Natural) return components;
    const int n = m.dim();
    std::vector<Expr> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Expr acc;
        for (int a = 0; a < n; ++a) {
            Expr term = m.frame(i, a) * components[static_cast<std::size_t>(a)];
            acc = acc.valid() ? acc + term : term;
        }
        out.push_back(acc);
    }
    return out;
}

JetVec field_jets(const ChartManifold& m, const VectorFieldSpec& xi, std::span<const double> p, int order) {
    JetVec out;
    out.reserve(xi.components.size());
    if (xi.frame == FrameTag::Natural) {
        for (const auto& c : xi.components) out.push_back(c.eval_jet(p, order, m.param_values()));
        return out;
    }
    // Evaluate in jets rather than through the expression product, which
    // keeps the frame and the coefficients separately cached.
    const int n = m.dim();
    const JetTensor e = m.frame_jets(p, order);
    JetVec c;
    for (const auto& comp : xi.components) c.push_back(comp.eval_jet(p, order, m.param_values()));
    for (int i = 0; i < n; ++i) {
        Jet acc(n, order);
        for (int a = 0; a < n; ++a) acc += e(i, a) * c[static_cast<std::size_t>(a)];
        out.push_back(std::move(acc));
    }
    return out;
}

VectorFieldSpec scaled(const Expr& f, const VectorFieldSpec& xi) {
    VectorFieldSpec out = xi;
    for (auto& c : out.components) c = f * c;
    return out;
}

VectorFieldSpec combine(double a, const VectorFieldSpec& x, double b, const VectorFieldSpec& y, const ChartManifold& m) {
    VectorFieldSpec out;
    out.frame = FrameTag::Natural;
    const auto xn = x.natural(m);
    const auto yn = y.natural(m);
    for (std::size_t i = 0; i < xn.size(); ++i) out.components.push_back(a * xn[i] + b * yn[i]);
    return out;
}

namespace {

Eigen::MatrixXd frame_matrix(const ChartManifold& m, std::span<const double> p) {
    const int n = m.dim();
    Eigen::MatrixXd e(n, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) e(i, a) = m.frame(i, a).eval(p, m.param_values());
    return e;
}

}  // namespace

Vec frame_to_natural(const ChartManifold& m, std::span<const double> p, const Vec& c) {
    const Eigen::VectorXd x = frame_matrix(m, p) * Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return Vec(x.data(), x.data() + x.size());
}

Vec natural_to_frame(const ChartManifold& m, std::span<const double> p, const Vec& x) {
    const Eigen::VectorXd c =
        frame_matrix(m, p).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
    return Vec(c.data(), c.data() + c.size());
}

}  // namespace sasaki
