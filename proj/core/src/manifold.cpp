#include "sasaki/manifold.hpp"

#include <stdexcept>

namespace sasaki {

namespace {

void check_square(const ExprTable& t, std::size_t n, const char* what) {
    if (t.size() != n) throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " rows");
    for (const auto& row : t)
        if (row.size() != n) throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " columns");
}

}  // namespace

ChartManifold::ChartManifold(std::string name, std::vector<std::string> coords, std::vector<Interval> domain,
                             const ExprTable& metric, const ExprTable& structure,
                             std::vector<std::pair<std::string, double>> params, const ExprTable& frame)
    : name_(std::move(name)), coords_(std::move(coords)), domain_(std::move(domain)) {
    const std::size_t n = coords_.size();
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("ChartManifold: dimension must be even and positive");
    if (domain_.size() != n) throw std::invalid_argument("ChartManifold: domain needs one interval per coordinate");
    for (const auto& iv : domain_)
        if (!(iv.lo < iv.hi)) throw std::invalid_argument("ChartManifold: empty domain interval");
    for (auto& [pname, value] : params) {
        param_names_.push_back(pname);
        param_values_.push_back(value);
    }
    check_square(metric, n, "metric");
    check_square(structure, n, "structure");

    metric_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Expr e = parse(metric[i][j]);
            if (j != i && !metric[j][i].empty()) {
                Expr lower = parse(metric[j][i]);
                if (lower.to_string() != e.to_string())
                    throw std::invalid_argument("metric is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            metric_[i * n + j] = e;
            metric_[j * n + i] = e;
        }
    }
    structure_.reserve(n * n);
    for (const auto& row : structure)
        for (const auto& text : row) structure_.push_back(parse(text));
    if (!frame.empty()) {
        check_square(frame, n, "frame");
        frame_.reserve(n * n);
        for (const auto& row : frame)
            for (const auto& text : row) frame_.push_back(parse(text));
    }
}

const Expr& ChartManifold::metric(int i, int j) const { return metric_[index(i, j)]; }

Expr ChartManifold::parse(std::string_view text) const { return parse_expr(text, coords_, param_names_); }

namespace {

JetTensor eval_table(const std::vector<Expr>& table, int dim, std::span<const double> p, int order,
                     std::span<const double> params) {
    JetTensor out(dim, 2);
    for (std::size_t k = 0; k < table.size(); ++k) out.flat(k) = table[k].eval_jet(p, order, params);
    return out;
}

}  // namespace

JetTensor ChartManifold::metric_jets(std::span<const double> p, int order) const {
    return eval_table(metric_, dim(), p, order, param_values_);
}

JetTensor ChartManifold::structure_jets(std::span<const double> p, int order) const {
    return eval_table(structure_, dim(), p, order, param_values_);
}

JetTensor ChartManifold::frame_jets(std::span<const double> p, int order) const {
    if (!has_frame()) throw std::logic_error("ChartManifold '" + name_ + "' declares no orthonormal frame");
    return eval_table(frame_, dim(), p, order, param_values_);
}

bool ChartManifold::contains(std::span<const double> p) const {
    if (p.size() != domain_.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < domain_[i].lo || p[i] > domain_[i].hi) return false;
    return true;
}

}  // namespace sasaki
