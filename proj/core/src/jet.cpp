#include "sasaki/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sasaki {

namespace {

constexpr int kMaxSpaceDim = 12;

std::uint32_t encode(std::span<const int> alpha) {
    std::uint32_t key = 0;
    for (int a : alpha) key = key * (kMaxJetOrder + 1) + static_cast<std::uint32_t>(a);
    return key;
}

void enumerate_degree(int dim, int degree, int var, std::vector<int>& current, std::vector<int>& out) {
    if (var == dim - 1) {
        current[static_cast<std::size_t>(var)] = degree;
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int a = degree; a >= 0; --a) {
        current[static_cast<std::size_t>(var)] = a;
        enumerate_degree(dim, degree - a, var + 1, current, out);
    }
}

double factorial_of(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

struct SpaceLookup {
    std::unordered_map<std::uint32_t, std::size_t> position;
};

}  // namespace

JetSpace::JetSpace(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxSpaceDim) throw std::invalid_argument("JetSpace: unsupported dimension " + std::to_string(dim));
    const auto d = static_cast<std::size_t>(dim);
    std::vector<int> current(d, 0);
    prefix_.assign(kMaxJetOrder + 1, 0);
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
        enumerate_degree(dim, deg, 0, current, indices_);
        prefix_[static_cast<std::size_t>(deg)] = indices_.size() / d;
    }
    const std::size_t n = indices_.size() / d;

    SpaceLookup lookup;
    degree_.resize(n);
    factorial_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto alpha = multi_index(k);
        int deg = 0;
        double fact = 1.0;
        for (int a : alpha) {
            deg += a;
            fact *= factorial_of(a);
        }
        degree_[k] = deg;
        factorial_[k] = fact;
        lookup.position.emplace(encode(alpha), k);
    }

    raise_.assign(n * d, npos);
    std::vector<int> work(d);
    for (std::size_t k = 0; k < n; ++k) {
        if (degree_[k] == kMaxJetOrder) continue;
        auto alpha = multi_index(k);
        for (std::size_t v = 0; v < d; ++v) {
            std::copy(alpha.begin(), alpha.end(), work.begin());
            ++work[v];
            raise_[k * d + v] = lookup.position.at(encode(work));
        }
    }

    // Product table grouped by output degree so that an order-K product reads a prefix.
    std::vector<std::vector<ProductTerm>> by_degree(kMaxJetOrder + 1);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const int deg = degree_[a] + degree_[b];
            if (deg > kMaxJetOrder) continue;
            auto aa = multi_index(a);
            auto bb = multi_index(b);
            for (std::size_t v = 0; v < d; ++v) work[v] = aa[v] + bb[v];
            const std::size_t c = lookup.position.at(encode(work));
            by_degree[static_cast<std::size_t>(deg)].push_back(
                {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)});
        }
    }
    terms_prefix_.assign(kMaxJetOrder + 1, 0);
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
        auto& bucket = by_degree[static_cast<std::size_t>(deg)];
        terms_.insert(terms_.end(), bucket.begin(), bucket.end());
        terms_prefix_[static_cast<std::size_t>(deg)] = terms_.size();
    }
}

const JetSpace& JetSpace::get(int dim) {
    static std::array<std::unique_ptr<JetSpace>, kMaxSpaceDim + 1> spaces;
    static std::array<std::once_flag, kMaxSpaceDim + 1> flags;
    if (dim < 1 || dim > kMaxSpaceDim) throw std::invalid_argument("JetSpace: unsupported dimension " + std::to_string(dim));
    const auto d = static_cast<std::size_t>(dim);
    std::call_once(flags[d], [&] { spaces[d] = std::make_unique<JetSpace>(dim); });
    return *spaces[d];
}

std::span<const int> JetSpace::multi_index(std::size_t k) const {
    const auto d = static_cast<std::size_t>(dim_);
    return {indices_.data() + k * d, d};
}

std::size_t JetSpace::index_of(std::span<const int> alpha) const {
    if (alpha.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("JetSpace::index_of: wrong multi-index length");
    int deg = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("JetSpace::index_of: negative exponent");
        deg += a;
    }
    if (deg > kMaxJetOrder) return npos;
    // Walk the graded-lex layout: linear scan over the degree block is short.
    const std::size_t begin = deg == 0 ? 0 : prefix_[static_cast<std::size_t>(deg - 1)];
    const std::size_t end = prefix_[static_cast<std::size_t>(deg)];
    for (std::size_t k = begin; k < end; ++k) {
        auto m = multi_index(k);
        if (std::equal(m.begin(), m.end(), alpha.begin())) return k;
    }
    return npos;
}

std::span<const JetSpace::ProductTerm> JetSpace::product_terms(int order) const {
    return {terms_.data(), terms_prefix_[static_cast<std::size_t>(order)]};
}

// ---------------------------------------------------------------------------

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
    if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("Jet: order out of range");
    coeffs_.assign(JetSpace::get(dim).size(order), 0.0);
}

Jet Jet::constant(int dim, int order, double value) {
    Jet j(dim, order);
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(int dim, int order, int var, double at) {
    Jet j(dim, order);
    j.coeffs_[0] = at;
    if (order >= 1) j.coeffs_[1 + static_cast<std::size_t>(var)] = 1.0;
    return j;
}

double Jet::coeff(std::span<const int> alpha) const {
    const std::size_t k = space().index_of(alpha);
    if (k == JetSpace::npos || k >= coeffs_.size()) return 0.0;
    return coeffs_[k];
}

double Jet::derivative(std::span<const int> alpha) const {
    const std::size_t k = space().index_of(alpha);
    if (k == JetSpace::npos || k >= coeffs_.size())
        throw std::out_of_range("Jet::derivative: multi-index beyond jet order");
    return coeffs_[k] * space().factorial(k);
}

Jet Jet::truncated(int order) const {
    if (order > order_) throw std::invalid_argument("Jet::truncated: cannot raise order");
    Jet j = *this;
    j.order_ = order;
    j.coeffs_.resize(space().size(order));
    return j;
}

Jet Jet::partial(int var) const {
    if (order_ == 0) throw std::invalid_argument("Jet::partial: order-0 jet has no derivatives");
    const JetSpace& s = space();
    Jet out(dim_, order_ - 1);
    const int v = var;
    for (std::size_t k = 0; k < out.coeffs_.size(); ++k) {
        const std::size_t up = s.raise(k, v);
        const double power = s.multi_index(k)[static_cast<std::size_t>(v)] + 1;
        out.coeffs_[k] = power * coeffs_[up];
    }
    return out;
}

Jet Jet::compose(std::span<const double> derivs) const {
    if (derivs.size() < static_cast<std::size_t>(order_ + 1)) throw std::invalid_argument("Jet::compose: too few derivatives");
    Jet h = *this;
    h.coeffs_[0] = 0.0;
    Jet out = Jet::constant(dim_, order_, derivs[0]);
    if (order_ == 0) return out;
    Jet power = h;
    double kfact = 1.0;
    for (int k = 1; k <= order_; ++k) {
        kfact *= k;
        const double scale = derivs[static_cast<std::size_t>(k)] / kfact;
        for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += scale * power.coeffs_[i];
        if (k < order_) power *= h;
    }
    return out;
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Jet: dimension mismatch");
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(*this, o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(*this, o);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

Jet& Jet::operator+=(double s) {
    coeffs_[0] += s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
    check_compatible(a, b);
    const int order = std::min(a.order(), b.order());
    Jet out(a.dim(), order);
    auto oc = out.coeffs();
    auto ac = a.coeffs();
    auto bc = b.coeffs();
    for (const auto& t : a.space().product_terms(order)) oc[t.out] += ac[t.lhs] * bc[t.rhs];
    return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a += -s; }
Jet operator-(double s, const Jet& a) { return (-a) + s; }

namespace {

using Derivs = std::array<double, kMaxJetOrder + 1>;

}  // namespace

Jet reciprocal(const Jet& a) {
    const double x = a.value();
    if (x == 0.0) throw std::domain_error("division by zero");
    Derivs d{};
    double f = 1.0 / x;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        d[static_cast<std::size_t>(k)] = f;
        f *= -(k + 1) / x;
    }
    return a.compose(d);
}

Jet exp(const Jet& a) {
    Derivs d;
    d.fill(std::exp(a.value()));
    return a.compose(d);
}

Jet log(const Jet& a) {
    const double x = a.value();
    if (!(x > 0.0)) throw std::domain_error("ln of non-positive value");
    Derivs d{};
    d[0] = std::log(x);
    double f = 1.0 / x;
    for (int k = 1; k <= kMaxJetOrder; ++k) {
        d[static_cast<std::size_t>(k)] = f;
        f *= -k / x;
    }
    return a.compose(d);
}

Jet sin(const Jet& a) {
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const Derivs d{s, c, -s, -c, s};
    return a.compose(d);
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const Derivs d{c, -s, -c, s, c};
    return a.compose(d);
}

Jet tan(const Jet& a) {
    if (std::cos(a.value()) == 0.0) throw std::domain_error("tan at a pole");
    return sin(a) / cos(a);
}

Jet sinh(const Jet& a) {
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const Derivs d{s, c, s, c, s};
    return a.compose(d);
}

Jet cosh(const Jet& a) {
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const Derivs d{c, s, c, s, c};
    return a.compose(d);
}

Jet sech(const Jet& a) { return reciprocal(cosh(a)); }

Jet sqrt(const Jet& a) {
    const double x = a.value();
    if (x < 0.0) throw std::domain_error("sqrt of negative value");
    if (x == 0.0) {
        if (a.order() > 0) throw std::domain_error("sqrt is not differentiable at zero");
        return Jet::constant(a.dim(), 0, 0.0);
    }
    return pow(a, 0.5);
}

Jet pow(const Jet& a, int n) {
    if (n < 0) return reciprocal(pow(a, -n));
    Jet result = Jet::constant(a.dim(), a.order(), 1.0);
    Jet base = a;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

Jet pow(const Jet& a, double e) {
    const double x = a.value();
    if (!(x > 0.0)) throw std::domain_error("real power of non-positive value");
    Derivs d{};
    double coef = 1.0;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        d[static_cast<std::size_t>(k)] = coef * std::pow(x, e - k);
        coef *= (e - k);
    }
    return a.compose(d);
}

std::vector<double> serialize(const Jet& j) {
    return {j.coeffs().begin(), j.coeffs().end()};
}

Jet embed(const Jet& j, int new_dim, int offset) {
    if (offset < 0 || offset + j.dim() > new_dim) throw std::invalid_argument("embed: variables out of range");
    Jet out(new_dim, j.order());
    const JetSpace& from = j.space();
    const JetSpace& to = out.space();
    std::vector<int> alpha(static_cast<std::size_t>(new_dim), 0);
    for (std::size_t k = 0; k < from.size(j.order()); ++k) {
        const auto a = from.multi_index(k);
        std::fill(alpha.begin(), alpha.end(), 0);
        for (int i = 0; i < j.dim(); ++i) alpha[static_cast<std::size_t>(offset + i)] = a[static_cast<std::size_t>(i)];
        out.coeffs()[to.index_of(alpha)] = j.coeff(k);
    }
    return out;
}

Substitution::Substitution(std::span<const Jet> inner, int outer_order)
    : outer_dim_(static_cast<int>(inner.size())), order_(outer_order) {
    if (inner.empty()) throw std::invalid_argument("Substitution: no inner jets");
    const int dim = inner[0].dim();
    int inner_order = kMaxJetOrder;
    for (const auto& j : inner) {
        if (j.dim() != dim) throw std::invalid_argument("Substitution: inner jets differ in dimension");
        inner_order = std::min(inner_order, j.order());
    }
    order_ = std::min(outer_order, inner_order);
    std::vector<Jet> delta;
    for (const auto& j : inner) {
        Jet d = j.truncated(order_);
        d.coeffs()[0] = 0.0;
        delta.push_back(std::move(d));
    }
    const JetSpace& outer = JetSpace::get(outer_dim_);
    const std::size_t count = outer.size(order_);
    monomials_.reserve(count);
    monomials_.push_back(Jet::constant(dim, order_, 1.0));
    std::vector<int> parent(static_cast<std::size_t>(outer_dim_));
    for (std::size_t k = 1; k < count; ++k) {
        const auto alpha = outer.multi_index(k);
        int v = 0;
        while (alpha[static_cast<std::size_t>(v)] == 0) ++v;
        std::copy(alpha.begin(), alpha.end(), parent.begin());
        --parent[static_cast<std::size_t>(v)];
        // Graded order puts the parent earlier, so its monomial already exists.
        monomials_.push_back(monomials_[outer.index_of(parent)] * delta[static_cast<std::size_t>(v)]);
    }
}

Jet Substitution::apply(const Jet& outer) const {
    if (outer.dim() != outer_dim_) throw std::invalid_argument("Substitution: outer jet has wrong dimension");
    const int order = std::min(order_, outer.order());
    Jet out(monomials_[0].dim(), order);
    const std::size_t count = outer.space().size(order);
    for (std::size_t k = 0; k < count; ++k) {
        const double c = outer.coeff(k);
        if (c != 0.0) out += monomials_[k] * c;
    }
    return out;
}

}  // namespace sasaki
