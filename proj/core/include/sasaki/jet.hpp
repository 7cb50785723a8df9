#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sasaki {

/// Highest total derivative order a Jet can carry.
inline constexpr int kMaxJetOrder = 4;

/// Multi-index bookkeeping for jets in `dim` variables.
///
/// Multi-indices with |alpha| <= kMaxJetOrder are enumerated in graded
/// lexicographic order: by total degree first, then lexicographically with
/// larger leading exponents first. Because the ordering is graded, the
/// coefficients of an order-K jet are a prefix of the order-4 layout, so a
/// single space per dimension serves every order.
class JetSpace {
public:
    struct ProductTerm {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Shared, lazily built space for `dim` variables (1 <= dim <= 12).
    static const JetSpace& get(int dim);

    int dim() const { return dim_; }

    /// Number of multi-indices with total degree <= order.
    std::size_t size(int order) const { return prefix_[static_cast<std::size_t>(order)]; }

    std::span<const int> multi_index(std::size_t k) const;
    int degree(std::size_t k) const { return degree_[k]; }

    /// alpha! = prod alpha_i!
    double factorial(std::size_t k) const { return factorial_[k]; }

    /// Position of alpha; npos if |alpha| exceeds kMaxJetOrder.
    std::size_t index_of(std::span<const int> alpha) const;

    /// Position of alpha + e_var; npos when that exceeds kMaxJetOrder.
    std::size_t raise(std::size_t k, int var) const { return raise_[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(var)]; }

    /// All (a, b, c) with alpha_a + alpha_b = alpha_c and |alpha_c| <= order.
    std::span<const ProductTerm> product_terms(int order) const;

    explicit JetSpace(int dim);

private:
    int dim_;
    std::vector<int> indices_;  // flattened multi-indices, dim_ ints each
    std::vector<int> degree_;
    std::vector<double> factorial_;
    std::vector<std::size_t> prefix_;
    std::vector<std::size_t> raise_;
    std::vector<ProductTerm> terms_;
    std::vector<std::size_t> terms_prefix_;
};

/// Truncated multivariate Taylor expansion of a scalar at a point.
///
/// coeff(alpha) holds d^alpha f(p) / alpha!. Binary operations between jets of
/// different orders truncate to the smaller order; dimensions must agree.
class Jet {
public:
    Jet() = default;
    Jet(int dim, int order);

    static Jet constant(int dim, int order, double value);
    /// The coordinate function x_var expanded at x_var = at.
    static Jet variable(int dim, int order, int var, double at);

    int dim() const { return dim_; }
    int order() const { return order_; }
    bool empty() const { return dim_ == 0; }
    double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    double coeff(std::size_t k) const { return coeffs_[k]; }
    double coeff(std::span<const int> alpha) const;
    /// Partial derivative d^alpha f(p), i.e. coeff(alpha) * alpha!.
    double derivative(std::span<const int> alpha) const;

    Jet truncated(int order) const;
    /// d/dx_var as a jet of one lower order.
    Jet partial(int var) const;
    /// Univariate composition g(f) given g^(k)(f(p)) for k = 0..order.
    Jet compose(std::span<const double> derivs) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s);

    const JetSpace& space() const { return JetSpace::get(dim_); }

private:
    int dim_ = 0;
    int order_ = 0;
    std::vector<double> coeffs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);

/// Elementary functions. Each throws std::domain_error outside its domain.
Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet sech(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, int n);
/// Real exponent; requires a positive base value.
Jet pow(const Jet& a, double e);

/// Re-expresses a jet in `new_dim` >= dim variables: old variable i becomes
/// variable offset + i, and the jet is constant in every other variable.
Jet embed(const Jet& j, int new_dim, int offset = 0);

/// Composition outer(inner(x)) for a multivariate outer jet. `inner` holds
/// one jet per outer variable, expanded at the point where outer is centred
/// (their values are that point). The monomials in (inner - value) are built
/// once, so applying many outer jets is a cheap linear combination.
class Substitution {
public:
    Substitution(std::span<const Jet> inner, int outer_order);
    Jet apply(const Jet& outer) const;

private:
    int outer_dim_;
    int order_;
    std::vector<Jet> monomials_;
};

/// Flat coefficient list in graded-lex order (fixture serialization).
std::vector<double> serialize(const Jet& j);

}  // namespace sasaki
