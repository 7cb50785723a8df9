#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sasaki/jet.hpp"

namespace sasaki {

/// Malformed expression text. `offset` is a byte offset into the source.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UndeclaredSymbolError : public std::runtime_error {
public:
    explicit UndeclaredSymbolError(std::string symbol)
        : std::runtime_error("undeclared symbol '" + symbol + "'"), symbol_(std::move(symbol)) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

/// Evaluation outside a function's domain; carries the offending subexpression.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, std::string subexpression)
        : std::runtime_error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

enum class Func { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Sech, Sqrt };

/// Immutable scalar-field expression over declared coordinates and parameters.
///
/// Grammar: conventional infix with + - * /, unary minus, right-associative ^,
/// and calls f(x) for exp, ln (alias log), sin, cos, tan, sinh, cosh, sech,
/// sqrt. The names `pi` and `e` are constants unless declared otherwise.
/// Exponents must not depend on coordinates unless the base is constant.
class Expr {
public:
    struct Node;

    Expr() = default;

    static Expr constant(double value, std::vector<std::string> coords, std::vector<std::string> params = {});
    /// The coordinate function with the given index.
    static Expr coordinate(int index, std::vector<std::string> coords, std::vector<std::string> params = {});

    std::span<const std::string> coords() const;
    std::span<const std::string> params() const;
    int dim() const { return static_cast<int>(coords().size()); }
    bool valid() const { return root_ != nullptr; }

    /// Taylor jet of the field at `point`, exact up to `order`.
    Jet eval_jet(std::span<const double> point, int order, std::span<const double> param_values = {}) const;
    double eval(std::span<const double> point, std::span<const double> param_values = {}) const;

    bool depends_on_coords() const;
    std::string to_string() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator*(double s, const Expr& a);
    friend Expr apply(Func f, const Expr& a);

    struct Symbols {
        std::vector<std::string> coords;
        std::vector<std::string> params;
    };

    Expr(std::shared_ptr<const Node> root, std::shared_ptr<const Symbols> symbols)
        : root_(std::move(root)), symbols_(std::move(symbols)) {}
    const std::shared_ptr<const Node>& root() const { return root_; }
    const std::shared_ptr<const Symbols>& symbols() const { return symbols_; }

private:
    std::shared_ptr<const Node> root_;
    std::shared_ptr<const Symbols> symbols_;
};

Expr apply(Func f, const Expr& a);

/// Parses `source`; every identifier must be a coordinate, a parameter, a
/// known function name, or the constants pi / e.
Expr parse_expr(std::string_view source, std::span<const std::string> coords, std::span<const std::string> params = {});

}  // namespace sasaki
