#include "sasaki/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace sasaki {

struct Expr::Node {
    enum class Kind { Number, Coord, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    int index = 0;
    Func func = Func::Exp;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
}

NodePtr make_symbol(Kind kind, int index) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->index = index;
    return n;
}

NodePtr make_binary(Kind kind, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_unary(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_call(Func f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->lhs = std::move(a);
    return n;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
        case Func::Sech: return "sech";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::optional<Func> lookup_func(std::string_view name) {
    if (name == "exp") return Func::Exp;
    if (name == "ln" || name == "log") return Func::Ln;
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "tan") return Func::Tan;
    if (name == "sinh") return Func::Sinh;
    if (name == "cosh") return Func::Cosh;
    if (name == "sech") return Func::Sech;
    if (name == "sqrt") return Func::Sqrt;
    return std::nullopt;
}

bool depends(const Node& n) {
    switch (n.kind) {
        case Kind::Number:
        case Kind::Param: return false;
        case Kind::Coord: return true;
        case Kind::Neg:
        case Kind::Call: return depends(*n.lhs);
        default: return depends(*n.lhs) || depends(*n.rhs);
    }
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const Node& n, const Expr::Symbols& sym, std::ostream& os) {
    auto child = [&](const Node& c, int min_prec) {
        const bool paren = precedence(c) < min_prec;
        if (paren) os << '(';
        print(c, sym, os);
        if (paren) os << ')';
    };
    switch (n.kind) {
        case Kind::Number: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.number;
            os << tmp.str();
            break;
        }
        case Kind::Coord: os << sym.coords[static_cast<std::size_t>(n.index)]; break;
        case Kind::Param: os << sym.params[static_cast<std::size_t>(n.index)]; break;
        case Kind::Neg: os << '-'; child(*n.lhs, 4); break;
        case Kind::Add: child(*n.lhs, 1); os << " + "; child(*n.rhs, 2); break;
        case Kind::Sub: child(*n.lhs, 1); os << " - "; child(*n.rhs, 2); break;
        case Kind::Mul: child(*n.lhs, 2); os << '*'; child(*n.rhs, 3); break;
        case Kind::Div: child(*n.lhs, 2); os << '/'; child(*n.rhs, 3); break;
        case Kind::Pow: child(*n.lhs, 5); os << '^'; child(*n.rhs, 4); break;
        case Kind::Call: os << func_name(n.func) << '('; print(*n.lhs, sym, os); os << ')'; break;
    }
}

std::string node_text(const Node& n, const Expr::Symbols& sym) {
    std::ostringstream os;
    print(n, sym, os);
    return os.str();
}

struct EvalContext {
    std::span<const double> point;
    std::span<const double> params;
    int dim;
    int order;
    const Expr::Symbols* symbols;
};

Jet eval_node(const Node& n, const EvalContext& ctx);

double eval_constant(const Node& n, const EvalContext& ctx) {
    EvalContext c0 = ctx;
    c0.order = 0;
    return eval_node(n, c0).value();
}

Jet apply_func(Func f, const Jet& a) {
    switch (f) {
        case Func::Exp: return exp(a);
        case Func::Ln: return log(a);
        case Func::Sin: return sin(a);
        case Func::Cos: return cos(a);
        case Func::Tan: return tan(a);
        case Func::Sinh: return sinh(a);
        case Func::Cosh: return cosh(a);
        case Func::Sech: return sech(a);
        case Func::Sqrt: return sqrt(a);
    }
    throw std::logic_error("unknown function");
}

Jet eval_node(const Node& n, const EvalContext& ctx) {
    try {
        switch (n.kind) {
            case Kind::Number: return Jet::constant(ctx.dim, ctx.order, n.number);
            case Kind::Coord:
                return Jet::variable(ctx.dim, ctx.order, n.index, ctx.point[static_cast<std::size_t>(n.index)]);
            case Kind::Param: return Jet::constant(ctx.dim, ctx.order, ctx.params[static_cast<std::size_t>(n.index)]);
            case Kind::Neg: return -eval_node(*n.lhs, ctx);
            case Kind::Add: return eval_node(*n.lhs, ctx) + eval_node(*n.rhs, ctx);
            case Kind::Sub: return eval_node(*n.lhs, ctx) - eval_node(*n.rhs, ctx);
            case Kind::Mul: return eval_node(*n.lhs, ctx) * eval_node(*n.rhs, ctx);
            case Kind::Div: {
                Jet num = eval_node(*n.lhs, ctx);
                Jet den = eval_node(*n.rhs, ctx);
                return num / den;
            }
            case Kind::Pow: {
                if (depends(*n.rhs)) {
                    // Constant base (checked at parse time): b^y = exp(y ln b).
                    const double base = eval_constant(*n.lhs, ctx);
                    if (!(base > 0.0)) throw std::domain_error("non-positive base with variable exponent");
                    return exp(eval_node(*n.rhs, ctx) * std::log(base));
                }
                const double e = eval_constant(*n.rhs, ctx);
                Jet base = eval_node(*n.lhs, ctx);
                if (e == std::round(e) && std::abs(e) <= 1024.0) return pow(base, static_cast<int>(e));
                return pow(base, e);
            }
            case Kind::Call: return apply_func(n.func, eval_node(*n.lhs, ctx));
        }
    } catch (const std::domain_error& err) {
        throw DomainError(err.what(), node_text(n, *ctx.symbols));
    }
    throw std::logic_error("unreachable expression node");
}

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> coords, std::span<const std::string> params)
        : src_(src), coords_(coords), params_(params) {}

    NodePtr parse() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos) throw ParseError("empty expression", 0);
        NodePtr root = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        if (undeclared_) throw UndeclaredSymbolError(*undeclared_);
        return root;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void unexpected() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+')) lhs = make_binary(Kind::Add, lhs, parse_product());
            else if (accept('-')) lhs = make_binary(Kind::Sub, lhs, parse_product());
            else return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make_binary(Kind::Mul, lhs, parse_unary());
            else if (accept('/')) lhs = make_binary(Kind::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_unary(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        const std::size_t at = pos_;
        if (accept('^')) {
            NodePtr exponent = parse_unary();
            if (depends(*exponent) && depends(*base))
                throw ParseError("variable exponent with variable base; write exp(y*ln(x))", at);
            return make_binary(Kind::Pow, base, exponent);
        }
        return base;
    }

    static bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
    static bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) unexpected();
        const unsigned char c = static_cast<unsigned char>(src_[pos_]);
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!accept(')')) unexpected();
            return inner;
        }
        if (std::isdigit(c) || c == '.') return parse_number();
        if (ident_start(c)) return parse_identifier();
        unexpected();
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
        return make_number(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        skip_ws();
        const bool call = pos_ < src_.size() && src_[pos_] == '(';
        if (call) {
            auto f = lookup_func(name);
            if (!f) throw ParseError("unknown function '" + name + "'", start);
            ++pos_;
            NodePtr arg = parse_sum();
            if (!accept(')')) unexpected();
            return make_call(*f, arg);
        }
        if (auto it = std::find(coords_.begin(), coords_.end(), name); it != coords_.end())
            return make_symbol(Kind::Coord, static_cast<int>(it - coords_.begin()));
        if (auto it = std::find(params_.begin(), params_.end(), name); it != params_.end())
            return make_symbol(Kind::Param, static_cast<int>(it - params_.begin()));
        if (name == "pi") return make_number(std::numbers::pi);
        if (name == "e") return make_number(std::numbers::e);
        if (lookup_func(name)) throw ParseError("function '" + name + "' needs an argument", start);
        if (!undeclared_) undeclared_ = name;
        return make_number(0.0);
    }

    std::string_view src_;
    std::span<const std::string> coords_;
    std::span<const std::string> params_;
    std::size_t pos_ = 0;
    std::optional<std::string> undeclared_;
};

std::shared_ptr<const Expr::Symbols> merge_symbols(const Expr& a, const Expr& b) {
    if (!a.valid() || !b.valid()) throw std::invalid_argument("Expr: operation on an empty expression");
    if (a.symbols() == b.symbols()) return a.symbols();
    if (a.symbols()->coords != b.symbols()->coords || a.symbols()->params != b.symbols()->params)
        throw std::invalid_argument("Expr: combining expressions over different symbols");
    return a.symbols();
}

}  // namespace

Expr Expr::constant(double value, std::vector<std::string> coords, std::vector<std::string> params) {
    auto sym = std::make_shared<Symbols>(Symbols{std::move(coords), std::move(params)});
    return Expr(make_number(value), std::move(sym));
}

Expr Expr::coordinate(int index, std::vector<std::string> coords, std::vector<std::string> params) {
    if (index < 0 || static_cast<std::size_t>(index) >= coords.size()) throw std::out_of_range("Expr::coordinate");
    auto sym = std::make_shared<Symbols>(Symbols{std::move(coords), std::move(params)});
    return Expr(make_symbol(Kind::Coord, index), std::move(sym));
}

std::span<const std::string> Expr::coords() const {
    if (!symbols_) return {};
    return symbols_->coords;
}

std::span<const std::string> Expr::params() const {
    if (!symbols_) return {};
    return symbols_->params;
}

Jet Expr::eval_jet(std::span<const double> point, int order, std::span<const double> param_values) const {
    if (!root_) throw std::invalid_argument("Expr::eval_jet on empty expression");
    if (point.size() != symbols_->coords.size()) throw std::invalid_argument("Expr::eval_jet: point has wrong dimension");
    if (param_values.size() < symbols_->params.size()) throw std::invalid_argument("Expr::eval_jet: missing parameter values");
    if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("Expr::eval_jet: order out of range");
    const EvalContext ctx{point, param_values, static_cast<int>(point.size()), order, symbols_.get()};
    return eval_node(*root_, ctx);
}

double Expr::eval(std::span<const double> point, std::span<const double> param_values) const {
    return eval_jet(point, 0, param_values).value();
}

bool Expr::depends_on_coords() const { return root_ && depends(*root_); }

std::string Expr::to_string() const { return root_ ? node_text(*root_, *symbols_) : std::string(); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_binary(Kind::Add, a.root(), b.root()), merge_symbols(a, b)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_binary(Kind::Sub, a.root(), b.root()), merge_symbols(a, b)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_binary(Kind::Mul, a.root(), b.root()), merge_symbols(a, b)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_binary(Kind::Div, a.root(), b.root()), merge_symbols(a, b)); }
Expr operator-(const Expr& a) { return Expr(make_unary(a.root()), a.symbols()); }
Expr operator*(double s, const Expr& a) { return Expr(make_binary(Kind::Mul, make_number(s), a.root()), a.symbols()); }
Expr apply(Func f, const Expr& a) { return Expr(make_call(f, a.root()), a.symbols()); }

Expr parse_expr(std::string_view source, std::span<const std::string> coords, std::span<const std::string> params) {
    Parser parser(source, coords, params);
    NodePtr root = parser.parse();
    auto sym = std::make_shared<Expr::Symbols>(
        Expr::Symbols{{coords.begin(), coords.end()}, {params.begin(), params.end()}});
    return Expr(std::move(root), std::move(sym));
}

}  // namespace sasaki
