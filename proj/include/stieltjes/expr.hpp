#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>

#include "error.hpp"
#include "jet.hpp"
#include "real.hpp"

namespace stieltjes {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt };

/// Immutable expression tree in the single variable x.
///
/// Grammar accepted by `parse`:
///
///     expr    := term (('+'|'-') term)*
///     term    := factor (('*'|'/') factor)*
///     factor  := '-'? power
///     power   := primary ('^' exponent)?
///     primary := number | 'x' | '(' expr ')' | func '(' expr ')'
///     func    := exp | log | sqrt
///
/// The exponent is a literal real, optionally signed and optionally wrapped
/// in one pair of parentheses ("x^2", "x^-0.5", "x^(-0.5)").
class Expr {
public:
    struct Node {
        NodeKind kind;
        double value = 0.0; // Constant value, or the exponent of Pow
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expr() : root_(make(NodeKind::Variable)) {}
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static Expr constant(double v) { return Expr(make(NodeKind::Constant, v)); }
    static Expr variable() { return Expr(make(NodeKind::Variable)); }

    static NodePtr make(NodeKind kind, double value = 0.0, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
        return std::make_shared<const Node>(Node{kind, value, std::move(lhs), std::move(rhs)});
    }

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }

    friend bool operator==(const Expr& a, const Expr& b) { return same(a.root_.get(), b.root_.get()); }

private:
    static bool same(const Node* a, const Node* b) {
        if (a == b) return true;
        if (!a || !b) return false;
        return a->kind == b->kind && a->value == b->value && same(a->lhs.get(), b->lhs.get()) &&
               same(a->rhs.get(), b->rhs.get());
    }

    NodePtr root_;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    Expr run() {
        auto node = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return Expr(std::move(node));
    }

private:
    using NodePtr = Expr::NodePtr;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::SyntaxError, msg + " at position " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::make(NodeKind::Add, 0.0, lhs, term());
            else if (accept('-'))
                lhs = Expr::make(NodeKind::Sub, 0.0, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        auto lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = Expr::make(NodeKind::Mul, 0.0, lhs, factor());
            else if (accept('/'))
                lhs = Expr::make(NodeKind::Div, 0.0, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        if (accept('-')) return Expr::make(NodeKind::Neg, 0.0, power());
        return power();
    }

    NodePtr power() {
        auto base = primary();
        if (!accept('^')) return base;
        double exponent;
        if (accept('(')) {
            exponent = signed_number();
            expect(')');
        } else {
            exponent = signed_number();
        }
        return Expr::make(NodeKind::Pow, exponent, base);
    }

    double signed_number() {
        bool negative = false;
        if (accept('-'))
            negative = true;
        else
            accept('+');
        skip_ws();
        if (pos_ >= src_.size() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            fail("expected a number");
        const double v = number();
        return negative ? -v : v;
    }

    double number() {
        const std::size_t start = pos_;
        auto digit = [&](std::size_t i) { return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i])); };
        while (digit(pos_)) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (digit(pos_)) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (digit(p)) {
                pos_ = p;
                while (digit(pos_)) ++pos_;
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc() || ptr != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::make(NodeKind::Constant, number());
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "x") return Expr::make(NodeKind::Variable);
            NodeKind kind;
            if (name == "exp")
                kind = NodeKind::Exp;
            else if (name == "log")
                kind = NodeKind::Log;
            else if (name == "sqrt")
                kind = NodeKind::Sqrt;
            else {
                skip_ws();
                if (pos_ < src_.size() && src_[pos_] == '(')
                    throw Error(ErrorKind::UnknownFunction, "unknown function '" + std::string(name) + "'", start);
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            expect('(');
            auto arg = expr();
            expect(')');
            return Expr::make(kind, 0.0, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

inline void print_node(const Expr::Node& n, std::string& out) {
    auto binary = [&](char op) {
        out += '(';
        print_node(*n.lhs, out);
        out += op;
        print_node(*n.rhs, out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::Constant: out += format_real(n.value); break;
    case NodeKind::Variable: out += 'x'; break;
    case NodeKind::Add: binary('+'); break;
    case NodeKind::Sub: binary('-'); break;
    case NodeKind::Mul: binary('*'); break;
    case NodeKind::Div: binary('/'); break;
    case NodeKind::Neg:
        out += "(-";
        print_node(*n.lhs, out);
        out += ')';
        break;
    case NodeKind::Pow:
        out += '(';
        print_node(*n.lhs, out);
        out += ")^(" + format_real(n.value) + ')';
        break;
    case NodeKind::Exp: call("exp"); break;
    case NodeKind::Log: call("log"); break;
    case NodeKind::Sqrt: call("sqrt"); break;
    }
}

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
T eval_node(const Expr::Node& n, const T& x) {
    using std::exp;
    using std::log;
    using std::sqrt;
    using std::pow;
    constexpr bool cplx = is_complex<T>::value;
    switch (n.kind) {
    case NodeKind::Constant: return T(n.value);
    case NodeKind::Variable: return x;
    case NodeKind::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case NodeKind::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case NodeKind::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case NodeKind::Div: {
        const T d = eval_node(*n.rhs, x);
        if (d == T(0)) throw Error(ErrorKind::DomainError, "division by zero");
        return eval_node(*n.lhs, x) / d;
    }
    case NodeKind::Neg: return -eval_node(*n.lhs, x);
    case NodeKind::Pow: {
        const T b = eval_node(*n.lhs, x);
        const double e = n.value;
        if (e == std::floor(e) && std::abs(e) <= 64) {
            T r(1);
            for (int i = 0; i < static_cast<int>(std::abs(e)); ++i) r *= b;
            if (e < 0) {
                if (r == T(0)) throw Error(ErrorKind::DomainError, "negative power of zero");
                r = T(1) / r;
            }
            return r;
        }
        if constexpr (cplx) {
            if (b == T(0)) return T(0);
            return exp(T(e) * log(b));
        } else {
            if (b < T(0) || (b == T(0) && e < 0))
                throw Error(ErrorKind::DomainError, "non-integer power of a nonpositive value");
            if (b == T(0)) return T(0);
            return pow(b, T(e));
        }
    }
    case NodeKind::Exp: return exp(eval_node(*n.lhs, x));
    case NodeKind::Log: {
        const T a = eval_node(*n.lhs, x);
        if constexpr (!cplx)
            if (!(a > T(0))) throw Error(ErrorKind::DomainError, "log of a nonpositive value");
        return log(a);
    }
    case NodeKind::Sqrt: {
        const T a = eval_node(*n.lhs, x);
        if constexpr (!cplx)
            if (a < T(0)) throw Error(ErrorKind::DomainError, "sqrt of a negative value");
        return sqrt(a);
    }
    }
    throw Error(ErrorKind::InvalidInput, "corrupt expression node");
}

template <class Real>
Taylor<Real> jet_node(const Expr::Node& n, const Real& x, int N) {
    switch (n.kind) {
    case NodeKind::Constant: return Taylor<Real>::constant(Real(n.value), N);
    case NodeKind::Variable: return Taylor<Real>::variable(x, N);
    case NodeKind::Add: return jet_node(*n.lhs, x, N) + jet_node(*n.rhs, x, N);
    case NodeKind::Sub: return jet_node(*n.lhs, x, N) - jet_node(*n.rhs, x, N);
    case NodeKind::Mul: return jet_node(*n.lhs, x, N) * jet_node(*n.rhs, x, N);
    case NodeKind::Div: return jet_node(*n.lhs, x, N) / jet_node(*n.rhs, x, N);
    case NodeKind::Neg: return -jet_node(*n.lhs, x, N);
    case NodeKind::Pow: return pow(jet_node(*n.lhs, x, N), n.value);
    case NodeKind::Exp: return exp(jet_node(*n.lhs, x, N));
    case NodeKind::Log: return log(jet_node(*n.lhs, x, N));
    case NodeKind::Sqrt: return sqrt(jet_node(*n.lhs, x, N));
    }
    throw Error(ErrorKind::InvalidInput, "corrupt expression node");
}

} // namespace detail

inline Expr parse(std::string_view src) { return detail::ExprParser(src).run(); }

/// Fully parenthesised rendering; `parse(to_string(e)) == e`.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_node(e.root(), out);
    return out;
}

/// Plain value of the expression at x. T may be double, `extended` or
/// std::complex<double> (principal branches).
template <class T>
T evaluate(const Expr& e, const T& x) {
    return detail::eval_node(e.root(), x);
}

/// f(x), f'(x), ..., f^(N)(x) by Taylor-coefficient arithmetic.
template <class Real>
Jet<Real> jet_eval(const Expr& e, const Real& x, int N) {
    if (!(x > Real(0))) throw Error(ErrorKind::NonPositiveX, "x must be > 0, got " + format_real(x));
    if (N < 0) throw Error(ErrorKind::InsufficientOrder, "derivative order must be >= 0");
    auto jet = detail::jet_node(e.root(), x, N).to_jet(x);
    for (const auto& d : jet.derivs)
        if (!is_finite(d)) throw Error(ErrorKind::DomainError, "non-finite derivative at x = " + format_real(x));
    return jet;
}

} // namespace stieltjes
