#include "tissot/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tissot/errors.hpp"

namespace tissot {

enum class Op { number, variable, neg, add, sub, mul, div, pow, sin, cos, tan, ln, sqrt };

struct Expression::Node {
    Op op = Op::number;
    double number = 0.0;
    std::size_t var = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct FunctionName {
    std::string_view name;
    Op op;
};
constexpr std::array kFunctions{FunctionName{"sin", Op::sin}, FunctionName{"cos", Op::cos},
                                FunctionName{"tan", Op::tan}, FunctionName{"ln", Op::ln},
                                FunctionName{"sqrt", Op::sqrt}};

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> vars, std::size_t base)
        : text_(text), vars_(vars), base_(base) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, base_ + pos_); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make(Op::add, lhs, term());
            else if (accept('-'))
                lhs = make(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Op::mul, lhs, unary());
            else if (accept('/'))
                lhs = make(Op::div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::pow, base, unary());
        return base;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (ident_start(c)) return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
        if (ec != std::errc() || !std::isfinite(v)) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::number;
        n->number = v;
        return n;
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        for (const auto& f : kFunctions) {
            if (f.name == name) {
                if (!accept('(')) fail("expected '(' after " + std::string(name));
                NodePtr arg = expression();
                if (!accept(')')) fail("expected ')'");
                return make(f.op, arg);
            }
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                auto n = std::make_shared<Expression::Node>();
                n->op = Op::variable;
                n->var = i;
                return n;
            }
        }
        if (name == "pi") {
            auto n = std::make_shared<Expression::Node>();
            n->number = std::numbers::pi;
            return n;
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::span<const std::string> vars_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("expression leaves its domain in ") + what);
    return v;
}

double eval(const Expression::Node& n, std::span<const double> vars) {
    switch (n.op) {
        case Op::number: return n.number;
        case Op::variable: return vars[n.var];
        case Op::neg: return -eval(*n.lhs, vars);
        case Op::add: return eval(*n.lhs, vars) + eval(*n.rhs, vars);
        case Op::sub: return eval(*n.lhs, vars) - eval(*n.rhs, vars);
        case Op::mul: return eval(*n.lhs, vars) * eval(*n.rhs, vars);
        case Op::div: {
            double d = eval(*n.rhs, vars);
            if (d == 0.0) throw DomainError("division by zero");
            return eval(*n.lhs, vars) / d;
        }
        case Op::pow: return checked(std::pow(eval(*n.lhs, vars), eval(*n.rhs, vars)), "^");
        case Op::sin: return std::sin(eval(*n.lhs, vars));
        case Op::cos: return std::cos(eval(*n.lhs, vars));
        case Op::tan: return checked(std::tan(eval(*n.lhs, vars)), "tan");
        case Op::ln: {
            double x = eval(*n.lhs, vars);
            if (!(x > 0.0)) throw DomainError("ln of a non-positive value");
            return std::log(x);
        }
        case Op::sqrt: {
            double x = eval(*n.lhs, vars);
            if (x < 0.0) throw DomainError("sqrt of a negative value");
            return std::sqrt(x);
        }
    }
    return 0.0;
}

Dual2 scale(Dual2 a, double value, double factor) {
    return {value, {a.d[0] * factor, a.d[1] * factor}};
}

Dual2 deval(const Expression::Node& n, std::span<const double> vars) {
    switch (n.op) {
        case Op::number: return {n.number, {0.0, 0.0}};
        case Op::variable: {
            Dual2 out{vars[n.var], {0.0, 0.0}};
            if (n.var < 2) out.d[n.var] = 1.0;
            return out;
        }
        case Op::neg: {
            Dual2 a = deval(*n.lhs, vars);
            return {-a.value, {-a.d[0], -a.d[1]}};
        }
        case Op::add:
        case Op::sub: {
            Dual2 a = deval(*n.lhs, vars), b = deval(*n.rhs, vars);
            double s = n.op == Op::add ? 1.0 : -1.0;
            return {a.value + s * b.value, {a.d[0] + s * b.d[0], a.d[1] + s * b.d[1]}};
        }
        case Op::mul: {
            Dual2 a = deval(*n.lhs, vars), b = deval(*n.rhs, vars);
            return {a.value * b.value,
                    {a.d[0] * b.value + a.value * b.d[0], a.d[1] * b.value + a.value * b.d[1]}};
        }
        case Op::div: {
            Dual2 a = deval(*n.lhs, vars), b = deval(*n.rhs, vars);
            if (b.value == 0.0) throw DomainError("division by zero");
            double q = a.value / b.value;
            return {q, {(a.d[0] - q * b.d[0]) / b.value, (a.d[1] - q * b.d[1]) / b.value}};
        }
        case Op::pow: {
            Dual2 a = deval(*n.lhs, vars), b = deval(*n.rhs, vars);
            double v = checked(std::pow(a.value, b.value), "^");
            Dual2 out{v, {0.0, 0.0}};
            double da = b.value == 0.0 ? 0.0 : b.value * std::pow(a.value, b.value - 1.0);
            bool varying_exponent = b.d[0] != 0.0 || b.d[1] != 0.0;
            double lna = varying_exponent ? std::log(a.value) : 0.0;
            for (int i = 0; i < 2; ++i) {
                out.d[i] = (a.d[i] != 0.0 ? da * a.d[i] : 0.0) + (b.d[i] != 0.0 ? v * lna * b.d[i] : 0.0);
                checked(out.d[i], "derivative of ^");
            }
            return out;
        }
        case Op::sin: {
            Dual2 a = deval(*n.lhs, vars);
            return scale(a, std::sin(a.value), std::cos(a.value));
        }
        case Op::cos: {
            Dual2 a = deval(*n.lhs, vars);
            return scale(a, std::cos(a.value), -std::sin(a.value));
        }
        case Op::tan: {
            Dual2 a = deval(*n.lhs, vars);
            double c = std::cos(a.value);
            return scale(a, checked(std::tan(a.value), "tan"), checked(1.0 / (c * c), "tan"));
        }
        case Op::ln: {
            Dual2 a = deval(*n.lhs, vars);
            if (!(a.value > 0.0)) throw DomainError("ln of a non-positive value");
            return scale(a, std::log(a.value), 1.0 / a.value);
        }
        case Op::sqrt: {
            Dual2 a = deval(*n.lhs, vars);
            if (!(a.value > 0.0)) throw DomainError("sqrt not differentiable at non-positive values");
            double r = std::sqrt(a.value);
            return scale(a, r, 0.5 / r);
        }
    }
    return {};
}

void print(const Expression::Node& n, const std::vector<std::string>& vars, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print(*n.lhs, vars, out);
        out += op;
        print(*n.rhs, vars, out);
        out += ')';
    };
    switch (n.op) {
        case Op::number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case Op::variable: out += vars[n.var]; return;
        case Op::neg:
            out += "(-";
            print(*n.lhs, vars, out);
            out += ')';
            return;
        case Op::add: binary(" + "); return;
        case Op::sub: binary(" - "); return;
        case Op::mul: binary(" * "); return;
        case Op::div: binary(" / "); return;
        case Op::pow: binary(" ^ "); return;
        default: break;
    }
    for (const auto& f : kFunctions) {
        if (f.op == n.op) {
            out += f.name;
            out += '(';
            print(*n.lhs, vars, out);
            out += ')';
            return;
        }
    }
}

}  // namespace

Expression Expression::parse(std::string_view text, std::span<const std::string> variables,
                             std::size_t base_offset) {
    Expression e;
    e.variables_.assign(variables.begin(), variables.end());
    e.root_ = Parser(text, e.variables_, base_offset).parse();
    return e;
}

double Expression::evaluate(std::span<const double> vars) const {
    return checked(eval(*root_, vars), "expression");
}

Dual2 Expression::evaluate_dual(std::span<const double> vars) const {
    Dual2 out = deval(*root_, vars);
    checked(out.value, "expression");
    checked(out.d[0], "derivative");
    checked(out.d[1], "derivative");
    return out;
}

std::string Expression::to_string() const {
    std::string out;
    if (root_) print(*root_, variables_, out);
    return out;
}

}  // namespace tissot
