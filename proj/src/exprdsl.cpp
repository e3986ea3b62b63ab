#include "hball/exprdsl.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace hball {

enum class NodeKind { Num, Var, Neg, Add, Sub, Mul, Div, PowInt, Call };
enum class VarKind { X, Y, T, R2, Gauge };
enum class FnKind { Sin, Cos, Exp, Sqrt, Log };

struct ExprNode {
    NodeKind kind;
    double num = 0.0;
    VarKind var = VarKind::T;
    int index = 0;  // 1-based for x/y
    int exponent = 0;
    FnKind fn = FnKind::Sin;
    ExprPtr a, b;
};

namespace {

struct Lexer {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
};

struct Parser {
    Lexer lx;

    explicit Parser(const std::string& src) : lx{src} {}

    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        while (true) {
            char c = lx.peek();
            if (c == '+' || c == '-') {
                ++lx.pos;
                ExprPtr right = parse_term();
                auto node = std::make_shared<ExprNode>();
                node->kind = c == '+' ? NodeKind::Add : NodeKind::Sub;
                node->a = left;
                node->b = right;
                left = node;
            } else {
                return left;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_unary();
        while (true) {
            char c = lx.peek();
            if (c == '*' || c == '/') {
                ++lx.pos;
                ExprPtr right = parse_unary();
                auto node = std::make_shared<ExprNode>();
                node->kind = c == '*' ? NodeKind::Mul : NodeKind::Div;
                node->a = left;
                node->b = right;
                left = node;
            } else {
                return left;
            }
        }
    }

    ExprPtr parse_unary() {
        if (lx.peek() == '-') {
            ++lx.pos;
            auto node = std::make_shared<ExprNode>();
            node->kind = NodeKind::Neg;
            node->a = parse_unary();
            return node;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (lx.peek() == '^') {
            ++lx.pos;
            lx.skip_ws();
            std::size_t at = lx.pos;
            bool neg = false;
            if (lx.peek() == '-') {
                neg = true;
                ++lx.pos;
            }
            if (!std::isdigit(static_cast<unsigned char>(lx.peek())))
                throw ParseError("integer exponent expected", at);
            long v = 0;
            while (lx.pos < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])))
                v = v * 10 + (lx.s[lx.pos++] - '0');
            auto node = std::make_shared<ExprNode>();
            node->kind = NodeKind::PowInt;
            node->exponent = static_cast<int>(neg ? -v : v);
            node->a = base;
            return node;
        }
        return base;
    }

    ExprPtr parse_primary() {
        std::size_t at = lx.pos;
        char c = lx.peek();
        at = lx.pos;
        if (c == '(') {
            ++lx.pos;
            ExprPtr inner = parse_expr();
            if (lx.peek() != ')') throw ParseError("expected ')'", lx.pos);
            ++lx.pos;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = lx.pos;
            while (lx.pos < lx.s.size() &&
                   (std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])) || lx.s[lx.pos] == '.' ||
                    lx.s[lx.pos] == 'e' || lx.s[lx.pos] == 'E' ||
                    ((lx.s[lx.pos] == '+' || lx.s[lx.pos] == '-') &&
                     (lx.s[lx.pos - 1] == 'e' || lx.s[lx.pos - 1] == 'E'))))
                ++lx.pos;
            auto node = std::make_shared<ExprNode>();
            node->kind = NodeKind::Num;
            try {
                node->num = std::stod(lx.s.substr(start, lx.pos - start));
            } catch (...) {
                throw ParseError("malformed number", start);
            }
            return node;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = lx.pos;
            while (lx.pos < lx.s.size() &&
                   (std::isalnum(static_cast<unsigned char>(lx.s[lx.pos])) || lx.s[lx.pos] == '_'))
                ++lx.pos;
            std::string name = lx.s.substr(start, lx.pos - start);
            auto mkfn = [&](FnKind f) {
                if (lx.peek() != '(') throw ParseError("expected '(' after function", lx.pos);
                ++lx.pos;
                ExprPtr arg = parse_expr();
                if (lx.peek() != ')') throw ParseError("expected ')'", lx.pos);
                ++lx.pos;
                auto node = std::make_shared<ExprNode>();
                node->kind = NodeKind::Call;
                node->fn = f;
                node->a = arg;
                return node;
            };
            if (name == "sin") return mkfn(FnKind::Sin);
            if (name == "cos") return mkfn(FnKind::Cos);
            if (name == "exp") return mkfn(FnKind::Exp);
            if (name == "sqrt") return mkfn(FnKind::Sqrt);
            if (name == "log") return mkfn(FnKind::Log);
            auto node = std::make_shared<ExprNode>();
            node->kind = NodeKind::Var;
            if (name == "t") {
                node->var = VarKind::T;
            } else if (name == "r2") {
                node->var = VarKind::R2;
            } else if (name == "gauge") {
                node->var = VarKind::Gauge;
            } else if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
                       std::isdigit(static_cast<unsigned char>(name[1]))) {
                node->var = name[0] == 'x' ? VarKind::X : VarKind::Y;
                node->index = std::stoi(name.substr(1));
                if (node->index < 1) throw ParseError("variable index must be >= 1", start);
            } else {
                throw ParseError("unknown identifier '" + name + "'", start);
            }
            return node;
        }
        throw ParseError("unexpected character", at);
    }
};

template <class S, class Ctx>
S eval_node(const ExprNode& node, const Ctx& ctx) {
    switch (node.kind) {
        case NodeKind::Num:
            return ctx.constant(node.num);
        case NodeKind::Var:
            return ctx.variable(node.var, node.index);
        case NodeKind::Neg:
            return -eval_node<S>(*node.a, ctx);
        case NodeKind::Add:
            return eval_node<S>(*node.a, ctx) + eval_node<S>(*node.b, ctx);
        case NodeKind::Sub:
            return eval_node<S>(*node.a, ctx) - eval_node<S>(*node.b, ctx);
        case NodeKind::Mul:
            return eval_node<S>(*node.a, ctx) * eval_node<S>(*node.b, ctx);
        case NodeKind::Div: {
            S den = eval_node<S>(*node.b, ctx);
            return eval_node<S>(*node.a, ctx) / den;
        }
        case NodeKind::PowInt:
            return ctx.powint(eval_node<S>(*node.a, ctx), node.exponent);
        case NodeKind::Call: {
            S arg = eval_node<S>(*node.a, ctx);
            switch (node.fn) {
                case FnKind::Sin:
                    return ctx.fsin(arg);
                case FnKind::Cos:
                    return ctx.fcos(arg);
                case FnKind::Exp:
                    return ctx.fexp(arg);
                case FnKind::Sqrt:
                    return ctx.fsqrt(arg);
                case FnKind::Log:
                    return ctx.flog(arg);
            }
        }
    }
    throw std::logic_error("eval: bad node");
}

struct DoubleCtx {
    const Point& p;

    double constant(double c) const { return c; }
    double variable(VarKind v, int idx) const {
        switch (v) {
            case VarKind::T:
                return p.t;
            case VarKind::R2:
                return p.r2();
            case VarKind::Gauge:
                return koranyi_norm(p);
            case VarKind::X:
            case VarKind::Y:
                if (idx > p.n())
                    throw std::domain_error("expression variable index exceeds dimension n");
                return v == VarKind::X ? p.x(idx - 1) : p.y(idx - 1);
        }
        throw std::logic_error("bad var");
    }
    double powint(double b, int e) const { return std::pow(b, e); }
    double fsin(double a) const { return std::sin(a); }
    double fcos(double a) const { return std::cos(a); }
    double fexp(double a) const { return std::exp(a); }
    double fsqrt(double a) const {
        if (a < 0.0) throw std::domain_error("sqrt of negative value in expression");
        return std::sqrt(a);
    }
    double flog(double a) const {
        if (a <= 0.0) throw std::domain_error("log of non-positive value in expression");
        return std::log(a);
    }
};

struct JetCtx {
    const Point& p;
    JetPoint jp;

    explicit JetCtx(const Point& pp) : p(pp), jp(JetPoint::seed(pp)) {}

    Jet2 constant(double c) const { return Jet2::constant(c, 2 * p.n() + 1); }
    Jet2 variable(VarKind v, int idx) const {
        switch (v) {
            case VarKind::T:
                return jp.tt;
            case VarKind::R2:
                return jp.r2();
            case VarKind::Gauge:
                return pow(jp.gauge4(), 0.25);
            case VarKind::X:
            case VarKind::Y:
                if (idx > p.n())
                    throw std::domain_error("expression variable index exceeds dimension n");
                return v == VarKind::X ? jp.xs[idx - 1] : jp.ys[idx - 1];
        }
        throw std::logic_error("bad var");
    }
    Jet2 powint(const Jet2& b, int e) const { return powi(b, e); }
    Jet2 fsin(const Jet2& a) const { return sin(a); }
    Jet2 fcos(const Jet2& a) const { return cos(a); }
    Jet2 fexp(const Jet2& a) const { return exp(a); }
    Jet2 fsqrt(const Jet2& a) const { return sqrt(a); }
    Jet2 flog(const Jet2& a) const { return log(a); }
};

void collect(const ExprNode& n, bool& circ, int& maxidx) {
    if (n.kind == NodeKind::Var) {
        if (n.var == VarKind::X || n.var == VarKind::Y) {
            circ = false;
            maxidx = std::max(maxidx, n.index);
        }
    }
    if (n.a) collect(*n.a, circ, maxidx);
    if (n.b) collect(*n.b, circ, maxidx);
}

void print_node(const ExprNode& n, std::ostream& os) {
    switch (n.kind) {
        case NodeKind::Num:
            os << n.num;
            return;
        case NodeKind::Var:
            switch (n.var) {
                case VarKind::T:
                    os << "t";
                    return;
                case VarKind::R2:
                    os << "r2";
                    return;
                case VarKind::Gauge:
                    os << "gauge";
                    return;
                case VarKind::X:
                    os << "x" << n.index;
                    return;
                case VarKind::Y:
                    os << "y" << n.index;
                    return;
            }
            return;
        case NodeKind::Neg:
            os << "(-";
            print_node(*n.a, os);
            os << ")";
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            const char* op = n.kind == NodeKind::Add   ? " + "
                             : n.kind == NodeKind::Sub ? " - "
                             : n.kind == NodeKind::Mul ? "*"
                                                       : "/";
            os << "(";
            print_node(*n.a, os);
            os << op;
            print_node(*n.b, os);
            os << ")";
            return;
        }
        case NodeKind::PowInt:
            print_node(*n.a, os);
            os << "^" << n.exponent;
            return;
        case NodeKind::Call: {
            const char* f = n.fn == FnKind::Sin    ? "sin"
                            : n.fn == FnKind::Cos  ? "cos"
                            : n.fn == FnKind::Exp  ? "exp"
                            : n.fn == FnKind::Sqrt ? "sqrt"
                                                   : "log";
            os << f << "(";
            print_node(*n.a, os);
            os << ")";
            return;
        }
    }
}

}  // namespace

Expr parse(const std::string& src) {
    Parser p(src);
    ExprPtr root = p.parse_expr();
    if (!p.lx.eof()) throw ParseError("trailing input", p.lx.pos);
    return Expr(root);
}

double Expr::eval(const Point& p) const {
    if (!root_) throw std::logic_error("Expr: empty");
    return eval_node<double>(*root_, DoubleCtx{p});
}

Jet2 Expr::jet_eval(const Point& p) const {
    if (!root_) throw std::logic_error("Expr: empty");
    return eval_node<Jet2>(*root_, JetCtx{p});
}

int Expr::max_var_index() const {
    bool circ = true;
    int idx = 0;
    if (root_) collect(*root_, circ, idx);
    return idx;
}

bool Expr::syntactically_circular() const {
    bool circ = true;
    int idx = 0;
    if (root_) collect(*root_, circ, idx);
    return circ;
}

std::string Expr::pretty() const {
    std::ostringstream os;
    if (root_) print_node(*root_, os);
    return os.str();
}

bool is_circular(const Expr& e, double tol, int n) {
    if (e.syntactically_circular()) return true;
    // deterministic probe set inside the ball, away from z = 0
    std::vector<Point> probes;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) {
            double rho = 0.15 + 0.15 * i;
            double psi = -0.9 + 0.9 * j;
            std::vector<std::complex<double>> z(n, {0.0, 0.0});
            z[0] = std::polar(rho * std::sqrt(std::cos(psi)), 0.4 + 0.3 * j);
            probes.emplace_back(z, rho * rho * std::sin(psi));
        }
    for (const auto& p : probes) {
        double v = e.eval(p);
        double avg = circular_average(e.as_fn(), p, 32);
        if (std::abs(v - avg) > tol) return false;
    }
    return true;
}

}  // namespace hball
