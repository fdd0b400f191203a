#include "bislant/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace bislant {

// ---------------------------------------------------------------------------
// Jet2 arithmetic
// ---------------------------------------------------------------------------

Jet2 Jet2::constant(double c, int k) {
    Jet2 j;
    j.value = c;
    j.grad = Eigen::VectorXd::Zero(k);
    j.hess = Eigen::MatrixXd::Zero(k, k);
    return j;
}

Jet2 Jet2::variable(double x, int index, int k) {
    Jet2 j = constant(x, k);
    j.grad(index) = 1.0;
    return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}

Jet2 operator-(const Jet2& a) { return {-a.value, -a.grad, -a.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value * b.value;
    r.grad = a.value * b.grad + b.value * a.grad;
    r.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() +
             b.grad * a.grad.transpose();
    return r;
}

Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }

namespace {

// f(a) with f'(a), f''(a): standard chain rule for second-order jets.
Jet2 chain(const Jet2& a, double f, double df, double ddf) {
    Jet2 r;
    r.value = f;
    r.grad = df * a.grad;
    r.hess = df * a.hess + ddf * (a.grad * a.grad.transpose());
    return r;
}

[[noreturn]] void domain_error(const std::string& what, const SourcePos& pos) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " at %d:%d", pos.line, pos.column);
    throw ExprError("domain error: " + what + buf, pos);
}

bool is_integer(double p) { return std::nearbyint(p) == p && std::abs(p) < 1e15; }

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Tan: return "tan";
        case UnaryOp::Acos: return "acos";
        case UnaryOp::Asin: return "asin";
        case UnaryOp::Atan: return "atan";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Abs: return "abs";
    }
    return "?";
}

// Constant exponent of a Pow node (enforced by the parser; programmatically
// built trees are validated here again).
double pow_exponent(const ExprNode& rhs) {
    if (rhs.kind == ExprNode::Kind::Constant) return rhs.value;
    if (rhs.kind == ExprNode::Kind::Unary && rhs.uop == UnaryOp::Neg &&
        rhs.a->kind == ExprNode::Kind::Constant)
        return -rhs.a->value;
    domain_error("exponent must be a numeric constant", rhs.pos);
}

double eval_node(const ExprNode& n, std::span<const double> p);

double eval_pow(const ExprNode& n, double base) {
    const double q = pow_exponent(*n.b);
    if (!is_integer(q) && base < 0.0)
        domain_error("negative base with non-integer exponent", n.pos);
    if (base == 0.0 && q < 0.0) domain_error("zero base with negative exponent", n.pos);
    return std::pow(base, q);
}

double eval_node(const ExprNode& n, std::span<const double> p) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: return n.value;
        case ExprNode::Kind::Variable: return p[static_cast<std::size_t>(n.var_index)];
        case ExprNode::Kind::Unary: {
            const double a = eval_node(*n.a, p);
            double r = 0;
            switch (n.uop) {
                case UnaryOp::Neg: r = -a; break;
                case UnaryOp::Sin: r = std::sin(a); break;
                case UnaryOp::Cos: r = std::cos(a); break;
                case UnaryOp::Tan: r = std::tan(a); break;
                case UnaryOp::Acos:
                    if (std::abs(a) > 1.0) domain_error("acos argument outside [-1,1]", n.pos);
                    r = std::acos(a);
                    break;
                case UnaryOp::Asin:
                    if (std::abs(a) > 1.0) domain_error("asin argument outside [-1,1]", n.pos);
                    r = std::asin(a);
                    break;
                case UnaryOp::Atan: r = std::atan(a); break;
                case UnaryOp::Sqrt:
                    if (a < 0.0) domain_error("sqrt of negative value", n.pos);
                    r = std::sqrt(a);
                    break;
                case UnaryOp::Exp: r = std::exp(a); break;
                case UnaryOp::Log:
                    if (a <= 0.0) domain_error("log of non-positive value", n.pos);
                    r = std::log(a);
                    break;
                case UnaryOp::Abs: r = std::abs(a); break;
            }
            if (!std::isfinite(r)) domain_error(std::string(unary_name(n.uop)) + " overflow", n.pos);
            return r;
        }
        case ExprNode::Kind::Binary: {
            const double a = eval_node(*n.a, p);
            double r = 0;
            switch (n.bop) {
                case BinaryOp::Add: r = a + eval_node(*n.b, p); break;
                case BinaryOp::Sub: r = a - eval_node(*n.b, p); break;
                case BinaryOp::Mul: r = a * eval_node(*n.b, p); break;
                case BinaryOp::Div: {
                    const double b = eval_node(*n.b, p);
                    if (b == 0.0) domain_error("division by zero", n.pos);
                    r = a / b;
                    break;
                }
                case BinaryOp::Pow: r = eval_pow(n, a); break;
            }
            if (!std::isfinite(r)) domain_error("non-finite result", n.pos);
            return r;
        }
    }
    domain_error("corrupt expression node", n.pos);
}

Jet2 jet_node(const ExprNode& n, std::span<const double> p) {
    const int k = static_cast<int>(p.size());
    switch (n.kind) {
        case ExprNode::Kind::Constant: return Jet2::constant(n.value, k);
        case ExprNode::Kind::Variable:
            return Jet2::variable(p[static_cast<std::size_t>(n.var_index)], n.var_index, k);
        case ExprNode::Kind::Unary: {
            const Jet2 a = jet_node(*n.a, p);
            const double v = a.value;
            switch (n.uop) {
                case UnaryOp::Neg: return -a;
                case UnaryOp::Sin: return chain(a, std::sin(v), std::cos(v), -std::sin(v));
                case UnaryOp::Cos: return chain(a, std::cos(v), -std::sin(v), -std::cos(v));
                case UnaryOp::Tan: {
                    const double c = std::cos(v);
                    if (std::abs(c) < 1e-150) domain_error("tan pole", n.pos);
                    const double t = std::tan(v), s2 = 1.0 / (c * c);
                    return chain(a, t, s2, 2.0 * t * s2);
                }
                case UnaryOp::Acos: {
                    const double d = 1.0 - v * v;
                    if (d <= 0.0) domain_error("acos at domain boundary", n.pos);
                    const double s = std::sqrt(d);
                    return chain(a, std::acos(v), -1.0 / s, -v / (d * s));
                }
                case UnaryOp::Asin: {
                    const double d = 1.0 - v * v;
                    if (d <= 0.0) domain_error("asin at domain boundary", n.pos);
                    const double s = std::sqrt(d);
                    return chain(a, std::asin(v), 1.0 / s, v / (d * s));
                }
                case UnaryOp::Atan: {
                    const double d = 1.0 + v * v;
                    return chain(a, std::atan(v), 1.0 / d, -2.0 * v / (d * d));
                }
                case UnaryOp::Sqrt: {
                    if (v <= 0.0) domain_error("sqrt at domain boundary", n.pos);
                    const double s = std::sqrt(v);
                    return chain(a, s, 0.5 / s, -0.25 / (s * v));
                }
                case UnaryOp::Exp: {
                    const double e = std::exp(v);
                    if (!std::isfinite(e)) domain_error("exp overflow", n.pos);
                    return chain(a, e, e, e);
                }
                case UnaryOp::Log: {
                    if (v <= 0.0) domain_error("log of non-positive value", n.pos);
                    return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
                }
                case UnaryOp::Abs: {
                    if (v == 0.0) domain_error("abs not differentiable at 0", n.pos);
                    return chain(a, std::abs(v), v > 0 ? 1.0 : -1.0, 0.0);
                }
            }
            domain_error("corrupt unary node", n.pos);
        }
        case ExprNode::Kind::Binary: {
            switch (n.bop) {
                case BinaryOp::Add: return jet_node(*n.a, p) + jet_node(*n.b, p);
                case BinaryOp::Sub: return jet_node(*n.a, p) - jet_node(*n.b, p);
                case BinaryOp::Mul: return jet_node(*n.a, p) * jet_node(*n.b, p);
                case BinaryOp::Div: {
                    const Jet2 b = jet_node(*n.b, p);
                    if (b.value == 0.0) domain_error("division by zero", n.pos);
                    const double iv = 1.0 / b.value;
                    return jet_node(*n.a, p) * chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
                }
                case BinaryOp::Pow: {
                    const Jet2 a = jet_node(*n.a, p);
                    const double v = a.value;
                    const double q = pow_exponent(*n.b);
                    if (q == 0.0) return Jet2::constant(1.0, k);
                    if (!is_integer(q) && v <= 0.0)
                        domain_error("non-integer exponent requires positive base", n.pos);
                    if (v == 0.0) {
                        if (q < 0.0) domain_error("zero base with negative exponent", n.pos);
                        if (q < 2.0 && q != 1.0)
                            domain_error("pow derivative singular at zero base", n.pos);
                    }
                    const double f = std::pow(v, q);
                    const double df = q * std::pow(v, q - 1.0);
                    const double ddf = (q == 1.0) ? 0.0 : q * (q - 1.0) * std::pow(v, q - 2.0);
                    if (!std::isfinite(f) || !std::isfinite(df) || !std::isfinite(ddf))
                        domain_error("pow overflow", n.pos);
                    return chain(a, f, df, ddf);
                }
            }
            domain_error("corrupt binary node", n.pos);
        }
    }
    domain_error("corrupt expression node", n.pos);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

Expr Expr::constant(double c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Constant;
    n->value = c;
    return Expr(std::move(n));
}

Expr Expr::variable(int index, std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Variable;
    n->var_index = index;
    n->var_name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr child) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Unary;
    n->uop = op;
    n->a = child.root();
    return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->bop = op;
    n->a = lhs.root();
    n->b = rhs.root();
    return Expr(std::move(n));
}

double Expr::eval(std::span<const double> point) const {
    if (!root_) throw ExprError("empty expression", {});
    return eval_node(*root_, point);
}

double Expr::eval(const Eigen::VectorXd& point) const {
    return eval(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

Jet2 Expr::eval_jet2(std::span<const double> point) const {
    if (!root_) throw ExprError("empty expression", {});
    return jet_node(*root_, point);
}

Jet2 Expr::eval_jet2(const Eigen::VectorXd& point) const {
    return eval_jet2(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

bool Expr::structurally_equal(const Expr& other) const {
    std::function<bool(const ExprNode*, const ExprNode*)> eq = [&](const ExprNode* x,
                                                                   const ExprNode* y) -> bool {
        if (!x || !y) return x == y;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case ExprNode::Kind::Constant: return x->value == y->value;
            case ExprNode::Kind::Variable: return x->var_index == y->var_index;
            case ExprNode::Kind::Unary: return x->uop == y->uop && eq(x->a.get(), y->a.get());
            case ExprNode::Kind::Binary:
                return x->bop == y->bop && eq(x->a.get(), y->a.get()) && eq(x->b.get(), y->b.get());
        }
        return false;
    };
    return eq(root_.get(), other.root_.get());
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

int precedence(const ExprNode& n) {
    if (n.kind == ExprNode::Kind::Binary) {
        switch (n.bop) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return 1;
            case BinaryOp::Mul:
            case BinaryOp::Div: return 2;
            case BinaryOp::Pow: return 4;
        }
    }
    if (n.kind == ExprNode::Kind::Unary && n.uop == UnaryOp::Neg) return 3;
    return 5;
}

std::string number_to_string(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print_node(const ExprNode& n, std::string& out) {
    auto child = [&](const ExprNode& c, bool parens) {
        if (parens) out += '(';
        print_node(c, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
        case ExprNode::Kind::Constant: out += number_to_string(n.value); return;
        case ExprNode::Kind::Variable: out += n.var_name; return;
        case ExprNode::Kind::Unary:
            if (n.uop == UnaryOp::Neg) {
                out += '-';
                child(*n.a, precedence(*n.a) < 3);
            } else {
                out += unary_name(n.uop);
                out += '(';
                print_node(*n.a, out);
                out += ')';
            }
            return;
        case ExprNode::Kind::Binary: {
            const int prec = precedence(n);
            const char* op = n.bop == BinaryOp::Add   ? "+"
                             : n.bop == BinaryOp::Sub ? "-"
                             : n.bop == BinaryOp::Mul ? "*"
                             : n.bop == BinaryOp::Div ? "/"
                                                      : "^";
            if (n.bop == BinaryOp::Pow) {
                // right-associative; the parser only accepts constant or
                // negated-constant exponents, printed in parens when negated
                child(*n.a, precedence(*n.a) <= prec);
                out += op;
                child(*n.b, precedence(*n.b) < 5);
            } else {
                child(*n.a, precedence(*n.a) < prec);
                out += op;
                // same-precedence right children keep their parens so the
                // reparse reproduces the tree shape exactly
                child(*n.b, precedence(*n.b) <= prec);
            }
            return;
        }
    }
}

}  // namespace

std::string Expr::to_string() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a token stream
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, Comma, End };
    Kind kind = Kind::End;
    double number = 0.0;
    std::string text;
    char op = 0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.pos = pos();
        if (i_ >= src_.size()) {
            t.kind = Token::Kind::End;
            return t;
        }
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + i_;
            const char* end = src_.data() + src_.size();
            double v = 0;
            auto res = std::from_chars(begin, end, v);
            if (res.ec != std::errc{})
                throw ExprError("malformed number", t.pos);
            advance(static_cast<std::size_t>(res.ptr - begin));
            t.kind = Token::Kind::Number;
            t.number = v;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = src_.substr(i_, j - i_);
            advance(j - i_);
            return t;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                t.kind = Token::Kind::Op;
                t.op = c;
                advance(1);
                return t;
            case '(': t.kind = Token::Kind::LParen; advance(1); return t;
            case ')': t.kind = Token::Kind::RParen; advance(1); return t;
            case ',': t.kind = Token::Kind::Comma; advance(1); return t;
            default:
                throw ExprError(std::string("unexpected character '") + c + "'", t.pos);
        }
    }

    SourcePos pos() const { return {i_, line_, col_}; }

private:
    void skip_ws() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
    }
    void advance(std::size_t n) {
        for (std::size_t j = 0; j < n && i_ < src_.size(); ++j, ++i_) {
            if (src_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }
    const std::string& src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::map<std::string, UnaryOp>& function_table() {
    static const std::map<std::string, UnaryOp> table = {
        {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
        {"acos", UnaryOp::Acos}, {"asin", UnaryOp::Asin}, {"atan", UnaryOp::Atan},
        {"sqrt", UnaryOp::Sqrt}, {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},
        {"abs", UnaryOp::Abs},
    };
    return table;
}

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& chart)
        : lexer_(src), chart_(chart) {
        shift();
    }

    Expr parse() {
        Expr e = parse_sum();
        expect_end();
        return e;
    }

private:
    void shift() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& msg, const SourcePos& pos) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, " at %d:%d (offset %zu)", pos.line, pos.column, pos.offset);
        throw ExprError("syntax error: " + msg + buf, pos);
    }

    void expect_end() {
        if (cur_.kind != Token::Kind::End) fail("trailing input", cur_.pos);
    }

    Expr with_pos(Expr e, SourcePos pos) {
        // nodes are shared immutable; annotate through a const_cast at build
        // time only (the tree is not yet visible to any other owner)
        const_cast<ExprNode*>(e.root().get())->pos = pos;
        return e;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        while (cur_.kind == Token::Kind::Op && (cur_.op == '+' || cur_.op == '-')) {
            const char op = cur_.op;
            const SourcePos pos = cur_.pos;
            shift();
            Expr r = parse_term();
            e = with_pos(Expr::binary(op == '+' ? BinaryOp::Add : BinaryOp::Sub, e, r), pos);
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_unary();
        while (cur_.kind == Token::Kind::Op && (cur_.op == '*' || cur_.op == '/')) {
            const char op = cur_.op;
            const SourcePos pos = cur_.pos;
            shift();
            Expr r = parse_unary();
            e = with_pos(Expr::binary(op == '*' ? BinaryOp::Mul : BinaryOp::Div, e, r), pos);
        }
        return e;
    }

    Expr parse_unary() {
        if (cur_.kind == Token::Kind::Op && cur_.op == '-') {
            const SourcePos pos = cur_.pos;
            shift();
            return with_pos(Expr::unary(UnaryOp::Neg, parse_unary()), pos);
        }
        if (cur_.kind == Token::Kind::Op && cur_.op == '+') {
            shift();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (cur_.kind == Token::Kind::Op && cur_.op == '^') {
            const SourcePos pos = cur_.pos;
            shift();
            const SourcePos epos = cur_.pos;
            Expr exponent = parse_unary();  // right-associative
            const ExprNode* n = exponent.root().get();
            const bool constant =
                n->kind == ExprNode::Kind::Constant ||
                (n->kind == ExprNode::Kind::Unary && n->uop == UnaryOp::Neg &&
                 n->a->kind == ExprNode::Kind::Constant);
            if (!constant) fail("exponent must be a numeric constant", epos);
            return with_pos(Expr::binary(BinaryOp::Pow, base, exponent), pos);
        }
        return base;
    }

    Expr parse_primary() {
        switch (cur_.kind) {
            case Token::Kind::Number: {
                Expr e = with_pos(Expr::constant(cur_.number), cur_.pos);
                shift();
                return e;
            }
            case Token::Kind::LParen: {
                shift();
                Expr e = parse_sum();
                if (cur_.kind != Token::Kind::RParen) fail("expected ')'", cur_.pos);
                shift();
                return e;
            }
            case Token::Kind::Ident: {
                const std::string name = cur_.text;
                const SourcePos pos = cur_.pos;
                shift();
                auto fn = function_table().find(name);
                if (cur_.kind == Token::Kind::LParen) {
                    if (fn == function_table().end())
                        fail("unknown function '" + name + "'", pos);
                    shift();
                    Expr arg = parse_sum();
                    if (cur_.kind == Token::Kind::Comma)
                        fail("function '" + name + "' expects exactly 1 argument", cur_.pos);
                    if (cur_.kind != Token::Kind::RParen) fail("expected ')'", cur_.pos);
                    shift();
                    return with_pos(Expr::unary(fn->second, arg), pos);
                }
                if (fn != function_table().end())
                    fail("function '" + name + "' requires an argument list", pos);
                for (std::size_t i = 0; i < chart_.size(); ++i) {
                    if (chart_[i] == name)
                        return with_pos(Expr::variable(static_cast<int>(i), name), pos);
                }
                fail("unknown identifier '" + name + "'", pos);
            }
            default:
                fail("expected expression", cur_.pos);
        }
    }

    Lexer lexer_;
    const std::vector<std::string>& chart_;
    Token cur_;
};

}  // namespace

Expr parse_expression(const std::string& text, const std::vector<std::string>& chart) {
    Parser parser(text, chart);
    return parser.parse();
}

// ---------------------------------------------------------------------------
// Finite-difference self check
// ---------------------------------------------------------------------------

double finite_diff_check(const Expr& e, const Eigen::VectorXd& p, double h) {
    const int k = static_cast<int>(p.size());
    const Jet2 jet = e.eval_jet2(p);
    auto at = [&](const Eigen::VectorXd& q) { return e.eval(q); };
    double worst = 0.0;
    auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(1.0, std::abs(want));
    };
    const double f0 = at(p);
    // second differences divide by h^2, so rounding noise forces a larger
    // step there (eps / h^2 would swamp h = 1e-5)
    const double h2 = std::max(h, 1e-3);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd pp = p, pm = p;
        pp(i) += h;
        pm(i) -= h;
        worst = std::max(worst, rel((at(pp) - at(pm)) / (2 * h), jet.grad(i)));
        pp(i) = p(i) + h2;
        pm(i) = p(i) - h2;
        worst = std::max(worst, rel((at(pp) - 2 * f0 + at(pm)) / (h2 * h2), jet.hess(i, i)));
        for (int j = i + 1; j < k; ++j) {
            Eigen::VectorXd q1 = p, q2 = p, q3 = p, q4 = p;
            q1(i) += h2; q1(j) += h2;
            q2(i) += h2; q2(j) -= h2;
            q3(i) -= h2; q3(j) += h2;
            q4(i) -= h2; q4(j) -= h2;
            const double mixed = (at(q1) - at(q2) - at(q3) + at(q4)) / (4 * h2 * h2);
            worst = std::max(worst, rel(mixed, jet.hess(i, j)));
        }
    }
    return worst;
}

}  // namespace bislant
