#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bislant {

/// Location of a token or AST node in the source text.
struct SourcePos {
    std::size_t offset = 0;  // byte offset
    int line = 1;
    int column = 1;
};

/// Error raised by the expression parser and evaluators. Messages carry
/// line:column so that multi-line spec files produce usable diagnostics.
class ExprError : public std::runtime_error {
public:
    ExprError(std::string msg, SourcePos where)
        : std::runtime_error(std::move(msg)), pos(where) {}
    SourcePos pos;
};

/// Second-order forward-mode jet: value, gradient and Hessian with respect
/// to the chart coordinates. The Hessian is symmetric by construction: every
/// arithmetic rule below only ever adds symmetric matrices.
struct Jet2 {
    double value = 0.0;
    Eigen::VectorXd grad;   // k
    Eigen::MatrixXd hess;   // k x k

    static Jet2 constant(double c, int k);
    static Jet2 variable(double x, int index, int k);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);

enum class UnaryOp { Neg, Sin, Cos, Tan, Acos, Asin, Atan, Sqrt, Exp, Log, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, Variable, Unary, Binary };
    Kind kind;
    double value = 0.0;        // Constant
    int var_index = -1;        // Variable
    std::string var_name;      // Variable
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    ExprNodePtr a, b;          // Unary uses a only
    SourcePos pos;
};

/// Immutable expression over a fixed chart. Copies share the tree.
class Expr {
public:
    Expr() = default;

    static Expr constant(double c);
    static Expr variable(int index, std::string name);
    static Expr unary(UnaryOp op, Expr child);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    bool valid() const { return root_ != nullptr; }

    /// Plain evaluation. Throws ExprError on domain violations (division by
    /// zero, log of non-positive, acos/asin outside [-1,1], ...).
    double eval(std::span<const double> point) const;
    double eval(const Eigen::VectorXd& point) const;

    /// Forward-mode value + gradient + Hessian. Stricter domain than eval():
    /// points where a derivative is unbounded (sqrt at 0, acos at +-1,
    /// abs at 0) are rejected.
    Jet2 eval_jet2(std::span<const double> point) const;
    Jet2 eval_jet2(const Eigen::VectorXd& point) const;

    /// Print in grammar syntax; parse_expression(to_string()) reproduces a
    /// structurally equal tree.
    std::string to_string() const;

    bool structurally_equal(const Expr& other) const;

    const ExprNodePtr& root() const { return root_; }

private:
    explicit Expr(ExprNodePtr r) : root_(std::move(r)) {}
    ExprNodePtr root_;
};

/// Parse `text` over the given chart coordinate names.
/// Grammar: numbers, chart variables, + - * / ^ (right-associative), unary
/// minus, the unary functions of UnaryOp, and parentheses. Exponents must be
/// numeric constants (optionally negated).
Expr parse_expression(const std::string& text, const std::vector<std::string>& chart);

/// Max relative deviation between forward-mode grad/hess and central finite
/// differences with step h. Self-test facility, not used by production paths.
double finite_diff_check(const Expr& e, const Eigen::VectorXd& p, double h);

}  // namespace bislant
