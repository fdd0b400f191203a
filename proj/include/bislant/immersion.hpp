#pragma once

#include "bislant/ambient.hpp"
#include "bislant/expr.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bislant {

class SpecError : public std::runtime_error {
public:
    SpecError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                      : std::move(msg)),
          line_no(line) {}
    int line_no;
};

class SingularPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tangent vector field on the chart: sum of coeff[i] * d/du_i.
struct TangentField {
    std::vector<Expr> coeff;  // k expressions
    std::string display;      // as written in the spec file

    Eigen::VectorXd eval(const Eigen::VectorXd& p) const;
    /// coefficient values + their chart gradients (rows: coeff, cols: d/du)
    void eval_jet(const Eigen::VectorXd& p, Eigen::VectorXd& value, Eigen::MatrixXd& grad) const;
};

/// Field-wise sum X + Y (no simplification; ASTs are combined).
TangentField field_sum(const TangentField& x, const TangentField& y);

struct Distribution {
    std::string name;
    std::vector<TangentField> fields;
    int rank() const { return static_cast<int>(fields.size()); }
};

struct WarpedClaim {
    std::string base;   // distribution name
    std::string fiber;  // distribution name
    Expr f;             // claimed warping function (of chart coordinates)
    std::string f_text;
};

struct SlantClaim {
    std::string dist;
    Expr theta;  // claimed slant angle expression
    std::string theta_text;
};

struct ImmersionSpec {
    std::vector<std::string> chart;               // k coordinate names
    std::vector<std::array<double, 2>> domain;    // per coordinate [lo, hi]
    ProductStructure ambient;                     // n, F
    std::vector<Expr> components;                 // n expressions
    std::vector<Distribution> distributions;
    std::vector<SlantClaim> slant_claims;
    std::optional<WarpedClaim> warped_claim;
    std::optional<Expr> mu_claim;                 // for the characterization when no warped claim
    std::string mu_claim_text;
    std::string source_text;                      // verbatim file contents

    int chart_dim() const { return static_cast<int>(chart.size()); }
    int ambient_dim() const { return ambient.n; }
    const Distribution* find_distribution(const std::string& name) const;
    const SlantClaim* find_slant_claim(const std::string& dist) const;
};

/// Parse the line-oriented spec format (see docs/dsl.md).
ImmersionSpec load_spec(const std::string& text);
ImmersionSpec load_spec_file(const std::string& path);

/// Tangent frame at a chart point.
struct Frame {
    Eigen::VectorXd point;    // k
    Eigen::MatrixXd jacobian; // n x k, columns d(chi)/du_i
    Eigen::MatrixXd gram;     // k x k, J^T J
    Eigen::MatrixXd normal;   // n x (n-k), orthonormal, spans ker J^T
    double gram_cond = 0.0;

    /// Solve gram * x = rhs (SPD); rhs may have any number of columns.
    Eigen::MatrixXd gram_solve(const Eigen::MatrixXd& rhs) const;
    /// <x, y>_g for tangent coefficient vectors.
    double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    double norm(const Eigen::VectorXd& x) const;
};

/// Threshold on the Gram condition number beyond which a point counts as
/// singular.
constexpr double kGramCondLimit = 1e10;

Frame frame_at(const ImmersionSpec& spec, const Eigen::VectorXd& p);

/// Second derivatives d2chi/du_i du_j as ambient vectors; exactly symmetric.
struct SecondDerivatives {
    std::vector<std::vector<Eigen::VectorXd>> H;  // [k][k] -> n-vector
};

SecondDerivatives second_derivatives_at(const ImmersionSpec& spec, const Eigen::VectorXd& p);

struct SampleSet {
    std::vector<Eigen::VectorXd> points;
    int requested = 0;
    int dropped = 0;
};

/// Deterministic low-discrepancy sample of the domain box. Drops singular
/// points and points where a claimed expression leaves its domain; errors
/// out if fewer than count/2 of the candidates survive.
SampleSet sample_domain(const ImmersionSpec& spec, int count, std::uint64_t seed);

}  // namespace bislant
