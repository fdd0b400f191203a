#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace bislant {

/// Flat R^n with the Euclidean metric and a constant almost product
/// structure F (F^2 = I, F != +-I, F^T F = I). Constant F makes the ambient
/// locally product Riemannian.
struct ProductStructure {
    int n = 0;
    Eigen::MatrixXd F;
    bool signature_mask = false;  // F is diagonal +-1

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
};

struct StructureReport {
    double involution_residual = 0.0;  // max |F^2 - I|
    double isometry_residual = 0.0;    // max |F^T F - I|
    bool trivial = false;              // F == I or F == -I
    bool valid = false;                // involutive isometric, non-trivial
    std::string message;
};

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Diagonal structure from a +-1 signature. Requires a mixed signature
/// (all-equal would give the trivial structure F = +-I).
ProductStructure make_signature_structure(const std::vector<int>& signs);

/// General matrix structure, validated to tolerance 1e-12.
ProductStructure make_matrix_structure(const Eigen::MatrixXd& F);

/// Report-style validation; accepts any square matrix.
StructureReport validate_structure(const Eigen::MatrixXd& F);

/// F*v with dimension check.
Eigen::VectorXd apply_structure(const ProductStructure& s, const Eigen::VectorXd& v);

}  // namespace bislant
