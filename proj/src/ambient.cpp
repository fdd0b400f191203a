#include "bislant/ambient.hpp"

namespace bislant {

namespace {
constexpr double kValidateTol = 1e-12;
}

Eigen::VectorXd ProductStructure::apply(const Eigen::VectorXd& v) const {
    return apply_structure(*this, v);
}

ProductStructure make_signature_structure(const std::vector<int>& signs) {
    const int n = static_cast<int>(signs.size());
    if (n < 2) throw StructureError("signature needs dimension >= 2");
    bool has_plus = false, has_minus = false;
    for (int s : signs) {
        if (s == 1) has_plus = true;
        else if (s == -1) has_minus = true;
        else throw StructureError("signature entries must be +1 or -1");
    }
    if (!has_plus || !has_minus)
        throw StructureError("all-equal signature gives the trivial structure F = +-I");
    ProductStructure ps;
    ps.n = n;
    ps.F = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) ps.F(i, i) = static_cast<double>(signs[i]);
    ps.signature_mask = true;
    return ps;
}

ProductStructure make_matrix_structure(const Eigen::MatrixXd& F) {
    const StructureReport rep = validate_structure(F);
    if (!rep.valid) throw StructureError("invalid product structure: " + rep.message);
    ProductStructure ps;
    ps.n = static_cast<int>(F.rows());
    ps.F = F;
    ps.signature_mask = F.isDiagonal(0.0) && (F.diagonal().array().abs() == 1.0).all();
    return ps;
}

StructureReport validate_structure(const Eigen::MatrixXd& F) {
    StructureReport rep;
    if (F.rows() != F.cols()) {
        rep.message = "matrix not square";
        return rep;
    }
    const int n = static_cast<int>(F.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    rep.involution_residual = (F * F - I).cwiseAbs().maxCoeff();
    rep.isometry_residual = (F.transpose() * F - I).cwiseAbs().maxCoeff();
    rep.trivial = (F - I).cwiseAbs().maxCoeff() < kValidateTol ||
                  (F + I).cwiseAbs().maxCoeff() < kValidateTol;
    if (rep.involution_residual > kValidateTol) {
        rep.message = "F^2 != I";
    } else if (rep.isometry_residual > kValidateTol) {
        rep.message = "F^T F != I";
    } else if (rep.trivial) {
        rep.message = "trivial structure (F = +-I)";
    } else {
        rep.valid = true;
        rep.message = "ok";
    }
    return rep;
}

Eigen::VectorXd apply_structure(const ProductStructure& s, const Eigen::VectorXd& v) {
    if (v.size() != s.n) throw StructureError("vector dimension does not match structure");
    if (s.signature_mask) return s.F.diagonal().cwiseProduct(v);
    return s.F * v;
}

}  // namespace bislant
