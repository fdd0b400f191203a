#pragma once

#include "bislant/check.hpp"
#include "bislant/immersion.hpp"
#include "bislant/structops.hpp"

#include <functional>
#include <utility>

namespace bislant {

/// Second fundamental form and induced connection at a frame, from the flat
/// ambient: each d2chi/du_i du_j splits into J * christoffel[i][j] (tangent)
/// + normal * sigma[i][j]. The tangential coefficients are the Christoffel
/// symbols of the induced metric.
struct SecondFundamental {
    std::vector<std::vector<Eigen::VectorXd>> sigma;        // [k][k] -> (n-k) normal coords
    std::vector<std::vector<Eigen::VectorXd>> christoffel;  // [k][k] -> k tangent coords

    /// sigma(X, Y) for tangent coefficient vectors, in normal coordinates.
    Eigen::VectorXd sigma_of(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    /// Gamma(X, Y) = sum_ij x_i y_j nabla_{d_i} d_j, tangent coordinates.
    Eigen::VectorXd gamma_of(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

SecondFundamental second_fundamental(const ImmersionSpec& spec, const Eigen::VectorXd& p);
SecondFundamental second_fundamental(const Frame& frame, const SecondDerivatives& sd);

/// Gamma^l_ij from central finite differences of the Gram field
/// (independent cross-check of the projection construction).
std::vector<std::vector<Eigen::VectorXd>> christoffel_from_metric(const ImmersionSpec& spec,
                                                                  const Eigen::VectorXd& p,
                                                                  double h = tol::kFiniteDiffStep);

/// Shape operator A_N (k x k) for N in normal coordinates at the frame:
/// gram A_N = [<sigma(d_i, d_j), N>].
Eigen::MatrixXd shape_operator(const Frame& frame, const SecondFundamental& sf,
                               const Eigen::VectorXd& N);
Eigen::MatrixXd shape_operator(const ImmersionSpec& spec, const Eigen::VectorXd& p,
                               const Eigen::VectorXd& N);

/// Split the ambient directional derivative of a normal field along the
/// tangent direction x into (tangential coefficients, normal coordinates).
/// The field maps chart points near p to ambient vectors that must be normal
/// there. Central differences with the given step.
std::pair<Eigen::VectorXd, Eigen::VectorXd> weingarten_split(
    const ImmersionSpec& spec, const Eigen::VectorXd& p,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& normal_field,
    const Eigen::VectorXd& x, double h = tol::kFiniteDiffStep);

/// Full Gauss/Weingarten suite: reconstruction of the ambient Hessian, the
/// shape-operator duality, the differenced Weingarten formula on omega of the
/// declared distribution fields, and the agreement of the two Christoffel
/// constructions.
std::vector<IdentityCheck> check_gauss_weingarten(const ImmersionSpec& spec,
                                                  const std::vector<Eigen::VectorXd>& points,
                                                  std::uint64_t seed);

/// nabla_X Y in tangent coordinates for expression-coefficient fields:
/// exact chain-rule assembly, no differencing.
Eigen::VectorXd covariant_derivative(const Frame& frame, const SecondFundamental& sf,
                                     const TangentField& X, const TangentField& Y);

/// Ambient-valued omega field of a tangent field: q -> normal component of
/// F (J(q) x(q)); usable as a Weingarten normal_field.
std::function<Eigen::VectorXd(const Eigen::VectorXd&)> omega_field(const ImmersionSpec& spec,
                                                                   const TangentField& X);

}  // namespace bislant
