#pragma once

#include "bislant/check.hpp"
#include "bislant/conn.hpp"
#include "bislant/immersion.hpp"
#include "bislant/structops.hpp"

#include <optional>

namespace bislant {

struct DistributionAt {
    std::string name;
    Eigen::MatrixXd basis;      // k x r tangent coefficient columns
    Eigen::MatrixXd projector;  // k x k g-orthogonal projection onto the span
};

/// Both distributions at a point, with P_i and T_i = P_i T.
struct SplitAt {
    DistributionAt d1, d2;
    Eigen::MatrixXd P1, P2;
    Eigen::MatrixXd T1, T2;
    Frame frame;
    PointwiseOps ops;
};

/// Requires exactly two declared distributions, g-orthogonal at p and of
/// full combined rank; throws SpecError otherwise.
SplitAt projectors_at(const ImmersionSpec& spec, const Eigen::VectorXd& p);

struct AxiomWitness {
    std::string dist_x, dist_z;
    int field_x = 0, field_z = 0;
    Eigen::VectorXd point;
    double value = 0.0;
};

struct AxiomReport {
    bool rank_pass = true;          // (a) TM = D1 (+) D2 (with g-orthogonality)
    bool cross_pass = true;         // (b) F D1 perp D2 and F D2 perp D1
    bool slant_pass = true;         // (c) both distributions pointwise slant
    bool invariance_pass = true;    // T(D_i) in D_i
    std::optional<AxiomWitness> cross_witness;
    std::string failure;            // human-readable first failure
    SlantFunction theta1, theta2;
    double max_cross = 0.0;         // worst scaled |g(FX, Z)|
    double max_invariance = 0.0;
    bool pass() const { return rank_pass && cross_pass && slant_pass && invariance_pass; }
    bool proper = false;            // both angles away from 0 and pi/2 everywhere
};

AxiomReport check_bislant_axioms(const ImmersionSpec& spec,
                                 const std::vector<Eigen::VectorXd>& points, int probes,
                                 std::uint64_t seed);

struct BracketResidual {
    Eigen::VectorXd point;
    int field_a = 0, field_b = 0;
    double residual = 0.0;  // |(I - P)[X, Z]|_g
};

struct IntegrabilityReport {
    std::string dist;
    bool trivially_integrable = false;  // rank 1
    std::vector<BracketResidual> residuals;
    double max_residual = 0.0;
    bool pass = true;
};

IntegrabilityReport integrability(const ImmersionSpec& spec, const std::string& dist,
                                  const std::vector<Eigen::VectorXd>& points);

/// Probe fields for multilinear identity suites: the declared basis fields
/// plus their pairwise sums.
std::vector<TangentField> probe_fields(const Distribution& dist);

std::vector<IdentityCheck> check_lemma_3_2(const ImmersionSpec& spec,
                                           const std::vector<Eigen::VectorXd>& points, int probes,
                                           std::uint64_t seed);

std::vector<IdentityCheck> check_corollary_3_3(const ImmersionSpec& spec,
                                               const std::vector<Eigen::VectorXd>& points,
                                               int probes, std::uint64_t seed);

}  // namespace bislant
