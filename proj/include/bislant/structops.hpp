#pragma once

#include "bislant/check.hpp"
#include "bislant/immersion.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bislant {

/// The structure F split along TM (+) T^perp M at a frame, in frame
/// coordinates: for tangent coefficients x and normal coordinates nu,
///   F(J x)      = J (T x) + normal (W x)
///   F(normal nu) = J (B nu) + normal (C nu)
struct PointwiseOps {
    Eigen::MatrixXd T;  // k x k (tangential part of F on TM)
    Eigen::MatrixXd W;  // (n-k) x k (omega in the chosen normal basis)
    Eigen::MatrixXd B;  // k x (n-k)
    Eigen::MatrixXd C;  // (n-k) x (n-k)
};

PointwiseOps pointwise_ops(const ProductStructure& F, const Frame& frame);

/// Wirtinger angle of the tangent direction x: cos(theta) = |Tx|_g / |x|_g,
/// snapped to exactly 0 / pi/2 when the complementary part is below
/// tol::kSlantSnap relative to |x|_g.
double slant_angle(const PointwiseOps& ops, const Frame& frame, const Eigen::VectorXd& x);

enum class SlantTag { Invariant, AntiInvariant, PointwiseSlant, NotSlant };

/// Aggregate classification of a distribution over a point set.
enum class DistClass { Invariant, AntiInvariant, SlantConstant, PointwiseSlant, None };

const char* to_string(SlantTag t);
const char* to_string(DistClass c);

struct SlantSample {
    Eigen::VectorXd point;
    std::string dist;
    std::vector<double> angles;  // per probe direction
    double mean = 0.0;
    double spread = 0.0;         // max - min over probes
    SlantTag tag = SlantTag::NotSlant;
    double t_square_residual = 0.0;  // | T|_D^2 - cos^2(mean) I |
};

struct SlantFunction {
    std::string dist;
    std::vector<SlantSample> samples;
    DistClass classification = DistClass::None;
    double theta_min = 0.0, theta_max = 0.0;
};

/// Evaluate the slant function of a declared distribution over sample points
/// with `probes` deterministic directions per point (seeded).
SlantFunction slant_function(const ImmersionSpec& spec, const std::string& dist,
                             const std::vector<Eigen::VectorXd>& points, int probes,
                             std::uint64_t seed);

/// Mean slant angle of a distribution at a single chart point with a fixed
/// probe seed; used where the angle is differentiated as a field.
double slant_angle_at(const ImmersionSpec& spec, const Distribution& dist,
                      const Eigen::VectorXd& p, int probes, std::uint64_t seed);

/// Residual suite for g(TX,TY) = cos^2(theta) g(X,Y),
/// g(wX,wY) = sin^2(theta) g(X,Y), Bw X = sin^2(theta) X, Cw X = -w T X
/// over seeded direction pairs inside the distribution.
std::vector<IdentityCheck> check_eq_2_8_2_9(const ImmersionSpec& spec, const std::string& dist,
                                            const std::vector<Eigen::VectorXd>& points,
                                            std::uint64_t seed);

/// Deterministic unit directions for probing (splitmix64 + Box-Muller).
class DirectionSequence {
public:
    DirectionSequence(std::uint64_t seed, int dim);
    Eigen::VectorXd next();  // unit vector in R^dim

private:
    double next_uniform();   // in (0,1)
    std::uint64_t state_;
    int dim_;
};

/// Basis matrix (k x rank) of a distribution's fields evaluated at p;
/// throws if the fields are linearly dependent there.
Eigen::MatrixXd distribution_basis(const Distribution& dist, const Frame& frame);

}  // namespace bislant
