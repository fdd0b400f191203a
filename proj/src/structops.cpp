#include "bislant/structops.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bislant {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kPi = std::numbers::pi;

}  // namespace

DirectionSequence::DirectionSequence(std::uint64_t seed, int dim)
    : state_(seed ^ 0xa0761d6478bd642fULL), dim_(dim) {}

double DirectionSequence::next_uniform() {
    const std::uint64_t bits = splitmix64(state_);
    // 53-bit mantissa in (0,1); never exactly 0
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

Eigen::VectorXd DirectionSequence::next() {
    while (true) {
        Eigen::VectorXd v(dim_);
        for (int i = 0; i < dim_; i += 2) {
            const double u1 = next_uniform();
            const double u2 = next_uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            v(i) = r * std::cos(2.0 * kPi * u2);
            if (i + 1 < dim_) v(i + 1) = r * std::sin(2.0 * kPi * u2);
        }
        const double n = v.norm();
        if (n > 1e-8) return v / n;
    }
}

PointwiseOps pointwise_ops(const ProductStructure& F, const Frame& frame) {
    if (F.n != frame.jacobian.rows())
        throw StructureError("ambient structure and frame dimensions do not match");
    PointwiseOps ops;
    const Eigen::MatrixXd FJ = F.F * frame.jacobian;          // n x k
    const Eigen::MatrixXd FN = F.F * frame.normal;            // n x (n-k)
    ops.T = frame.gram_solve(frame.jacobian.transpose() * FJ);  // gram T = J^T F J
    ops.W = frame.normal.transpose() * FJ;
    ops.B = frame.gram_solve(frame.jacobian.transpose() * FN);
    ops.C = frame.normal.transpose() * FN;
    return ops;
}

double slant_angle(const PointwiseOps& ops, const Frame& frame, const Eigen::VectorXd& x) {
    const double nx = frame.norm(x);
    if (!(nx > 0.0)) throw std::invalid_argument("slant_angle: zero direction");
    const double nt = frame.norm(ops.T * x);
    const double nw = (ops.W * x).norm();  // orthonormal normal basis
    if (nw < tol::kSlantSnap * nx) return 0.0;
    if (nt < tol::kSlantSnap * nx) return kPi / 2.0;
    double c = nt / nx;
    c = std::min(1.0, std::max(0.0, c));
    return std::acos(c);
}

const char* to_string(SlantTag t) {
    switch (t) {
        case SlantTag::Invariant: return "invariant";
        case SlantTag::AntiInvariant: return "anti-invariant";
        case SlantTag::PointwiseSlant: return "pointwise-slant";
        case SlantTag::NotSlant: return "not-slant";
    }
    return "?";
}

const char* to_string(DistClass c) {
    switch (c) {
        case DistClass::Invariant: return "invariant";
        case DistClass::AntiInvariant: return "anti-invariant";
        case DistClass::SlantConstant: return "slant-constant";
        case DistClass::PointwiseSlant: return "pointwise-slant";
        case DistClass::None: return "none";
    }
    return "?";
}

Eigen::MatrixXd distribution_basis(const Distribution& dist, const Frame& frame) {
    const int k = static_cast<int>(frame.gram.rows());
    const int r = dist.rank();
    Eigen::MatrixXd E(k, r);
    for (int j = 0; j < r; ++j)
        E.col(j) = dist.fields[static_cast<std::size_t>(j)].eval(frame.point);
    // independence in the induced metric
    const Eigen::MatrixXd G = E.transpose() * frame.gram * E;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > kGramCondLimit) {
        std::ostringstream os;
        os << "distribution " << dist.name << " has linearly dependent fields at (";
        for (int i = 0; i < frame.point.size(); ++i) os << (i ? ", " : "") << frame.point(i);
        os << ")";
        throw SpecError(os.str());
    }
    return E;
}

namespace {

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return s;
}

SlantSample sample_slant(const ImmersionSpec& spec, const Distribution& dist,
                         const Eigen::VectorXd& p, int probes, std::uint64_t probe_seed) {
    const Frame frame = frame_at(spec, p);
    const PointwiseOps ops = pointwise_ops(spec.ambient, frame);
    const Eigen::MatrixXd E = distribution_basis(dist, frame);
    const int r = static_cast<int>(E.cols());

    SlantSample s;
    s.point = p;
    s.dist = dist.name;
    DirectionSequence dirs(probe_seed, r);
    double lo = kPi, hi = 0.0, sum = 0.0;
    for (int q = 0; q < probes; ++q) {
        const Eigen::VectorXd x = E * dirs.next();
        const double theta = slant_angle(ops, frame, x);
        s.angles.push_back(theta);
        lo = std::min(lo, theta);
        hi = std::max(hi, theta);
        sum += theta;
    }
    s.mean = sum / probes;
    s.spread = hi - lo;
    if (s.spread < tol::kSlantSpread) {
        if (s.mean < tol::kSlantSpread)
            s.tag = SlantTag::Invariant;
        else if (s.mean > kPi / 2.0 - tol::kSlantSpread)
            s.tag = SlantTag::AntiInvariant;
        else
            s.tag = SlantTag::PointwiseSlant;
    } else {
        s.tag = SlantTag::NotSlant;
    }

    // eigen-form: T restricted to the distribution squares to cos^2(theta) I.
    // Coordinates of T E_j in the distribution basis via the g-projection.
    const Eigen::MatrixXd G = E.transpose() * frame.gram * E;
    const Eigen::MatrixXd Td = G.ldlt().solve(E.transpose() * frame.gram * (ops.T * E));
    const double c2 = std::cos(s.mean) * std::cos(s.mean);
    s.t_square_residual =
        (Td * Td - c2 * Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    if (s.tag != SlantTag::NotSlant && s.t_square_residual > tol::kTSquare)
        s.tag = SlantTag::NotSlant;
    return s;
}

}  // namespace

double slant_angle_at(const ImmersionSpec& spec, const Distribution& dist,
                      const Eigen::VectorXd& p, int probes, std::uint64_t seed) {
    return sample_slant(spec, dist, p, probes, seed).mean;
}

SlantFunction slant_function(const ImmersionSpec& spec, const std::string& dist,
                             const std::vector<Eigen::VectorXd>& points, int probes,
                             std::uint64_t seed) {
    const Distribution* d = spec.find_distribution(dist);
    if (!d) throw SpecError("unknown distribution '" + dist + "'");
    if (probes < 2 * d->rank())
        throw SpecError("slant_function needs at least 2*rank probe directions");

    SlantFunction out;
    out.dist = dist;
    out.samples.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.samples.push_back(sample_slant(spec, *d, points[i], probes, point_seed(seed, i)));

    bool all_pointwise = true, all_invariant = true, all_anti = true;
    double lo = kPi, hi = 0.0;
    for (const auto& s : out.samples) {
        all_pointwise = all_pointwise && s.tag != SlantTag::NotSlant;
        all_invariant = all_invariant && s.tag == SlantTag::Invariant;
        all_anti = all_anti && s.tag == SlantTag::AntiInvariant;
        lo = std::min(lo, s.mean);
        hi = std::max(hi, s.mean);
    }
    out.theta_min = lo;
    out.theta_max = hi;
    if (out.samples.empty())
        out.classification = DistClass::None;
    else if (all_invariant)
        out.classification = DistClass::Invariant;
    else if (all_anti)
        out.classification = DistClass::AntiInvariant;
    else if (all_pointwise)
        out.classification =
            (hi - lo < tol::kSlantSpread) ? DistClass::SlantConstant : DistClass::PointwiseSlant;
    else
        out.classification = DistClass::None;
    return out;
}

std::vector<IdentityCheck> check_eq_2_8_2_9(const ImmersionSpec& spec, const std::string& dist,
                                            const std::vector<Eigen::VectorXd>& points,
                                            std::uint64_t seed) {
    const Distribution* d = spec.find_distribution(dist);
    if (!d) throw SpecError("unknown distribution '" + dist + "'");
    const std::string suite = "eq2";
    const std::string a28a = "g(TX,TY) = (cos^2 theta) g(X,Y)";
    const std::string a28b = "g(wX,wY) = (sin^2 theta) g(X,Y)";
    const std::string a29a = "Bw X = (sin^2 theta) X";
    const std::string a29b = "Cw X = -w T X";

    std::vector<IdentityCheck> checks;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::VectorXd& p = points[i];
        const Frame frame = frame_at(spec, p);
        const PointwiseOps ops = pointwise_ops(spec.ambient, frame);
        const Eigen::MatrixXd E = distribution_basis(*d, frame);
        const int r = static_cast<int>(E.cols());
        const std::uint64_t ps = point_seed(seed, i);
        const SlantSample ss = sample_slant(spec, *d, p, std::max(4, 2 * r), ps);
        const std::string label = dist + "/pair";

        if (ss.tag == SlantTag::NotSlant) {
            checks.push_back(IdentityCheck::skip(suite, dist, a28a, p,
                                                 "distribution is not pointwise slant here"));
            continue;
        }
        const double c2 = std::cos(ss.mean) * std::cos(ss.mean);
        const double s2 = std::sin(ss.mean) * std::sin(ss.mean);

        DirectionSequence dirs(ps ^ 0x5bf03635ULL, r);
        for (int pair = 0; pair < 4; ++pair) {
            const Eigen::VectorXd X = E * dirs.next();
            const Eigen::VectorXd Y = E * dirs.next();
            const double nX = frame.norm(X), nY = frame.norm(Y);
            const double scale = nX * nY;

            const double lhs1 = frame.inner(ops.T * X, ops.T * Y);
            const double rhs1 = c2 * frame.inner(X, Y);
            checks.push_back(IdentityCheck::make(suite, label + std::to_string(pair), a28a, p,
                                                 lhs1, rhs1, std::abs(lhs1 - rhs1) / scale,
                                                 tol::kEq28));

            const double lhs2 = (ops.W * X).dot(ops.W * Y);
            const double rhs2 = s2 * frame.inner(X, Y);
            checks.push_back(IdentityCheck::make(suite, label + std::to_string(pair), a28b, p,
                                                 lhs2, rhs2, std::abs(lhs2 - rhs2) / scale,
                                                 tol::kEq28));

            const Eigen::VectorXd bw = ops.B * (ops.W * X) - s2 * X;
            checks.push_back(IdentityCheck::make(suite, label + std::to_string(pair), a29a, p,
                                                 frame.norm(ops.B * (ops.W * X)),
                                                 frame.norm(s2 * X), frame.norm(bw) / nX,
                                                 tol::kEq29));

            const Eigen::VectorXd cw = ops.C * (ops.W * X) + ops.W * (ops.T * X);
            checks.push_back(IdentityCheck::make(suite, label + std::to_string(pair), a29b, p,
                                                 (ops.C * (ops.W * X)).norm(),
                                                 (ops.W * (ops.T * X)).norm(), cw.norm() / nX,
                                                 tol::kEq29));
        }
    }
    return checks;
}

}  // namespace bislant
