#include "bislant/dist.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bislant {

namespace {

Eigen::MatrixXd g_projector(const Eigen::MatrixXd& E, const Eigen::MatrixXd& gram) {
    // P = E (E^T G E)^{-1} E^T G
    const Eigen::MatrixXd G = E.transpose() * gram * E;
    return E * G.ldlt().solve(E.transpose() * gram);
}

std::string point_str(const Eigen::VectorXd& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
    os << ")";
    return os.str();
}

}  // namespace

SplitAt projectors_at(const ImmersionSpec& spec, const Eigen::VectorXd& p) {
    if (spec.distributions.size() != 2)
        throw SpecError("bi-slant machinery needs exactly two declared distributions, got " +
                        std::to_string(spec.distributions.size()));
    SplitAt s;
    s.frame = frame_at(spec, p);
    s.ops = pointwise_ops(spec.ambient, s.frame);
    const Distribution& d1 = spec.distributions[0];
    const Distribution& d2 = spec.distributions[1];
    s.d1.name = d1.name;
    s.d2.name = d2.name;
    s.d1.basis = distribution_basis(d1, s.frame);
    s.d2.basis = distribution_basis(d2, s.frame);

    // g-orthogonality of the two spans
    for (int i = 0; i < s.d1.basis.cols(); ++i) {
        for (int j = 0; j < s.d2.basis.cols(); ++j) {
            const Eigen::VectorXd x = s.d1.basis.col(i);
            const Eigen::VectorXd z = s.d2.basis.col(j);
            const double v = std::abs(s.frame.inner(x, z)) / (s.frame.norm(x) * s.frame.norm(z));
            if (v > tol::kAxiomB)
                throw SpecError("distributions " + d1.name + " and " + d2.name +
                                " are not g-orthogonal at " + point_str(p) +
                                " (witness fields " + std::to_string(i) + "," +
                                std::to_string(j) + ", |g| = " + std::to_string(v) + ")");
        }
    }
    if (d1.rank() + d2.rank() != spec.chart_dim())
        throw SpecError("distribution ranks do not fill the tangent space");

    s.d1.projector = g_projector(s.d1.basis, s.frame.gram);
    s.d2.projector = g_projector(s.d2.basis, s.frame.gram);
    s.P1 = s.d1.projector;
    s.P2 = s.d2.projector;
    s.T1 = s.P1 * s.ops.T;
    s.T2 = s.P2 * s.ops.T;
    return s;
}

AxiomReport check_bislant_axioms(const ImmersionSpec& spec,
                                 const std::vector<Eigen::VectorXd>& points, int probes,
                                 std::uint64_t seed) {
    if (spec.distributions.size() != 2)
        throw SpecError("bi-slant axioms need exactly two declared distributions");
    const Distribution& d1 = spec.distributions[0];
    const Distribution& d2 = spec.distributions[1];

    AxiomReport rep;

    for (const Eigen::VectorXd& p : points) {
        const Frame frame = frame_at(spec, p);
        const Eigen::MatrixXd E1 = distribution_basis(d1, frame);
        const Eigen::MatrixXd E2 = distribution_basis(d2, frame);

        // (a) combined rank = chart dimension, with a g-orthogonal direct sum
        if (d1.rank() + d2.rank() != spec.chart_dim()) {
            rep.rank_pass = false;
            if (rep.failure.empty())
                rep.failure = "(a) declared ranks do not sum to the chart dimension";
        } else {
            Eigen::MatrixXd E(spec.chart_dim(), d1.rank() + d2.rank());
            E << E1, E2;
            const Eigen::MatrixXd G = E.transpose() * frame.gram * E;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
            if (!(es.eigenvalues().minCoeff() > 0.0) ||
                es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() > kGramCondLimit) {
                rep.rank_pass = false;
                if (rep.failure.empty())
                    rep.failure = "(a) combined basis is rank deficient at " + point_str(p);
            }
        }

        // orthogonality of the two spans (part of the definition of the pair)
        for (int i = 0; i < E1.cols() && rep.rank_pass; ++i) {
            for (int j = 0; j < E2.cols(); ++j) {
                const double v = std::abs(frame.inner(E1.col(i), E2.col(j))) /
                                 (frame.norm(E1.col(i)) * frame.norm(E2.col(j)));
                if (v > tol::kAxiomB) {
                    rep.rank_pass = false;
                    if (rep.failure.empty())
                        rep.failure = "(a) D1 and D2 are not g-orthogonal at " + point_str(p);
                    break;
                }
            }
        }

        // (b) g(F X, Z) = 0 for X in D1, Z in D2 (and symmetrically)
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::MatrixXd& Ex = pass == 0 ? E1 : E2;
            const Eigen::MatrixXd& Ez = pass == 0 ? E2 : E1;
            for (int i = 0; i < Ex.cols(); ++i) {
                for (int j = 0; j < Ez.cols(); ++j) {
                    const Eigen::VectorXd FX =
                        spec.ambient.F * (frame.jacobian * Ex.col(i));
                    const double val = std::abs(FX.dot(frame.jacobian * Ez.col(j))) /
                                       (frame.norm(Ex.col(i)) * frame.norm(Ez.col(j)));
                    rep.max_cross = std::max(rep.max_cross, val);
                    if (val > tol::kAxiomB && !rep.cross_witness) {
                        rep.cross_pass = false;
                        AxiomWitness w;
                        w.dist_x = pass == 0 ? d1.name : d2.name;
                        w.dist_z = pass == 0 ? d2.name : d1.name;
                        w.field_x = i;
                        w.field_z = j;
                        w.point = p;
                        w.value = val;
                        rep.cross_witness = w;
                        if (rep.failure.empty()) {
                            std::ostringstream os;
                            os << "(b) |g(F " << w.dist_x << "[" << i << "], " << w.dist_z << "["
                               << j << "])| = " << val << " at " << point_str(p);
                            rep.failure = os.str();
                        }
                    }
                }
            }
        }
    }

    // (c) pointwise slant classification, plus Eq 3.1 invariance
    rep.theta1 = slant_function(spec, d1.name, points, std::max(probes, 2 * d1.rank()), seed);
    rep.theta2 = slant_function(spec, d2.name, points, std::max(probes, 2 * d2.rank()), seed + 1);
    auto slant_ok = [](DistClass c) { return c != DistClass::None; };
    if (!slant_ok(rep.theta1.classification) || !slant_ok(rep.theta2.classification)) {
        rep.slant_pass = false;
        if (rep.failure.empty())
            rep.failure = "(c) a distribution is not pointwise slant";
    }

    if (rep.rank_pass) {
        for (const Eigen::VectorXd& p : points) {
            const SplitAt s = projectors_at(spec, p);
            const Eigen::MatrixXd I =
                Eigen::MatrixXd::Identity(spec.chart_dim(), spec.chart_dim());
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::MatrixXd& P = pass == 0 ? s.P1 : s.P2;
                const Eigen::MatrixXd& E = pass == 0 ? s.d1.basis : s.d2.basis;
                for (int j = 0; j < E.cols(); ++j) {
                    const Eigen::VectorXd leak = (I - P) * (s.ops.T * E.col(j));
                    const double val = s.frame.norm(leak) / s.frame.norm(E.col(j));
                    rep.max_invariance = std::max(rep.max_invariance, val);
                    if (val > tol::kInvariance) {
                        rep.invariance_pass = false;
                        if (rep.failure.empty())
                            rep.failure = "T(D_i) leaks out of D_i at " + point_str(p);
                    }
                }
            }
        }
    }

    const double pi2 = std::numbers::pi / 2.0;
    auto away = [&](const SlantFunction& f) {
        return f.theta_min > tol::kSlantSpread && f.theta_max < pi2 - tol::kSlantSpread;
    };
    rep.proper = rep.pass() && away(rep.theta1) && away(rep.theta2);
    return rep;
}

IntegrabilityReport integrability(const ImmersionSpec& spec, const std::string& dist,
                                  const std::vector<Eigen::VectorXd>& points) {
    const Distribution* d = spec.find_distribution(dist);
    if (!d) throw SpecError("unknown distribution '" + dist + "'");
    IntegrabilityReport rep;
    rep.dist = dist;
    if (d->rank() < 2) {
        rep.trivially_integrable = true;
        return rep;
    }
    const int k = spec.chart_dim();
    for (const Eigen::VectorXd& p : points) {
        const Frame frame = frame_at(spec, p);
        const Eigen::MatrixXd E = distribution_basis(*d, frame);
        const Eigen::MatrixXd P = g_projector(E, frame.gram);
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
        for (int a = 0; a < d->rank(); ++a) {
            for (int b = a + 1; b < d->rank(); ++b) {
                const TangentField& X = d->fields[static_cast<std::size_t>(a)];
                const TangentField& Z = d->fields[static_cast<std::size_t>(b)];
                Eigen::VectorXd xv, zv;
                Eigen::MatrixXd xg, zg;
                X.eval_jet(p, xv, xg);
                Z.eval_jet(p, zv, zg);
                // [X, Z]^j = sum_i (x_i d_i z_j - z_i d_i x_j)
                const Eigen::VectorXd bracket = zg * xv - xg * zv;
                BracketResidual br;
                br.point = p;
                br.field_a = a;
                br.field_b = b;
                br.residual = frame.norm((I - P) * bracket);
                rep.max_residual = std::max(rep.max_residual, br.residual);
                rep.residuals.push_back(std::move(br));
            }
        }
    }
    rep.pass = rep.max_residual < tol::kIntegrability;
    return rep;
}

std::vector<TangentField> probe_fields(const Distribution& dist) {
    std::vector<TangentField> out = dist.fields;
    for (std::size_t a = 0; a < dist.fields.size(); ++a)
        for (std::size_t b = a + 1; b < dist.fields.size(); ++b)
            out.push_back(field_sum(dist.fields[a], dist.fields[b]));
    return out;
}

namespace {

struct LemmaContext {
    Frame frame;
    PointwiseOps ops;
    SecondFundamental sf;
    SplitAt split;
    double theta1 = 0.0, theta2 = 0.0;

    Eigen::VectorXd omega(const Eigen::VectorXd& x) const { return ops.W * x; }
};

LemmaContext lemma_context(const ImmersionSpec& spec, const Eigen::VectorXd& p, int probes,
                           std::uint64_t seed) {
    LemmaContext ctx{frame_at(spec, p),
                     {},
                     second_fundamental(spec, p),
                     projectors_at(spec, p),
                     0.0,
                     0.0};
    ctx.ops = ctx.split.ops;
    ctx.theta1 = slant_angle_at(spec, spec.distributions[0], p, probes, seed);
    ctx.theta2 = slant_angle_at(spec, spec.distributions[1], p, probes, seed + 1);
    return ctx;
}

}  // namespace

std::vector<IdentityCheck> check_lemma_3_2(const ImmersionSpec& spec,
                                           const std::vector<Eigen::VectorXd>& points, int probes,
                                           std::uint64_t seed) {
    const std::string suite = "lemma3.2";
    const std::string anchor_i =
        "(sin^2 t2 - sin^2 t1) g(nabla_X Y, Z) = g(sigma(X,Z), w T1 Y) + g(sigma(X,T2 Z), w Y) + "
        "g(sigma(X,Y), w T2 Z) + g(sigma(X,T1 Y), w Z)";
    const std::string anchor_ii =
        "(sin^2 t1 - sin^2 t2) g(nabla_Z W, X) = g(sigma(X,Z), w T2 W) + g(sigma(Z,T1 X), w W) + "
        "g(sigma(Z,W), w T1 X) + g(sigma(Z,T2 W), w X)";

    const auto probes1 = probe_fields(spec.distributions[0]);
    const auto probes2 = probe_fields(spec.distributions[1]);
    std::vector<IdentityCheck> checks;

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Eigen::VectorXd& p = points[pi];
        const LemmaContext ctx = lemma_context(spec, p, probes, seed);
        const double s1 = std::sin(ctx.theta1), s2 = std::sin(ctx.theta2);
        const double gap = s2 * s2 - s1 * s1;
        if (std::abs(gap) < tol::kLemma32Degenerate) {
            checks.push_back(IdentityCheck::skip(suite, "part(i)", anchor_i, p,
                                                 "slant functions coincide here (theta1 = theta2)"));
            continue;
        }

        // part (i): X, Y in D1, Z in D2
        for (const auto& X : probes1) {
            const Eigen::VectorXd xv = X.eval(p);
            for (const auto& Y : probes1) {
                const Eigen::VectorXd yv = Y.eval(p);
                const Eigen::VectorXd nxy = covariant_derivative(ctx.frame, ctx.sf, X, Y);
                for (const auto& Z : probes2) {
                    const Eigen::VectorXd zv = Z.eval(p);
                    const double lhs = gap * ctx.frame.inner(nxy, zv);
                    const Eigen::VectorXd t1y = ctx.split.T1 * yv;
                    const Eigen::VectorXd t2z = ctx.split.T2 * zv;
                    const double rhs = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(t1y)) +
                                       ctx.sf.sigma_of(xv, t2z).dot(ctx.omega(yv)) +
                                       ctx.sf.sigma_of(xv, yv).dot(ctx.omega(t2z)) +
                                       ctx.sf.sigma_of(xv, t1y).dot(ctx.omega(zv));
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(yv) * ctx.frame.norm(zv);
                    checks.push_back(IdentityCheck::make(
                        suite, "part(i) X=" + X.display + " Y=" + Y.display + " Z=" + Z.display,
                        anchor_i, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma32));
                }
            }
        }

        // part (ii): Z, W in D2, X in D1
        for (const auto& Z : probes2) {
            const Eigen::VectorXd zv = Z.eval(p);
            for (const auto& W : probes2) {
                const Eigen::VectorXd wv = W.eval(p);
                const Eigen::VectorXd nzw = covariant_derivative(ctx.frame, ctx.sf, Z, W);
                for (const auto& X : probes1) {
                    const Eigen::VectorXd xv = X.eval(p);
                    const double lhs = -gap * ctx.frame.inner(nzw, xv);
                    const Eigen::VectorXd t1x = ctx.split.T1 * xv;
                    const Eigen::VectorXd t2w = ctx.split.T2 * wv;
                    const double rhs = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(t2w)) +
                                       ctx.sf.sigma_of(zv, t1x).dot(ctx.omega(wv)) +
                                       ctx.sf.sigma_of(zv, wv).dot(ctx.omega(t1x)) +
                                       ctx.sf.sigma_of(zv, t2w).dot(ctx.omega(xv));
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(zv) * ctx.frame.norm(wv);
                    checks.push_back(IdentityCheck::make(
                        suite, "part(ii) Z=" + Z.display + " W=" + W.display + " X=" + X.display,
                        anchor_ii, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma32));
                }
            }
        }
    }
    return checks;
}

std::vector<IdentityCheck> check_corollary_3_3(const ImmersionSpec& spec,
                                               const std::vector<Eigen::VectorXd>& points,
                                               int probes, std::uint64_t seed) {
    const std::string suite = "cor3.3";
    const std::string anchor =
        "sin^2(t) g(nabla_X Y, Z) = g(sigma(X,Y), w T Z) + g(sigma(X,F Y), w Z)";

    std::vector<IdentityCheck> checks;
    if (spec.distributions.size() != 2) {
        checks.push_back(IdentityCheck::skip(suite, "applicability", anchor, Eigen::VectorXd(),
                                             "needs exactly two distributions"));
        return checks;
    }
    const SlantFunction f1 =
        slant_function(spec, spec.distributions[0].name, points,
                       std::max(probes, 2 * spec.distributions[0].rank()), seed);
    const SlantFunction f2 =
        slant_function(spec, spec.distributions[1].name, points,
                       std::max(probes, 2 * spec.distributions[1].rank()), seed + 1);
    if (f1.classification != DistClass::Invariant ||
        (f2.classification != DistClass::PointwiseSlant &&
         f2.classification != DistClass::SlantConstant &&
         f2.classification != DistClass::AntiInvariant)) {
        checks.push_back(IdentityCheck::skip(
            suite, "applicability", anchor, Eigen::VectorXd(),
            std::string(spec.distributions[0].name) + " is not invariant (computed " +
                to_string(f1.classification) + "); corollary inapplicable"));
        return checks;
    }

    const auto probes1 = probe_fields(spec.distributions[0]);
    const auto probes2 = probe_fields(spec.distributions[1]);

    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Eigen::VectorXd& p = points[pi];
        const LemmaContext ctx = lemma_context(spec, p, probes, seed);
        const double s2 = std::sin(ctx.theta2);
        for (const auto& X : probes1) {
            const Eigen::VectorXd xv = X.eval(p);
            for (const auto& Y : probes1) {
                const Eigen::VectorXd yv = Y.eval(p);
                const Eigen::VectorXd nxy = covariant_derivative(ctx.frame, ctx.sf, X, Y);
                const Eigen::VectorXd fy = ctx.ops.T * yv;  // F Y is tangent on an invariant D1
                for (const auto& Z : probes2) {
                    const Eigen::VectorXd zv = Z.eval(p);
                    const double lhs = s2 * s2 * ctx.frame.inner(nxy, zv);
                    const Eigen::VectorXd tz = ctx.ops.T * zv;
                    const double rhs = ctx.sf.sigma_of(xv, yv).dot(ctx.omega(tz)) +
                                       ctx.sf.sigma_of(xv, fy).dot(ctx.omega(zv));
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(yv) * ctx.frame.norm(zv);
                    IdentityCheck c = IdentityCheck::make(
                        suite, "X=" + X.display + " Y=" + Y.display + " Z=" + Z.display, anchor, p,
                        lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma32);

                    // cross-check: Lemma 3.2(i) with theta1 = 0 must agree
                    const Eigen::VectorXd t1y = ctx.split.T1 * yv;
                    const Eigen::VectorXd t2z = ctx.split.T2 * zv;
                    const double rhs_lemma = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(t1y)) +
                                             ctx.sf.sigma_of(xv, t2z).dot(ctx.omega(yv)) +
                                             ctx.sf.sigma_of(xv, yv).dot(ctx.omega(t2z)) +
                                             ctx.sf.sigma_of(xv, t1y).dot(ctx.omega(zv));
                    if (std::abs(rhs - rhs_lemma) / std::max(1.0, scale) > tol::kCor33Agree) {
                        c.pass = false;
                        c.note = "disagrees with the lemma evaluation by " +
                                 std::to_string(std::abs(rhs - rhs_lemma));
                    }
                    checks.push_back(std::move(c));
                }
            }
        }
    }
    return checks;
}

}  // namespace bislant
