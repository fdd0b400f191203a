#include "bislant/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace bislant {

namespace {

constexpr double kPi = std::numbers::pi;

bool tree_has_variables(const ExprNode* n) {
    if (!n) return false;
    if (n->kind == ExprNode::Kind::Variable) return true;
    return tree_has_variables(n->a.get()) || tree_has_variables(n->b.get());
}

// Coordinate indices spanned by a distribution whose fields are constant
// multiples of single coordinate fields; nullopt when not of that shape.
std::optional<std::vector<int>> coordinate_set(const Distribution& d, int k) {
    std::set<int> coords;
    const Eigen::VectorXd dummy = Eigen::VectorXd::Zero(k);
    for (const auto& field : d.fields) {
        int live = -1;
        for (int i = 0; i < k; ++i) {
            const Expr& c = field.coeff[static_cast<std::size_t>(i)];
            if (tree_has_variables(c.root().get())) return std::nullopt;
            if (c.eval(dummy) != 0.0) {
                if (live >= 0) return std::nullopt;  // mixes two coordinates
                live = i;
            }
        }
        if (live < 0) return std::nullopt;
        coords.insert(live);
    }
    if (static_cast<int>(coords.size()) != d.rank()) return std::nullopt;
    return std::vector<int>(coords.begin(), coords.end());
}

std::string point_str(const Eigen::VectorXd& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
    os << ")";
    return os.str();
}

}  // namespace

std::optional<WarpRoles> warp_roles(const ImmersionSpec& spec) {
    WarpRoles roles;
    if (spec.warped_claim) {
        roles.base = spec.find_distribution(spec.warped_claim->base);
        roles.fiber = spec.find_distribution(spec.warped_claim->fiber);
        roles.mu = Expr::unary(UnaryOp::Log, spec.warped_claim->f);
        roles.mu_text = "log(" + spec.warped_claim->f_text + ")";
        roles.from_warped_claim = true;
        return roles;
    }
    if (spec.mu_claim && spec.distributions.size() == 2) {
        roles.base = &spec.distributions[0];
        roles.fiber = &spec.distributions[1];
        roles.mu = *spec.mu_claim;
        roles.mu_text = spec.mu_claim_text;
        roles.from_warped_claim = false;
        return roles;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Detection: block structure of the induced metric and warping recovery
// ---------------------------------------------------------------------------

WarpedReport recover_warping(const ImmersionSpec& spec,
                             const std::vector<Eigen::VectorXd>& points) {
    const auto roles = warp_roles(spec);
    if (!roles || !roles->base || !roles->fiber)
        throw SpecError("warped detection requires a warped claim naming base and fiber");
    if (points.empty()) throw SpecError("warped detection needs at least one sample point");

    WarpedReport rep;
    rep.base = roles->base->name;
    rep.fiber = roles->fiber->name;
    rep.has_claim = roles->from_warped_claim;

    const int k = spec.chart_dim();
    const auto bc = coordinate_set(*roles->base, k);
    const auto fc = coordinate_set(*roles->fiber, k);
    if (!bc || !fc) {
        rep.aligned = false;
        rep.verdict = "not warped: distributions are not coordinate-aligned, no warped verdict";
        return rep;
    }
    rep.aligned = true;
    rep.base_coords = *bc;
    rep.fiber_coords = *fc;
    {
        std::set<int> all(bc->begin(), bc->end());
        all.insert(fc->begin(), fc->end());
        if (static_cast<int>(all.size()) != k) {
            rep.aligned = false;
            rep.verdict = "not warped: base and fiber coordinates do not partition the chart";
            return rep;
        }
    }

    const int rb = static_cast<int>(bc->size());
    const int rf = static_cast<int>(fc->size());
    const double h = tol::kFiniteDiffStep;

    auto fiber_block = [&](const Eigen::VectorXd& q) {
        const Eigen::MatrixXd gram = frame_at(spec, q).gram;
        Eigen::MatrixXd B(rf, rf);
        for (int i = 0; i < rf; ++i)
            for (int j = 0; j < rf; ++j)
                B(i, j) = gram((*fc)[static_cast<std::size_t>(i)], (*fc)[static_cast<std::size_t>(j)]);
        return B;
    };
    auto base_block = [&](const Eigen::VectorXd& q) {
        const Eigen::MatrixXd gram = frame_at(spec, q).gram;
        Eigen::MatrixXd B(rb, rb);
        for (int i = 0; i < rb; ++i)
            for (int j = 0; j < rb; ++j)
                B(i, j) = gram((*bc)[static_cast<std::size_t>(i)], (*bc)[static_cast<std::size_t>(j)]);
        return B;
    };

    const Eigen::MatrixXd C_ref = fiber_block(points[0]);
    const double max_ref = C_ref.cwiseAbs().maxCoeff();
    if (!(max_ref > 0.0)) {
        rep.verdict = "not warped: fiber block vanishes at the reference point";
        return rep;
    }

    // lambda(q) = common conformal factor of the fiber block relative to the
    // reference entries; also records how non-conformal the block is.
    auto conformal_factor = [&](const Eigen::MatrixXd& B, double* residual) {
        double sum = 0.0;
        int cnt = 0;
        for (int i = 0; i < rf; ++i)
            for (int j = 0; j < rf; ++j)
                if (std::abs(C_ref(i, j)) > 1e-9 * max_ref) {
                    sum += B(i, j) / C_ref(i, j);
                    ++cnt;
                }
        const double lambda = sum / cnt;
        if (residual) {
            double worst = 0.0;
            for (int i = 0; i < rf; ++i)
                for (int j = 0; j < rf; ++j) {
                    if (std::abs(C_ref(i, j)) > 1e-9 * max_ref)
                        worst = std::max(worst,
                                         std::abs(B(i, j) / C_ref(i, j) - lambda) / std::abs(lambda));
                    else
                        worst = std::max(worst, std::abs(B(i, j)) / (std::abs(lambda) * max_ref));
                }
            *residual = std::max(*residual, worst);
        }
        return lambda;
    };

    std::vector<double> claim_ratios;
    bool base_cross_note = false;
    double trivial_dev = 0.0;
    std::string cross_witness;

    for (const Eigen::VectorXd& p : points) {
        const Frame frame = frame_at(spec, p);

        // cross block, scaled by the diagonal
        for (int i : *bc)
            for (int j : *fc) {
                const double v = std::abs(frame.gram(i, j)) /
                                 std::sqrt(frame.gram(i, i) * frame.gram(j, j));
                if (v > rep.cross_residual) {
                    rep.cross_residual = v;
                    cross_witness = "g(d" + spec.chart[static_cast<std::size_t>(i)] + ", d" +
                                    spec.chart[static_cast<std::size_t>(j)] + ") at " +
                                    point_str(p);
                }
            }

        // base block must not vary along fiber coordinates
        const Eigen::MatrixXd Bb = base_block(p);
        rep.base_block_samples.push_back(Bb);
        for (int j : *fc) {
            Eigen::VectorXd pp = p, pm = p;
            pp(j) += h;
            pm(j) -= h;
            const Eigen::MatrixXd diff = (base_block(pp) - base_block(pm)) / (2.0 * h);
            rep.base_dep_residual = std::max(rep.base_dep_residual,
                                             diff.cwiseAbs().maxCoeff() / (1.0 + Bb.cwiseAbs().maxCoeff()));
        }
        for (int i = 0; i < rb; ++i)
            for (int j = i + 1; j < rb; ++j)
                if (std::abs(Bb(i, j)) > 1e-9 * (1.0 + Bb.cwiseAbs().maxCoeff()))
                    base_cross_note = true;

        // fiber block conformal to the reference block
        const double lambda = conformal_factor(fiber_block(p), &rep.fiber_conformal_residual);
        if (!(lambda > 0.0)) {
            rep.verdict = "not warped: fiber block is not positively conformal at " + point_str(p);
            return rep;
        }
        rep.f_samples.push_back(std::sqrt(lambda));
        trivial_dev = std::max(trivial_dev, std::abs(lambda - 1.0));

        // the recovered factor must be a function of the base alone
        for (int j : *fc) {
            Eigen::VectorXd pp = p, pm = p;
            pp(j) += h;
            pm(j) -= h;
            const double lp = conformal_factor(fiber_block(pp), nullptr);
            const double lm = conformal_factor(fiber_block(pm), nullptr);
            rep.f_base_dep_residual =
                std::max(rep.f_base_dep_residual, std::abs(lp - lm) / (2.0 * h * lambda));
        }

        if (roles->from_warped_claim) {
            const double fc2 = spec.warped_claim->f.eval(p);
            claim_ratios.push_back(fc2 * fc2 / lambda);
        }
    }

    if (!claim_ratios.empty()) {
        double mean = 0.0;
        for (double r : claim_ratios) mean += r;
        mean /= static_cast<double>(claim_ratios.size());
        double var = 0.0, worst = 0.0;
        for (double r : claim_ratios) {
            var += (r - mean) * (r - mean);
            worst = std::max(worst, std::abs(r / mean - 1.0));
        }
        var /= static_cast<double>(claim_ratios.size());
        rep.claim_ratio_mean = mean;
        rep.claim_ratio_variance = var / (mean * mean);
        rep.f_claim_residual = worst;
        rep.claim_match = rep.claim_ratio_variance < tol::kWarpClaimVariance;
    }

    const bool blocks_ok = rep.cross_residual < tol::kWarpCross &&
                           rep.base_dep_residual < tol::kWarpBaseDep &&
                           rep.fiber_conformal_residual < tol::kWarpConformal &&
                           rep.f_base_dep_residual < tol::kWarpBaseDep;
    if (!blocks_ok) {
        rep.detected = false;
        std::ostringstream os;
        if (rep.cross_residual >= tol::kWarpCross)
            os << "not an orthogonal split (cross residual " << rep.cross_residual << ", witness "
               << cross_witness << ")";
        else if (rep.base_dep_residual >= tol::kWarpBaseDep)
            os << "not warped: base block varies along fiber coordinates";
        else if (rep.fiber_conformal_residual >= tol::kWarpConformal)
            os << "not warped: fiber block is not conformal to a constant matrix";
        else
            os << "not warped: warping factor varies along fiber coordinates";
        rep.verdict = os.str();
        return rep;
    }

    rep.trivial = trivial_dev < tol::kWarpTrivial;
    rep.detected = true;
    rep.verdict = rep.trivial ? "trivial warped product" : "warped";
    if (base_cross_note) {
        std::ostringstream os;
        os << "measured base metric has nonzero off-diagonal terms:";
        const Eigen::MatrixXd& B0 = rep.base_block_samples.front();
        for (int i = 0; i < rb; ++i)
            for (int j = i + 1; j < rb; ++j)
                if (std::abs(B0(i, j)) > 1e-9 * (1.0 + B0.cwiseAbs().maxCoeff()))
                    os << " g(d" << spec.chart[static_cast<std::size_t>((*bc)[static_cast<std::size_t>(i)])]
                       << ", d" << spec.chart[static_cast<std::size_t>((*bc)[static_cast<std::size_t>(j)])]
                       << ")";
        rep.note = os.str();
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Per-point context with base/fiber roles
// ---------------------------------------------------------------------------

namespace {

struct RoleCtx {
    Frame frame;
    PointwiseOps ops;
    SecondFundamental sf;
    Eigen::MatrixXd Pb, Pf;  // projectors onto base / fiber
    Eigen::MatrixXd Tb, Tf;  // T1 = Pb T, T2 = Pf T in base/fiber roles
    double theta_b = 0.0, theta_f = 0.0;
    Eigen::VectorXd grad_mu;  // coordinate gradient of mu

    Eigen::VectorXd omega(const Eigen::VectorXd& x) const { return ops.W * x; }
    double mu_deriv(const Eigen::VectorXd& x) const { return x.dot(grad_mu); }
};

RoleCtx role_ctx(const ImmersionSpec& spec, const WarpRoles& roles, const Eigen::VectorXd& p,
                 int probes, std::uint64_t seed) {
    RoleCtx ctx{frame_at(spec, p), {}, second_fundamental(spec, p), {}, {}, {}, {},
                0.0, 0.0, {}};
    const SplitAt split = projectors_at(spec, p);
    ctx.ops = split.ops;
    const bool base_first = roles.base == &spec.distributions[0];
    ctx.Pb = base_first ? split.P1 : split.P2;
    ctx.Pf = base_first ? split.P2 : split.P1;
    ctx.Tb = ctx.Pb * ctx.ops.T;
    ctx.Tf = ctx.Pf * ctx.ops.T;
    ctx.theta_b = slant_angle_at(spec, *roles.base, p, probes, seed + 17);
    ctx.theta_f = slant_angle_at(spec, *roles.fiber, p, probes, seed + 31);
    if (roles.mu) ctx.grad_mu = roles.mu->eval_jet2(p).grad;
    return ctx;
}

// Directional derivative of the fiber slant function along the tangent
// coefficient vector x (frozen at p), by central differences.
double theta_derivative(const ImmersionSpec& spec, const Distribution& fiber,
                        const Eigen::VectorXd& p, const Eigen::VectorXd& x, int probes,
                        std::uint64_t seed) {
    const double h = tol::kFiniteDiffStep;
    double d = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (x(i) == 0.0) continue;
        Eigen::VectorXd pp = p, pm = p;
        pp(i) += h;
        pm(i) -= h;
        d += x(i) * (slant_angle_at(spec, fiber, pp, probes, seed) -
                     slant_angle_at(spec, fiber, pm, probes, seed)) /
             (2.0 * h);
    }
    return d;
}

// Common gate: the suites that need the warped structure first ask the
// detector; when it does not fire they report one skipped record.
bool gated_on_warp(const ImmersionSpec& spec, const std::vector<Eigen::VectorXd>& points,
                   const std::string& suite, const std::string& anchor,
                   std::vector<IdentityCheck>& checks, std::optional<WarpRoles>& roles_out) {
    roles_out = warp_roles(spec);
    if (!roles_out) {
        checks.push_back(IdentityCheck::skip(suite, "applicability", anchor, Eigen::VectorXd(),
                                             "no warped claim or mu available"));
        return false;
    }
    if (roles_out->from_warped_claim) {
        const WarpedReport rep = recover_warping(spec, points);
        if (!rep.detected) {
            checks.push_back(IdentityCheck::skip(suite, "applicability", anchor,
                                                 Eigen::VectorXd(), rep.verdict));
            return false;
        }
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// O'Neill relation
// ---------------------------------------------------------------------------

std::vector<IdentityCheck> check_oneill(const ImmersionSpec& spec,
                                        const std::vector<Eigen::VectorXd>& points,
                                        WarpedReport* report) {
    const std::string suite = "oneill";
    const std::string anchor = "nabla_X Z = nabla_Z X = (X ln f) Z";
    std::vector<IdentityCheck> checks;
    std::optional<WarpRoles> roles;
    if (!gated_on_warp(spec, points, suite, anchor, checks, roles)) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    double worst = 0.0;
    for (const Eigen::VectorXd& p : points) {
        const Frame frame = frame_at(spec, p);
        const SecondFundamental sf = second_fundamental(spec, p);
        const Eigen::VectorXd grad_mu = roles->mu->eval_jet2(p).grad;
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xlnf = xv.dot(grad_mu);
            for (const auto& Z : fiber_probes) {
                const Eigen::VectorXd zv = Z.eval(p);
                const double scale = frame.norm(xv) * frame.norm(zv);
                const Eigen::VectorXd lhs1 = covariant_derivative(frame, sf, X, Z);
                const Eigen::VectorXd lhs2 = covariant_derivative(frame, sf, Z, X);
                const double r1 = frame.norm(lhs1 - xlnf * zv) / scale;
                const double r2 = frame.norm(lhs2 - xlnf * zv) / scale;
                const double r = std::max(r1, r2);
                worst = std::max(worst, r);
                checks.push_back(IdentityCheck::make(suite,
                                                     "X=" + X.display + " Z=" + Z.display, anchor,
                                                     p, frame.norm(lhs1), std::abs(xlnf) * frame.norm(zv),
                                                     r, tol::kOneill));
            }
        }
    }
    if (report) report->oneill_residual = worst;
    return checks;
}

// ---------------------------------------------------------------------------
// Lemma suite (derivative identities along the warped structure)
// ---------------------------------------------------------------------------

std::vector<IdentityCheck> check_lemma_4_1(const ImmersionSpec& spec,
                                           const std::vector<Eigen::VectorXd>& points, int probes,
                                           std::uint64_t seed) {
    const std::string suite = "lemma4.1";
    const std::string anchor =
        "g(sigma(X,W), w T2 Z) + g(sigma(X,T2 Z), w W) = -(1/2) sin(2 t2) X(t2) g(Z,W)";
    std::vector<IdentityCheck> checks;
    std::optional<WarpRoles> roles;
    if (!gated_on_warp(spec, points, suite, anchor, checks, roles)) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        if (ctx.theta_f < tol::kAngleGate || ctx.theta_f > kPi / 2.0 - tol::kAngleGate) {
            checks.push_back(IdentityCheck::skip(suite, "gate", anchor, p,
                                                 "fiber slant angle degenerate (near 0 or pi/2)"));
            continue;
        }
        const double sin2t = std::sin(2.0 * ctx.theta_f);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xtheta = theta_derivative(spec, *roles->fiber, p, xv, probes, seed + 31);
            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                const Eigen::VectorXd t2z = ctx.Tf * zv;
                for (std::size_t wi = 0; wi < fiber_probes.size(); ++wi) {
                    const Eigen::VectorXd wv = fiber_probes[wi].eval(p);
                    const double lhs = ctx.sf.sigma_of(xv, wv).dot(ctx.omega(t2z)) +
                                       ctx.sf.sigma_of(xv, t2z).dot(ctx.omega(wv));
                    const double rhs = -0.5 * sin2t * xtheta * ctx.frame.inner(zv, wv);
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(zv) * ctx.frame.norm(wv);
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "X=" + X.display + " Z=" + fiber_probes[zi].display +
                            " W=" + fiber_probes[wi].display,
                        anchor, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma4x));
                }
            }
        }
    }
    return checks;
}

std::vector<IdentityCheck> check_lemma_4_2(const ImmersionSpec& spec,
                                           const std::vector<Eigen::VectorXd>& points, int probes,
                                           std::uint64_t seed) {
    const std::string suite = "lemma4.2";
    const std::string anchor =
        "g(sigma(X,Z), w W) + g(sigma(X,W), w Z) = -tan(t2) X(t2) g(T2 Z, W)";
    std::vector<IdentityCheck> checks;
    std::optional<WarpRoles> roles;
    if (!gated_on_warp(spec, points, suite, anchor, checks, roles)) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        if (ctx.theta_f > kPi / 2.0 - tol::kAngleGate) {
            checks.push_back(IdentityCheck::skip(suite, "gate", anchor, p,
                                                 "tan(t2) degenerate (t2 near pi/2)"));
            continue;
        }
        const double tant = std::tan(ctx.theta_f);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xtheta = theta_derivative(spec, *roles->fiber, p, xv, probes, seed + 31);
            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                for (std::size_t wi = 0; wi < fiber_probes.size(); ++wi) {
                    const Eigen::VectorXd wv = fiber_probes[wi].eval(p);
                    const double lhs = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(wv)) +
                                       ctx.sf.sigma_of(xv, wv).dot(ctx.omega(zv));
                    const double rhs = -tant * xtheta * ctx.frame.inner(ctx.Tf * zv, wv);
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(zv) * ctx.frame.norm(wv);
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "X=" + X.display + " Z=" + fiber_probes[zi].display +
                            " W=" + fiber_probes[wi].display,
                        anchor, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma4x));
                }
            }
        }
    }
    return checks;
}

std::vector<IdentityCheck> check_lemma_4_3(const ImmersionSpec& spec,
                                           const std::vector<Eigen::VectorXd>& points, int probes,
                                           std::uint64_t seed) {
    const std::string suite = "lemma4.3";
    const std::string anchor_i = "g(sigma(X,Z), w W) = g(sigma(X,W), w Z)";
    const std::string anchor_ii = "g(sigma(X,Z), w Y) = -g(sigma(X,Y), w Z)";
    const std::string anchor_48 =
        "g(sigma(X,Z), w W) = (T1 X)(ln f) g(Z,W) - g(sigma(Z,W), w X) - X(ln f) g(Z, T2 W)";
    std::vector<IdentityCheck> checks;
    std::optional<WarpRoles> roles;
    if (!gated_on_warp(spec, points, suite, anchor_i, checks, roles)) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double nx = ctx.frame.norm(xv);

            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                for (std::size_t wi = 0; wi < fiber_probes.size(); ++wi) {
                    const Eigen::VectorXd wv = fiber_probes[wi].eval(p);
                    const double scale = nx * ctx.frame.norm(zv) * ctx.frame.norm(wv);

                    const double lhs_i = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(wv));
                    const double rhs_i = ctx.sf.sigma_of(xv, wv).dot(ctx.omega(zv));
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "(i) X=" + X.display + " Z=" + fiber_probes[zi].display +
                            " W=" + fiber_probes[wi].display,
                        anchor_i, p, lhs_i, rhs_i, std::abs(lhs_i - rhs_i) / scale,
                        tol::kLemma4x));

                    // Eq 4.8, the stronger intermediate identity
                    const Eigen::VectorXd t1x = ctx.Tb * xv;
                    const Eigen::VectorXd t2w = ctx.Tf * wv;
                    const double rhs48 = ctx.mu_deriv(t1x) * ctx.frame.inner(zv, wv) -
                                         ctx.sf.sigma_of(zv, wv).dot(ctx.omega(xv)) -
                                         ctx.mu_deriv(xv) * ctx.frame.inner(zv, t2w);
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "(4.8) X=" + X.display + " Z=" + fiber_probes[zi].display +
                            " W=" + fiber_probes[wi].display,
                        anchor_48, p, lhs_i, rhs48, std::abs(lhs_i - rhs48) / scale,
                        tol::kLemma4x));
                }
            }

            for (const auto& Y : base_probes) {
                const Eigen::VectorXd yv = Y.eval(p);
                for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                    const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                    const double scale = nx * ctx.frame.norm(yv) * ctx.frame.norm(zv);
                    const double lhs = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(yv));
                    const double rhs = -ctx.sf.sigma_of(xv, yv).dot(ctx.omega(zv));
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "(ii) X=" + X.display + " Y=" + Y.display +
                            " Z=" + fiber_probes[zi].display,
                        anchor_ii, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma4x));
                }
            }
        }
    }
    return checks;
}

std::vector<IdentityCheck> check_theorem_4_4(const ImmersionSpec& spec,
                                             const std::vector<Eigen::VectorXd>& points,
                                             int probes, std::uint64_t seed) {
    const std::string suite = "thm4.4";
    const std::string anchor =
        "g(A_{w T1 X} W + A_{w X} T2 W, Z) + g(A_{w T2 W} X + A_{w W} T1 X, Z) = "
        "(sin^2 t2 - sin^2 t1) X(ln f) g(Z,W)";
    std::vector<IdentityCheck> checks;
    std::optional<WarpRoles> roles;
    if (!gated_on_warp(spec, points, suite, anchor, checks, roles)) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        const double gap = std::sin(ctx.theta_f) * std::sin(ctx.theta_f) -
                           std::sin(ctx.theta_b) * std::sin(ctx.theta_b);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const Eigen::VectorXd t1x = ctx.Tb * xv;
            const Eigen::MatrixXd A_wt1x = shape_operator(ctx.frame, ctx.sf, ctx.omega(t1x));
            const Eigen::MatrixXd A_wx = shape_operator(ctx.frame, ctx.sf, ctx.omega(xv));
            const double xlnf = ctx.mu_deriv(xv);
            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                for (std::size_t wi = 0; wi < fiber_probes.size(); ++wi) {
                    const Eigen::VectorXd wv = fiber_probes[wi].eval(p);
                    const Eigen::VectorXd t2w = ctx.Tf * wv;
                    const Eigen::MatrixXd A_wt2w = shape_operator(ctx.frame, ctx.sf, ctx.omega(t2w));
                    const Eigen::MatrixXd A_ww = shape_operator(ctx.frame, ctx.sf, ctx.omega(wv));
                    const double lhs = ctx.frame.inner(A_wt1x * wv + A_wx * t2w, zv) +
                                       ctx.frame.inner(A_wt2w * xv + A_ww * t1x, zv);
                    const double rhs = gap * xlnf * ctx.frame.inner(zv, wv);
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(zv) * ctx.frame.norm(wv);
                    checks.push_back(IdentityCheck::make(
                        suite,
                        "X=" + X.display + " Z=" + fiber_probes[zi].display +
                            " W=" + fiber_probes[wi].display,
                        anchor, p, lhs, rhs, std::abs(lhs - rhs) / scale, tol::kLemma4x));
                }
            }
        }
    }
    return checks;
}

// ---------------------------------------------------------------------------
// Characterization (vector identity) and its special cases
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd eq51_lhs(const RoleCtx& ctx, const Eigen::VectorXd& xv, const Eigen::VectorXd& zv) {
    const Eigen::VectorXd t1x = ctx.Tb * xv;
    const Eigen::VectorXd t2z = ctx.Tf * zv;
    const Eigen::MatrixXd A_wt1x = shape_operator(ctx.frame, ctx.sf, ctx.omega(t1x));
    const Eigen::MatrixXd A_wx = shape_operator(ctx.frame, ctx.sf, ctx.omega(xv));
    const Eigen::MatrixXd A_wt2z = shape_operator(ctx.frame, ctx.sf, ctx.omega(t2z));
    const Eigen::MatrixXd A_wz = shape_operator(ctx.frame, ctx.sf, ctx.omega(zv));
    return A_wt1x * zv + A_wx * t2z + A_wt2z * xv + A_wz * t1x;
}

}  // namespace

std::vector<IdentityCheck> check_characterization(const ImmersionSpec& spec,
                                                  const std::vector<Eigen::VectorXd>& points,
                                                  int probes, std::uint64_t seed) {
    const std::string suite = "eq5.1";
    const std::string anchor =
        "A_{w T1 X} Z + A_{w X} T2 Z + A_{w T2 Z} X + A_{w Z} T1 X = "
        "(sin^2 t2 - sin^2 t1) X(mu) Z";
    const std::string anchor_mu = "W(mu) = 0 for W in D2";
    std::vector<IdentityCheck> checks;
    const auto roles = warp_roles(spec);
    if (!roles) {
        throw SpecError("characterization requires mu or a warped claim");
    }

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        const double gap = std::sin(ctx.theta_f) * std::sin(ctx.theta_f) -
                           std::sin(ctx.theta_b) * std::sin(ctx.theta_b);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xmu = ctx.mu_deriv(xv);
            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                const Eigen::VectorXd lhs = eq51_lhs(ctx, xv, zv);
                const Eigen::VectorXd rhs = gap * xmu * zv;
                const double scale = ctx.frame.norm(xv) * ctx.frame.norm(zv);
                checks.push_back(IdentityCheck::make(
                    suite, "X=" + X.display + " Z=" + fiber_probes[zi].display, anchor, p,
                    ctx.frame.norm(lhs), ctx.frame.norm(rhs),
                    ctx.frame.norm(lhs - rhs) / scale, tol::kEq51));
            }
        }
        for (const auto& W : fiber_probes) {
            const Eigen::VectorXd wv = W.eval(p);
            const double wmu = std::abs(ctx.mu_deriv(wv)) / ctx.frame.norm(wv);
            checks.push_back(IdentityCheck::make(suite, "W=" + W.display, anchor_mu, p, wmu, 0.0,
                                                 wmu, tol::kMuFiber));
        }
    }
    return checks;
}

std::vector<IdentityCheck> check_special_cases(const ImmersionSpec& spec,
                                               const std::vector<Eigen::VectorXd>& points,
                                               int probes, std::uint64_t seed) {
    const std::string suite = "cases";
    const std::string a1 = "A_{w T Z} X + A_{w Z} F X = (sin^2 t) X(mu) Z";
    const std::string a2 = "A_{w T X} Z + A_{F Z} T X = (cos^2 t) X(mu) Z";
    const std::string a3 = "A_{F Z} F X = X(mu) Z";
    std::vector<IdentityCheck> checks;
    const auto roles = warp_roles(spec);
    if (!roles) {
        checks.push_back(IdentityCheck::skip(suite, "applicability", a1, Eigen::VectorXd(),
                                             "no warped claim or mu available"));
        return checks;
    }

    const SlantFunction base_sf = slant_function(spec, roles->base->name, points,
                                                 std::max(probes, 2 * roles->base->rank()), seed);
    const SlantFunction fiber_sf =
        slant_function(spec, roles->fiber->name, points,
                       std::max(probes, 2 * roles->fiber->rank()), seed + 1);
    const bool base_invariant = base_sf.classification == DistClass::Invariant;
    const bool fiber_anti = fiber_sf.classification == DistClass::AntiInvariant;
    const bool base_const = base_sf.classification == DistClass::SlantConstant;

    const bool case3 = base_invariant && fiber_anti;
    const bool case1 = base_invariant && !case3;
    const bool case2 = fiber_anti && base_const && !case3;

    auto skip_all = [&](const std::string& name, const std::string& anchor,
                        const std::string& why) {
        checks.push_back(IdentityCheck::skip(suite, name, anchor, Eigen::VectorXd(), why));
    };
    if (!case1)
        skip_all("case1", a1, "inapplicable: base slant is not identically 0 (computed " +
                                  std::string(to_string(base_sf.classification)) + ")");
    if (!case2)
        skip_all("case2", a2,
                 "inapplicable: needs anti-invariant fiber and constant proper base slant");
    if (!case3) skip_all("case3", a3, "inapplicable: needs invariant base and anti-invariant fiber");
    if (!case1 && !case2 && !case3) return checks;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xmu = ctx.mu_deriv(xv);
            const Eigen::VectorXd tx = ctx.ops.T * xv;  // = F X for invariant base
            for (std::size_t zi = 0; zi < fiber_probes.size(); ++zi) {
                const Eigen::VectorXd zv = fiber_probes[zi].eval(p);
                const Eigen::VectorXd tz = ctx.ops.T * zv;
                const double scale = ctx.frame.norm(xv) * ctx.frame.norm(zv);
                const Eigen::VectorXd full = eq51_lhs(ctx, xv, zv);
                const std::string tag = " X=" + X.display + " Z=" + fiber_probes[zi].display;

                Eigen::VectorXd lhs, rhs;
                std::string name, anchor;
                if (case1) {
                    lhs = shape_operator(ctx.frame, ctx.sf, ctx.omega(tz)) * xv +
                          shape_operator(ctx.frame, ctx.sf, ctx.omega(zv)) * tx;
                    const double s2 = std::sin(ctx.theta_f) * std::sin(ctx.theta_f);
                    rhs = s2 * xmu * zv;
                    name = "case1" + tag;
                    anchor = a1;
                } else if (case2) {
                    lhs = shape_operator(ctx.frame, ctx.sf, ctx.omega(tx)) * zv +
                          shape_operator(ctx.frame, ctx.sf, ctx.omega(zv)) * tx;
                    const double c2 = std::cos(ctx.theta_b) * std::cos(ctx.theta_b);
                    rhs = c2 * xmu * zv;
                    name = "case2" + tag;
                    anchor = a2;
                } else {
                    lhs = shape_operator(ctx.frame, ctx.sf, ctx.omega(zv)) * tx;
                    rhs = xmu * zv;
                    name = "case3" + tag;
                    anchor = a3;
                }
                IdentityCheck c = IdentityCheck::make(suite, name, anchor, p,
                                                      ctx.frame.norm(lhs), ctx.frame.norm(rhs),
                                                      ctx.frame.norm(lhs - rhs) / scale,
                                                      tol::kLemma4x);
                // consistency: the reduction must agree with the full identity
                const double agree = ctx.frame.norm(lhs - full) / std::max(1.0, scale);
                if (agree > tol::kCaseAgree) {
                    c.pass = false;
                    c.note = "reduction disagrees with the full characterization by " +
                             std::to_string(agree);
                }
                checks.push_back(std::move(c));
            }
        }
    }
    return checks;
}

// ---------------------------------------------------------------------------
// Foliation geometry (the premise checklist for the warped conclusion)
// ---------------------------------------------------------------------------

std::vector<IdentityCheck> check_foliation_geometry(const ImmersionSpec& spec,
                                                    const std::vector<Eigen::VectorXd>& points,
                                                    int probes, std::uint64_t seed,
                                                    WarpedReport* report) {
    const std::string suite = "foliation";
    const std::string a_geo = "P2 nabla_X Y = 0 (base leaves totally geodesic)";
    const std::string a_umb = "P1 nabla_Z W = -(grad mu) g(Z,W) (fiber leaves totally umbilical)";
    const std::string a_mu = "W(mu) = 0 for W in the fiber";
    std::vector<IdentityCheck> checks;
    const auto roles = warp_roles(spec);
    if (!roles) {
        checks.push_back(IdentityCheck::skip(suite, "applicability", a_geo, Eigen::VectorXd(),
                                             "no warped claim or mu available"));
        return checks;
    }

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);
    double worst_geo = 0.0, worst_umb = 0.0, worst_mu = 0.0;
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        const Eigen::VectorXd grad_mu_g = ctx.frame.gram_solve(ctx.grad_mu);

        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            for (const auto& Y : base_probes) {
                const Eigen::VectorXd yv = Y.eval(p);
                const Eigen::VectorXd leak =
                    ctx.Pf * covariant_derivative(ctx.frame, ctx.sf, X, Y);
                const double r =
                    ctx.frame.norm(leak) / (ctx.frame.norm(xv) * ctx.frame.norm(yv));
                worst_geo = std::max(worst_geo, r);
                checks.push_back(IdentityCheck::make(suite,
                                                     "geodesic X=" + X.display + " Y=" + Y.display,
                                                     a_geo, p, r, 0.0, r, tol::kFoliation));
            }
        }

        for (const auto& Z : fiber_probes) {
            const Eigen::VectorXd zv = Z.eval(p);
            for (const auto& W : fiber_probes) {
                const Eigen::VectorXd wv = W.eval(p);
                const Eigen::VectorXd lhs =
                    ctx.Pb * covariant_derivative(ctx.frame, ctx.sf, Z, W);
                const Eigen::VectorXd rhs = -ctx.frame.inner(zv, wv) * (ctx.Pb * grad_mu_g);
                const double r = ctx.frame.norm(lhs - rhs) /
                                 (ctx.frame.norm(zv) * ctx.frame.norm(wv));
                worst_umb = std::max(worst_umb, r);
                checks.push_back(IdentityCheck::make(suite,
                                                     "umbilic Z=" + Z.display + " W=" + W.display,
                                                     a_umb, p, ctx.frame.norm(lhs),
                                                     ctx.frame.norm(rhs), r, tol::kFoliation));
            }
            const double wmu = std::abs(ctx.mu_deriv(zv)) / ctx.frame.norm(zv);
            worst_mu = std::max(worst_mu, wmu);
            checks.push_back(IdentityCheck::make(suite, "mu W=" + Z.display, a_mu, p, wmu, 0.0,
                                                 wmu, tol::kMuFiber));
        }
    }
    if (report) {
        report->base_geodesic_residual = worst_geo;
        report->fiber_umbilic_residual = worst_umb;
        report->mu_fiber_residual = worst_mu;
    }
    return checks;
}

// ---------------------------------------------------------------------------
// Coefficient adjudication for the two derivative lemmas
// ---------------------------------------------------------------------------

std::vector<ClaimComparison> lemma_coefficient_adjudication(
    const ImmersionSpec& spec, const std::vector<Eigen::VectorXd>& points, int probes,
    std::uint64_t seed) {
    std::vector<ClaimComparison> out;
    const auto roles = warp_roles(spec);
    if (!roles || !roles->from_warped_claim) return out;
    const WarpedReport rep = recover_warping(spec, points);
    if (!rep.detected) return out;

    const auto base_probes = probe_fields(*roles->base);
    const auto fiber_probes = probe_fields(*roles->fiber);

    // ratio of the measured left side to the printed right side; 1 confirms
    // the printed coefficient, 1/2 the corrected one
    std::vector<double> ratios41, ratios42;
    for (const Eigen::VectorXd& p : points) {
        const RoleCtx ctx = role_ctx(spec, *roles, p, probes, seed);
        if (ctx.theta_f < tol::kAngleGate || ctx.theta_f > kPi / 2.0 - tol::kAngleGate) continue;
        const double sin2t = std::sin(2.0 * ctx.theta_f);
        const double tant = std::tan(ctx.theta_f);
        for (const auto& X : base_probes) {
            const Eigen::VectorXd xv = X.eval(p);
            const double xtheta = theta_derivative(spec, *roles->fiber, p, xv, probes, seed + 31);
            for (const auto& Z : fiber_probes) {
                const Eigen::VectorXd zv = Z.eval(p);
                const Eigen::VectorXd t2z = ctx.Tf * zv;
                for (const auto& W : fiber_probes) {
                    const Eigen::VectorXd wv = W.eval(p);
                    const double scale =
                        ctx.frame.norm(xv) * ctx.frame.norm(zv) * ctx.frame.norm(wv);

                    const double lhs41 = ctx.sf.sigma_of(xv, wv).dot(ctx.omega(t2z)) +
                                         ctx.sf.sigma_of(xv, t2z).dot(ctx.omega(wv));
                    const double printed41 = -sin2t * xtheta * ctx.frame.inner(zv, wv);
                    if (std::abs(printed41) > 1e-4 * scale) ratios41.push_back(lhs41 / printed41);

                    const double lhs42 = ctx.sf.sigma_of(xv, zv).dot(ctx.omega(wv)) +
                                         ctx.sf.sigma_of(xv, wv).dot(ctx.omega(zv));
                    const double printed42 =
                        -2.0 * tant * xtheta * ctx.frame.inner(ctx.Tf * zv, wv);
                    if (std::abs(printed42) > 1e-4 * scale) ratios42.push_back(lhs42 / printed42);
                }
            }
        }
    }

    auto summarize = [](const std::string& subject, const std::string& printed,
                        const std::string& corrected, const std::vector<double>& ratios) {
        ClaimComparison c;
        c.subject = subject;
        c.claimed = printed;
        if (ratios.empty()) {
            c.computed = "coefficient not exercised on this input (X(t2) = 0 throughout)";
            c.match = true;
            return c;
        }
        double worst1 = 0.0, worst_half = 0.0;
        for (double r : ratios) {
            worst1 = std::max(worst1, std::abs(r - 1.0));
            worst_half = std::max(worst_half, std::abs(r - 0.5));
        }
        c.match = worst1 < 1e-4;
        c.deviation = worst1;
        std::ostringstream os;
        os << "measured LHS / printed RHS stays at " << (worst_half < 1e-4 ? "1/2" : "neither 1 nor 1/2")
           << "; identity holds with " << corrected;
        c.computed = os.str();
        return c;
    };
    out.push_back(summarize("lemma4.1 right-hand coefficient", "-sin(2 t2) X(t2) g(Z,W)",
                            "-(1/2) sin(2 t2) X(t2) g(Z,W)", ratios41));
    out.push_back(summarize("lemma4.2 right-hand coefficient", "-2 tan(t2) X(t2) g(T2 Z,W)",
                            "-tan(t2) X(t2) g(T2 Z,W)", ratios42));
    return out;
}

}  // namespace bislant
