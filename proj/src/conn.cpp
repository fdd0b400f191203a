#include "bislant/conn.hpp"

#include <cmath>

namespace bislant {

Eigen::VectorXd SecondFundamental::sigma_of(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& y) const {
    const int k = static_cast<int>(x.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sigma[0][0].size());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            out += x(i) * y(j) * sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

Eigen::VectorXd SecondFundamental::gamma_of(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& y) const {
    const int k = static_cast<int>(x.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            out += x(i) * y(j) *
                   christoffel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

SecondFundamental second_fundamental(const Frame& frame, const SecondDerivatives& sd) {
    const int k = static_cast<int>(frame.gram.rows());
    SecondFundamental sf;
    sf.sigma.assign(static_cast<std::size_t>(k),
                    std::vector<Eigen::VectorXd>(static_cast<std::size_t>(k)));
    sf.christoffel.assign(static_cast<std::size_t>(k),
                          std::vector<Eigen::VectorXd>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const Eigen::VectorXd& H = sd.H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            Eigen::VectorXd gamma = frame.gram_solve(frame.jacobian.transpose() * H);
            Eigen::VectorXd sig = frame.normal.transpose() * H;
            sf.christoffel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gamma;
            sf.christoffel[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = gamma;
            sf.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sig;
            sf.sigma[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = sig;
        }
    }
    return sf;
}

SecondFundamental second_fundamental(const ImmersionSpec& spec, const Eigen::VectorXd& p) {
    return second_fundamental(frame_at(spec, p), second_derivatives_at(spec, p));
}

std::vector<std::vector<Eigen::VectorXd>> christoffel_from_metric(const ImmersionSpec& spec,
                                                                  const Eigen::VectorXd& p,
                                                                  double h) {
    const int k = spec.chart_dim();
    // dg[l](i,j) = d g_ij / d u_l by central differences of the Gram field
    std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
        Eigen::VectorXd pp = p, pm = p;
        pp(l) += h;
        pm(l) -= h;
        dg[static_cast<std::size_t>(l)] =
            (frame_at(spec, pp).gram - frame_at(spec, pm).gram) / (2.0 * h);
    }
    const Frame frame = frame_at(spec, p);
    std::vector<std::vector<Eigen::VectorXd>> gamma(
        static_cast<std::size_t>(k), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            Eigen::VectorXd rhs(k);  // Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij)/2
            for (int l = 0; l < k; ++l)
                rhs(l) = 0.5 * (dg[static_cast<std::size_t>(i)](j, l) +
                                dg[static_cast<std::size_t>(j)](i, l) -
                                dg[static_cast<std::size_t>(l)](i, j));
            const Eigen::VectorXd g = frame.gram_solve(rhs);
            gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g;
            gamma[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = g;
        }
    }
    return gamma;
}

Eigen::MatrixXd shape_operator(const Frame& frame, const SecondFundamental& sf,
                               const Eigen::VectorXd& N) {
    const int k = static_cast<int>(frame.gram.rows());
    Eigen::MatrixXd M(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            M(i, j) = sf.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].dot(N);
    return frame.gram_solve(M);
}

Eigen::MatrixXd shape_operator(const ImmersionSpec& spec, const Eigen::VectorXd& p,
                               const Eigen::VectorXd& N) {
    const Frame frame = frame_at(spec, p);
    return shape_operator(frame, second_fundamental(frame, second_derivatives_at(spec, p)), N);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> weingarten_split(
    const ImmersionSpec& spec, const Eigen::VectorXd& p,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& normal_field,
    const Eigen::VectorXd& x, double h) {
    const int k = spec.chart_dim();
    const Frame frame = frame_at(spec, p);
    Eigen::VectorXd dN = Eigen::VectorXd::Zero(spec.ambient_dim());
    for (int i = 0; i < k; ++i) {
        if (x(i) == 0.0) continue;
        Eigen::VectorXd pp = p, pm = p;
        pp(i) += h;
        pm(i) -= h;
        const Eigen::VectorXd Np = normal_field(pp);
        const Eigen::VectorXd Nm = normal_field(pm);
        for (const auto& [q, Nq] : {std::pair{pp, Np}, std::pair{pm, Nm}}) {
            const Frame fq = frame_at(spec, q);
            const double tangency = (fq.jacobian.transpose() * Nq).cwiseAbs().maxCoeff();
            if (tangency > 1e-8 * (1.0 + Nq.norm()))
                throw SpecError("weingarten_split: field is not normal near the base point");
        }
        dN += x(i) * (Np - Nm) / (2.0 * h);
    }
    Eigen::VectorXd tangential = frame.gram_solve(frame.jacobian.transpose() * dN);
    Eigen::VectorXd normal_part = frame.normal.transpose() * dN;
    return {std::move(tangential), std::move(normal_part)};
}

Eigen::VectorXd covariant_derivative(const Frame& frame, const SecondFundamental& sf,
                                     const TangentField& X, const TangentField& Y) {
    Eigen::VectorXd xv, yv;
    Eigen::MatrixXd xg, yg;
    X.eval_jet(frame.point, xv, xg);
    Y.eval_jet(frame.point, yv, yg);
    // nabla_X Y = sum_j X(y_j) d_j + sum_ij x_i y_j nabla_{d_i} d_j
    Eigen::VectorXd out = yg * xv;  // (y_j gradients) dot X coefficients
    out += sf.gamma_of(xv, yv);
    return out;
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> omega_field(const ImmersionSpec& spec,
                                                                   const TangentField& X) {
    return [&spec, X](const Eigen::VectorXd& q) -> Eigen::VectorXd {
        const Frame fq = frame_at(spec, q);
        const Eigen::VectorXd ambient = spec.ambient.F * (fq.jacobian * X.eval(q));
        // subtract the tangential component
        const Eigen::VectorXd tang = fq.gram_solve(fq.jacobian.transpose() * ambient);
        return ambient - fq.jacobian * tang;
    };
}

std::vector<IdentityCheck> check_gauss_weingarten(const ImmersionSpec& spec,
                                                  const std::vector<Eigen::VectorXd>& points,
                                                  std::uint64_t seed) {
    const std::string suite = "gauss-weingarten";
    const std::string a_gauss = "nabla^bar_X Y = nabla_X Y + sigma(X,Y)";
    const std::string a_wein = "nabla^bar_X N = -A_N X + nabla^perp_X N";
    const std::string a_dual = "g(A_N X, Y) = g(sigma(X,Y), N)";
    const std::string a_gamma = "Gamma[projection] = Gamma[metric]";

    std::vector<IdentityCheck> checks;
    const int k = spec.chart_dim();
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Eigen::VectorXd& p = points[pi];
        const Frame frame = frame_at(spec, p);
        const SecondDerivatives sd = second_derivatives_at(spec, p);
        const SecondFundamental sf = second_fundamental(frame, sd);

        // Gauss reconstruction
        double worst = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) {
                const auto& H = sd.H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                const Eigen::VectorXd recon =
                    frame.jacobian *
                        sf.christoffel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                    frame.normal *
                        sf.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                worst = std::max(worst, (H - recon).norm() / (1.0 + H.norm()));
            }
        }
        checks.push_back(IdentityCheck::make(suite, "gauss", a_gauss, p, 0, 0, worst, tol::kGauss));

        // Shape-operator duality with seeded directions
        DirectionSequence tdirs(seed ^ (0x51ed2700ULL + pi), k);
        DirectionSequence ndirs(seed ^ (0xabcf9921ULL + pi), static_cast<int>(frame.normal.cols()));
        double worst_dual = 0.0;
        if (frame.normal.cols() > 0) {
            for (int rep = 0; rep < 3; ++rep) {
                const Eigen::VectorXd X = tdirs.next();
                const Eigen::VectorXd Y = tdirs.next();
                const Eigen::VectorXd N = ndirs.next();
                const Eigen::MatrixXd AN = shape_operator(frame, sf, N);
                const double lhs = frame.inner(AN * X, Y);
                const double rhs = sf.sigma_of(X, Y).dot(N);
                worst_dual = std::max(
                    worst_dual, std::abs(lhs - rhs) / (frame.norm(X) * frame.norm(Y) * N.norm()));
            }
        }
        checks.push_back(
            IdentityCheck::make(suite, "duality", a_dual, p, 0, 0, worst_dual, tol::kShapeDuality));

        // Weingarten with omega of the declared distribution fields
        double worst_w = 0.0;
        bool any_field = false;
        const PointwiseOps ops = pointwise_ops(spec.ambient, frame);
        for (const auto& dist : spec.distributions) {
            for (const auto& fld : dist.fields) {
                const Eigen::VectorXd xv = fld.eval(p);
                const Eigen::VectorXd Np = frame.normal * (ops.W * xv);
                if (Np.norm() < 1e-12 * (1.0 + frame.norm(xv))) continue;  // omega X vanishes
                any_field = true;
                auto field = omega_field(spec, fld);
                for (int i = 0; i < k; ++i) {
                    Eigen::VectorXd dir = Eigen::VectorXd::Zero(k);
                    dir(i) = 1.0;
                    auto [tang, nor] = weingarten_split(spec, p, field, dir);
                    const Eigen::MatrixXd AN =
                        shape_operator(frame, sf, frame.normal.transpose() * Np);
                    const Eigen::VectorXd expect = -(AN * dir);
                    worst_w = std::max(worst_w,
                                       frame.norm(tang - expect) / (1.0 + frame.norm(expect)));
                }
            }
        }
        if (any_field)
            checks.push_back(IdentityCheck::make(suite, "weingarten", a_wein, p, 0, 0, worst_w,
                                                 tol::kWeingarten));
        else
            checks.push_back(IdentityCheck::skip(suite, "weingarten", a_wein, p,
                                                 "no distribution field with nonzero omega"));

        // Two Christoffel constructions
        const auto gamma_fd = christoffel_from_metric(spec, p);
        double worst_g = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                worst_g = std::max(
                    worst_g,
                    (gamma_fd[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                     sf.christoffel[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                        .cwiseAbs()
                        .maxCoeff());
        checks.push_back(IdentityCheck::make(suite, "christoffel", a_gamma, p, 0, 0, worst_g,
                                             tol::kChristoffelAgree));
    }
    return checks;
}

}  // namespace bislant
