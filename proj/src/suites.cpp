#include "bislant/suites.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace bislant {

int max_threads() {
    if (const char* env = std::getenv("BISLANT_THREADS")) {
        int v = 0;
        const auto res = std::from_chars(env, env + std::string_view(env).size(), v);
        if (res.ec == std::errc{} && v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "eq2",      "gauss-weingarten", "integrability", "lemma3.2", "cor3.3",
        "oneill",   "lemma4.1",         "lemma4.2",      "lemma4.3", "thm4.4",
        "eq5.1",    "cases",            "foliation",
    };
    return names;
}

namespace {

// Suites whose preconditions reference the bi-slant axioms / a warping source.
bool needs_axioms(const std::string& s) {
    return s != "eq2" && s != "gauss-weingarten" && s != "integrability";
}
bool needs_mu(const std::string& s) {
    return s == "oneill" || s == "lemma4.1" || s == "lemma4.2" || s == "lemma4.3" ||
           s == "thm4.4" || s == "eq5.1" || s == "cases" || s == "foliation";
}

SuiteResult run_one_suite(const ImmersionSpec& spec, const std::string& name,
                          const std::vector<Eigen::VectorXd>& points, const RunOptions& opts) {
    SuiteResult res;
    res.suite = name;
    if (name == "eq2") {
        for (const auto& d : spec.distributions) {
            auto c = check_eq_2_8_2_9(spec, d.name, points, opts.seed);
            res.checks.insert(res.checks.end(), c.begin(), c.end());
        }
        // pointwise-operator identities on all of TM
        const std::string a_rec = "F X = T X + w X";
        const std::string a_sym = "g(TX,Y) = g(X,TY)";
        const std::string a_norm = "|TX|^2 + |wX|^2 = |X|^2";
        const std::string a_t2 = "T^2 + B w = I";
        const std::string a_cw = "w T + C w = 0";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Eigen::VectorXd& p = points[i];
            const Frame frame = frame_at(spec, p);
            const PointwiseOps ops = pointwise_ops(spec.ambient, frame);
            const int k = spec.chart_dim();

            double worst = 0.0;
            DirectionSequence dirs(opts.seed ^ (0x9944aa11ULL + i), k);
            for (int rep = 0; rep < 4; ++rep) {
                const Eigen::VectorXd x = dirs.next();
                const Eigen::VectorXd lhs = spec.ambient.F * (frame.jacobian * x);
                const Eigen::VectorXd rhs =
                    frame.jacobian * (ops.T * x) + frame.normal * (ops.W * x);
                worst = std::max(worst, (lhs - rhs).norm() / lhs.norm());

                const double nsplit = std::abs(frame.inner(ops.T * x, ops.T * x) +
                                               (ops.W * x).squaredNorm() - frame.inner(x, x)) /
                                      frame.inner(x, x);
                res.checks.push_back(IdentityCheck::make("eq2", "norm" + std::to_string(rep),
                                                         a_norm, p, 0, 0, nsplit,
                                                         tol::kNormSplit));
            }
            res.checks.push_back(
                IdentityCheck::make("eq2", "reconstruction", a_rec, p, 0, 0, worst,
                                    tol::kReconstruction));

            const Eigen::MatrixXd gsym = frame.gram * ops.T - ops.T.transpose() * frame.gram;
            res.checks.push_back(IdentityCheck::make(
                "eq2", "g-symmetry", a_sym, p, 0, 0,
                gsym.cwiseAbs().maxCoeff() / frame.gram.cwiseAbs().maxCoeff(),
                tol::kGramSymmetry));

            const Eigen::MatrixXd t2 = ops.T * ops.T + ops.B * ops.W -
                                       Eigen::MatrixXd::Identity(k, k);
            res.checks.push_back(IdentityCheck::make("eq2", "T2+BW", a_t2, p, 0, 0,
                                                     t2.cwiseAbs().maxCoeff(), tol::kComposition));
            const Eigen::MatrixXd cw = ops.W * ops.T + ops.C * ops.W;
            res.checks.push_back(IdentityCheck::make("eq2", "WT+CW", a_cw, p, 0, 0,
                                                     cw.cwiseAbs().maxCoeff(), tol::kComposition));
        }
    } else if (name == "gauss-weingarten") {
        res.checks = check_gauss_weingarten(spec, points, opts.seed);
    } else if (name == "integrability") {
        const std::string anchor = "g([Z,W], X) = 0 for X normal to the distribution";
        for (const auto& d : spec.distributions) {
            const IntegrabilityReport rep = integrability(spec, d.name, points);
            if (rep.trivially_integrable) {
                res.checks.push_back(IdentityCheck::skip("integrability", d.name, anchor,
                                                         Eigen::VectorXd(),
                                                         "rank 1, trivially integrable"));
                continue;
            }
            for (const auto& br : rep.residuals) {
                res.checks.push_back(IdentityCheck::make(
                    "integrability",
                    d.name + "[" + std::to_string(br.field_a) + "," + std::to_string(br.field_b) +
                        "]",
                    anchor, br.point, br.residual, 0.0, br.residual, tol::kIntegrability));
            }
        }
    } else if (name == "lemma3.2") {
        res.checks = check_lemma_3_2(spec, points, opts.probes, opts.seed);
    } else if (name == "cor3.3") {
        res.checks = check_corollary_3_3(spec, points, opts.probes, opts.seed);
    } else if (name == "oneill") {
        res.checks = check_oneill(spec, points);
    } else if (name == "lemma4.1") {
        res.checks = check_lemma_4_1(spec, points, opts.probes, opts.seed);
    } else if (name == "lemma4.2") {
        res.checks = check_lemma_4_2(spec, points, opts.probes, opts.seed);
    } else if (name == "lemma4.3") {
        res.checks = check_lemma_4_3(spec, points, opts.probes, opts.seed);
    } else if (name == "thm4.4") {
        res.checks = check_theorem_4_4(spec, points, opts.probes, opts.seed);
    } else if (name == "eq5.1") {
        res.checks = check_characterization(spec, points, opts.probes, opts.seed);
    } else if (name == "cases") {
        res.checks = check_special_cases(spec, points, opts.probes, opts.seed);
    } else if (name == "foliation") {
        res.checks = check_foliation_geometry(spec, points, opts.probes, opts.seed);
    } else {
        throw InputError("unknown suite '" + name + "'");
    }
    return res;
}

void fill_common(Report& r, const ImmersionSpec& spec, const std::string& spec_name,
                 const SampleSet& samples, const RunOptions& opts) {
    r.spec_name = spec_name;
    r.spec_digest = content_digest(spec.source_text);
    r.seed = opts.seed;
    r.samples_requested = samples.requested;
    r.samples_used = static_cast<int>(samples.points.size());
    r.dropped_points = samples.dropped;
}

std::string format_angle_summary(const SlantFunction& f) {
    std::ostringstream os;
    if (f.classification == DistClass::SlantConstant) {
        os << "constant cos(theta) = " << std::cos((f.theta_min + f.theta_max) / 2.0);
    } else {
        os << "cos^2(theta) in [" << std::cos(f.theta_max) * std::cos(f.theta_max) << ", "
           << std::cos(f.theta_min) * std::cos(f.theta_min) << "]";
    }
    return os.str();
}

}  // namespace

Report run_classify(const ImmersionSpec& spec, const std::string& spec_name,
                    const RunOptions& opts) {
    Report r;
    r.command = "classify";
    const SampleSet samples = sample_domain(spec, opts.samples, opts.seed);
    fill_common(r, spec, spec_name, samples, opts);

    std::optional<AxiomReport> axioms;
    if (spec.distributions.size() == 2) {
        axioms = check_bislant_axioms(spec, samples.points, opts.probes, opts.seed);
        if (!axioms->pass()) r.axiom_failure = axioms->failure;
        r.proper = axioms->proper;
    }

    for (std::size_t di = 0; di < spec.distributions.size(); ++di) {
        const Distribution& d = spec.distributions[di];
        SlantFunction f;
        if (axioms) {
            f = (di == 0) ? axioms->theta1 : axioms->theta2;
        } else {
            f = slant_function(spec, d.name, samples.points, std::max(opts.probes, 2 * d.rank()),
                               opts.seed + di);
        }
        DistSummary summary;
        summary.name = d.name;
        summary.classification = f.classification;
        summary.theta_min = f.theta_min;
        summary.theta_max = f.theta_max;
        if (const SlantClaim* claim = spec.find_slant_claim(d.name)) {
            ClaimComparison cc;
            cc.subject = "slant " + d.name;
            cc.claimed = claim->theta_text;
            cc.computed = std::string(to_string(f.classification)) + ", " +
                          format_angle_summary(f);
            double worst = 0.0;
            for (const auto& s : f.samples) {
                const double claimed_theta = claim->theta.eval(s.point);
                const double cc2 = std::cos(claimed_theta) * std::cos(claimed_theta);
                const double mc2 = std::cos(s.mean) * std::cos(s.mean);
                worst = std::max(worst, std::abs(cc2 - mc2));
            }
            cc.deviation = worst;
            cc.match = worst < tol::kSlantClaim && f.classification != DistClass::None;
            summary.claim = cc;
        }
        r.classification.push_back(std::move(summary));
    }
    r.finalize();
    return r;
}

Report run_verify(const ImmersionSpec& spec, const std::string& spec_name,
                  const std::vector<std::string>& suites_arg, const RunOptions& opts) {
    Report r;
    r.command = "verify";
    const SampleSet samples = sample_domain(spec, opts.samples, opts.seed);
    fill_common(r, spec, spec_name, samples, opts);

    bool all = false;
    std::vector<std::string> wanted;
    for (const auto& s : suites_arg) {
        if (s == "all") {
            all = true;
        } else if (std::find(suite_names().begin(), suite_names().end(), s) ==
                   suite_names().end()) {
            std::ostringstream os;
            os << "unknown suite '" << s << "'; available:";
            for (const auto& n : suite_names()) os << " " << n;
            os << " all";
            throw InputError(os.str());
        } else {
            wanted.push_back(s);
        }
    }
    if (all || wanted.empty()) wanted = suite_names();

    std::optional<AxiomReport> axioms;
    if (spec.distributions.size() == 2) {
        axioms = check_bislant_axioms(spec, samples.points, opts.probes, opts.seed);
        if (!axioms->pass()) r.axiom_failure = axioms->failure;
    }
    const bool axioms_ok = axioms && axioms->pass();
    const auto roles = warp_roles(spec);

    // gates decided up front; survivors run (possibly concurrently)
    std::vector<SuiteResult> results(wanted.size());
    std::vector<int> to_run;
    for (std::size_t i = 0; i < wanted.size(); ++i) {
        const std::string& name = wanted[i];
        if (needs_axioms(name) && !axioms_ok) {
            results[i].suite = name;
            results[i].not_run_reason =
                axioms ? ("bi-slant axioms fail: " + axioms->failure)
                       : "needs exactly two declared distributions";
            continue;
        }
        if (needs_mu(name) && !roles) {
            if (!all)
                throw InputError("suite '" + name +
                                 "' requires a warped claim or a mu claim in the spec file");
            results[i].suite = name;
            results[i].not_run_reason = "no warped claim or mu available";
            continue;
        }
        to_run.push_back(static_cast<int>(i));
    }

    const int threads = std::min<int>(max_threads(), std::max<int>(1, (int)to_run.size()));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= to_run.size()) break;
            const int idx = to_run[j];
            try {
                results[static_cast<std::size_t>(idx)] =
                    run_one_suite(spec, wanted[static_cast<std::size_t>(idx)], samples.points,
                                  opts);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    if (threads <= 1 || to_run.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    r.suites = std::move(results);

    // coefficient adjudication for the derivative lemmas (informational)
    const bool lemma_requested =
        std::find(wanted.begin(), wanted.end(), "lemma4.1") != wanted.end() ||
        std::find(wanted.begin(), wanted.end(), "lemma4.2") != wanted.end();
    if (lemma_requested && axioms_ok && roles && roles->from_warped_claim) {
        auto adj = lemma_coefficient_adjudication(spec, samples.points, opts.probes, opts.seed);
        r.claims.insert(r.claims.end(), adj.begin(), adj.end());
    }

    // verify's exit contract is binary: claims never alter identity pass/fail
    r.finalize();
    if (r.exit_code == 3) {
        r.overall = "pass";
        r.exit_code = 0;
    }
    return r;
}

Report run_warped(const ImmersionSpec& spec, const std::string& spec_name,
                  const RunOptions& opts) {
    Report r;
    r.command = "warped";
    const SampleSet samples = sample_domain(spec, opts.samples, opts.seed);
    fill_common(r, spec, spec_name, samples, opts);

    WarpedReport w = recover_warping(spec, samples.points);
    SuiteResult oneill;
    oneill.suite = "oneill";
    oneill.checks = check_oneill(spec, samples.points, &w);
    SuiteResult foliation;
    foliation.suite = "foliation";
    foliation.checks = check_foliation_geometry(spec, samples.points, opts.probes, opts.seed, &w);
    r.suites.push_back(std::move(oneill));
    r.suites.push_back(std::move(foliation));
    r.warped = std::move(w);

    r.finalize();
    if (!r.warped->detected && !r.warped->aligned) {
        // no warped verdict possible; treat as input-shaped failure
        r.overall = "fail";
        r.exit_code = 1;
    } else if (!r.warped->detected) {
        r.overall = "fail";
        r.exit_code = 1;
    }
    return r;
}

Report run_examples(const ImmersionSpec& spec, const std::string& spec_name,
                    const RunOptions& opts) {
    Report classify = run_classify(spec, spec_name, opts);
    Report verify = run_verify(spec, spec_name, {"all"}, opts);
    Report r;
    r.command = "examples";
    r.spec_name = spec_name;
    r.spec_digest = classify.spec_digest;
    r.seed = opts.seed;
    r.samples_requested = classify.samples_requested;
    r.samples_used = classify.samples_used;
    r.dropped_points = classify.dropped_points;
    r.classification = classify.classification;
    r.proper = classify.proper;
    r.axiom_failure = classify.axiom_failure;
    r.suites = verify.suites;
    r.claims = verify.claims;

    int exit_code = 0;
    auto merge_exit = [&exit_code](int e) {
        auto rank = [](int c) { return c == 2 ? 3 : c == 1 ? 2 : c == 3 ? 1 : 0; };
        if (rank(e) > rank(exit_code)) exit_code = e;
    };
    merge_exit(classify.exit_code);
    merge_exit(verify.exit_code);
    if (spec.warped_claim) {
        Report warped = run_warped(spec, spec_name, opts);
        r.warped = warped.warped;
        merge_exit(warped.exit_code);
    }
    r.finalize();
    merge_exit(r.exit_code);
    r.exit_code = exit_code;
    r.overall = exit_code == 0   ? "pass"
                : exit_code == 3 ? "pass-with-mismatched-claims"
                                 : "fail";
    return r;
}

int export_slant_csv(const ImmersionSpec& spec, const std::string& dist, int grid,
                     const std::map<std::string, double>& fixed, const RunOptions& opts,
                     std::ostream& out) {
    const Distribution* d = spec.find_distribution(dist);
    if (!d) throw InputError("unknown distribution '" + dist + "'");
    if (grid < 1) throw InputError("grid must be >= 1");
    const int k = spec.chart_dim();

    std::vector<int> free_axes;
    Eigen::VectorXd base(k);
    for (int i = 0; i < k; ++i) {
        auto it = fixed.find(spec.chart[static_cast<std::size_t>(i)]);
        if (it != fixed.end()) {
            base(i) = it->second;
        } else {
            free_axes.push_back(i);
            base(i) = 0.0;
        }
    }
    for (const auto& [name, value] : fixed) {
        if (std::find(spec.chart.begin(), spec.chart.end(), name) == spec.chart.end())
            throw InputError("--fix: unknown coordinate '" + name + "'");
        (void)value;
    }

    auto axis_value = [&](int axis, int step) {
        const double lo = spec.domain[static_cast<std::size_t>(axis)][0];
        const double hi = spec.domain[static_cast<std::size_t>(axis)][1];
        if (grid == 1) return 0.5 * (lo + hi);
        return lo + (hi - lo) * static_cast<double>(step) / static_cast<double>(grid - 1);
    };

    auto format = [](double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };

    for (int i = 0; i < k; ++i) out << spec.chart[static_cast<std::size_t>(i)] << ",";
    out << "theta\n";

    const int probes = std::max(opts.probes, 2 * d->rank());
    int rows = 0;
    std::vector<int> idx(free_axes.size(), 0);
    while (true) {
        Eigen::VectorXd p = base;
        for (std::size_t a = 0; a < free_axes.size(); ++a)
            p(free_axes[a]) = axis_value(free_axes[a], idx[a]);
        try {
            const double theta = slant_angle_at(spec, *d, p, probes, opts.seed);
            for (int i = 0; i < k; ++i) out << format(p(i)) << ",";
            out << format(theta) << "\n";
            ++rows;
        } catch (const SingularPointError&) {
        } catch (const ExprError&) {
        } catch (const SpecError&) {
        }
        // advance the odometer (last axis fastest)
        int a = static_cast<int>(free_axes.size()) - 1;
        while (a >= 0) {
            if (++idx[static_cast<std::size_t>(a)] < grid) break;
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
        if (free_axes.empty()) break;
    }
    return rows;
}

}  // namespace bislant
