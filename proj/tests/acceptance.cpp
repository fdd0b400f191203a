// Acceptance suite: one check per shipping criterion, one line of output
// each. Run via ctest or directly; exits nonzero when any criterion fails.

#include "bislant/fixtures.hpp"
#include "bislant/suites.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

using namespace bislant;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
}

ImmersionSpec fixture(const char* name) {
    return load_spec(std::string(fixtures::find(name)->text));
}

constexpr int kSamples = 32;
constexpr std::uint64_t kSeed = 42;
const RunOptions kOpts{kSamples, kSeed, 8};

bool suites_pass(const Report& rep, double bound, std::string& detail) {
    int skipped = 0;
    double worst = 0.0;
    for (const auto& s : rep.suites) {
        if (s.not_run_reason) continue;
        skipped += s.skipped_count();
        for (const auto& c : s.checks) {
            if (c.skipped) continue;
            worst = std::max(worst, c.residual);
            if (!c.pass || c.residual >= bound) {
                detail = s.suite + "/" + c.name + " residual " + std::to_string(c.residual);
                return false;
            }
        }
    }
    std::ostringstream os;
    os << "max residual " << worst << ", " << skipped << " degenerate checks skipped";
    detail = os.str();
    return true;
}

// Brute-force slant oracle, independent of PointwiseOps: dense directions,
// tangential projection via a raw gram solve.
void dense_slant(const ImmersionSpec& spec, const Distribution& dist, const Eigen::VectorXd& p,
                 double& cos2_lo, double& cos2_hi, double& omega_ratio) {
    const Frame fr = frame_at(spec, p);
    Eigen::MatrixXd E(spec.chart_dim(), dist.rank());
    for (int j = 0; j < dist.rank(); ++j)
        E.col(j) = dist.fields[static_cast<std::size_t>(j)].eval(p);
    cos2_lo = 2.0;
    cos2_hi = -1.0;
    omega_ratio = 0.0;
    const int dense = 240;
    for (int i = 0; i < dense; ++i) {
        Eigen::VectorXd c(dist.rank());
        if (dist.rank() == 1) {
            c << (i % 2 ? -1.0 : 1.0);
        } else {
            const double a = std::numbers::pi * i / dense;
            c.setZero();
            c(0) = std::cos(a);
            c(1) = std::sin(a);
        }
        const Eigen::VectorXd ambient = fr.jacobian * (E * c);
        const Eigen::VectorXd Fx = spec.ambient.F * ambient;
        const Eigen::VectorXd t = fr.gram.ldlt().solve(fr.jacobian.transpose() * Fx);
        const Eigen::VectorXd tangent = fr.jacobian * t;
        const double cos2 = tangent.squaredNorm() / ambient.squaredNorm();
        cos2_lo = std::min(cos2_lo, cos2);
        cos2_hi = std::max(cos2_hi, cos2);
        omega_ratio = std::max(omega_ratio, (Fx - tangent).norm() / ambient.norm());
    }
}

struct CliResult {
    int exit_code = -1;
};

CliResult run_cli(const std::string& args) {
    const char* cli = std::getenv("BISLANT_CLI");
    if (!cli) throw std::runtime_error("BISLANT_CLI not set");
    const int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const ClaimComparison* find_claim(const Report& rep, const std::string& dist) {
    for (const auto& d : rep.classification)
        if (d.name == dist && d.claim) return &*d.claim;
    return nullptr;
}

}  // namespace

int main() {
    criterion(1, "structure validation: both signature structures exactly involutive isometries",
              [](std::string& detail) {
                  for (const char* name : {"ex6.1", "ex6.2"}) {
                      const ImmersionSpec spec = fixture(name);
                      const StructureReport rep = validate_structure(spec.ambient.F);
                      if (!rep.valid || rep.involution_residual != 0.0 ||
                          rep.isometry_residual != 0.0) {
                          detail = std::string(name) + ": residuals not exactly zero";
                          return false;
                      }
                  }
                  detail = "F^2 = I and F^T F = I with residual 0";
                  return true;
              });

    criterion(2, "structure-operator suite (reconstruction, g-symmetry, norm split, "
                 "compatibility relations) below 1e-8 at 32 points",
              [](std::string& detail) {
                  for (const char* name : {"ex6.1", "ex6.2"}) {
                      const Report rep = run_verify(fixture(name), name, {"eq2"}, kOpts);
                      std::string d;
                      if (!suites_pass(rep, 1e-8, d)) {
                          detail = std::string(name) + ": " + d;
                          return false;
                      }
                      detail += std::string(name) + " [" + d + "] ";
                  }
                  return true;
              });

    criterion(3, "slant functions match their claimed closed forms (cos^2 within 1e-9)",
              [](std::string& detail) {
                  const Report r61 = run_classify(fixture("ex6.1"), "ex6.1", kOpts);
                  const ClaimComparison* d2 = find_claim(r61, "D2");
                  if (!d2 || !d2->match || d2->deviation >= 1e-9) {
                      detail = "ex6.1 D2 claim did not match";
                      return false;
                  }
                  const Report r62 = run_classify(fixture("ex6.2"), "ex6.2", kOpts);
                  const ClaimComparison* d1 = find_claim(r62, "D1");
                  if (!d1 || !d1->match || d1->deviation >= 1e-9) {
                      detail = "ex6.2 D1 claim did not match";
                      return false;
                  }
                  std::ostringstream os;
                  os << "deviations " << d2->deviation << " and " << d1->deviation;
                  detail = os.str();
                  return true;
              });

    criterion(4, "adjudication by the brute-force oracle: one invariant distribution and one "
                 "constant slant sqrt(5)/3, both flagged as claim mismatches",
              [](std::string& detail) {
                  const ImmersionSpec s61 = fixture("ex6.1");
                  for (const auto& p : sample_domain(s61, kSamples, kSeed).points) {
                      double lo, hi, omega;
                      dense_slant(s61, s61.distributions[0], p, lo, hi, omega);
                      if (omega >= 1e-9) {
                          detail = "oracle: omega does not vanish on the first distribution";
                          return false;
                      }
                  }
                  const Report r61 = run_classify(s61, "ex6.1", kOpts);
                  if (r61.classification[0].classification != DistClass::Invariant ||
                      !find_claim(r61, "D1") || find_claim(r61, "D1")->match) {
                      detail = "ex6.1 D1 not reported invariant-with-mismatch";
                      return false;
                  }

                  const ImmersionSpec s62 = fixture("ex6.2");
                  const double expect = std::sqrt(5.0) / 3.0;
                  for (const auto& p : sample_domain(s62, kSamples, kSeed).points) {
                      double lo, hi, omega;
                      dense_slant(s62, s62.distributions[1], p, lo, hi, omega);
                      if (std::abs(std::sqrt(lo) - expect) >= 1e-9 ||
                          std::abs(std::sqrt(hi) - expect) >= 1e-9) {
                          detail = "oracle: cos theta differs from sqrt(5)/3";
                          return false;
                      }
                  }
                  const Report r62 = run_classify(s62, "ex6.2", kOpts);
                  const auto& c2 = r62.classification[1];
                  if (c2.classification != DistClass::SlantConstant ||
                      std::abs(std::cos(c2.theta_min) - expect) >= 1e-9 ||
                      std::abs(std::cos(c2.theta_max) - expect) >= 1e-9 ||
                      !find_claim(r62, "D2") || find_claim(r62, "D2")->match) {
                      detail = "ex6.2 D2 not reported as constant sqrt(5)/3 with mismatch";
                      return false;
                  }
                  if (r61.exit_code != 3 || r62.exit_code != 3) {
                      detail = "classification exit codes are not 3";
                      return false;
                  }
                  detail = "oracle and classifier agree; both claims flagged";
                  return true;
              });

    criterion(5, "Gauss/Weingarten reconstruction, duality, differenced Weingarten and the "
                 "christoffel cross-check within their bounds",
              [](std::string& detail) {
                  for (const char* name : {"ex6.1", "ex6.2"}) {
                      const Report rep =
                          run_verify(fixture(name), name, {"gauss-weingarten"}, kOpts);
                      for (const auto& s : rep.suites) {
                          if (s.not_run_reason) continue;
                          for (const auto& c : s.checks) {
                              if (c.skipped) continue;
                              const double bound = c.name == "gauss"        ? 1e-9
                                                   : c.name == "duality"    ? 1e-10
                                                   : c.name == "weingarten" ? 1e-5
                                                                            : 1e-5;
                              if (!c.pass || c.residual >= bound) {
                                  detail = std::string(name) + "/" + c.name + " residual " +
                                           std::to_string(c.residual);
                                  return false;
                              }
                          }
                      }
                  }
                  return true;
              });

    criterion(6, "warped detection: recovered warpings match the claims (ratio variance < "
                 "1e-10), O'Neill < 1e-5, and the measured base cross term equals u*w",
              [](std::string& detail) {
                  {
                      const ImmersionSpec spec = fixture("ex6.2");
                      const auto points = sample_domain(spec, kSamples, kSeed).points;
                      WarpedReport rep = recover_warping(spec, points);
                      check_oneill(spec, points, &rep);
                      if (!rep.detected || !rep.claim_match ||
                          rep.claim_ratio_variance >= 1e-10 || rep.oneill_residual >= 1e-5) {
                          detail = "ex6.2 recovery or O'Neill out of bounds";
                          return false;
                      }
                  }
                  {
                      const ImmersionSpec spec = fixture("ex6.1");
                      const auto points = sample_domain(spec, kSamples, kSeed).points;
                      WarpedReport rep = recover_warping(spec, points);
                      check_oneill(spec, points, &rep);
                      if (!rep.detected || !rep.claim_match || rep.oneill_residual >= 1e-5) {
                          detail = "ex6.1 recovery or O'Neill out of bounds";
                          return false;
                      }
                      for (std::size_t i = 0; i < points.size(); ++i) {
                          const double uw = points[i](0) * points[i](2);
                          if (std::abs(rep.base_block_samples[i](0, 1) - uw) >= 1e-10) {
                              detail = "ex6.1 base cross term does not equal u*w";
                              return false;
                          }
                      }
                      if (rep.note.find("g(du, dw)") == std::string::npos) {
                          detail = "ex6.1 base-metric note missing";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(7, "full identity suites (3.2, 3.3, 4.1-4.3 incl. the intermediate identity, "
                 "4.4, the characterization, the applicable special case, foliation) below "
                 "1e-5 on both fixtures",
              [](std::string& detail) {
                  const std::vector<std::string> suites = {
                      "lemma3.2", "cor3.3", "oneill",  "lemma4.1", "lemma4.2",
                      "lemma4.3", "thm4.4", "eq5.1",   "cases",    "foliation"};
                  for (const char* name : {"ex6.1", "ex6.2"}) {
                      const Report rep = run_verify(fixture(name), name, suites, kOpts);
                      std::string d;
                      if (!suites_pass(rep, 1e-5, d)) {
                          detail = std::string(name) + ": " + d;
                          return false;
                      }
                      detail += std::string(name) + " [" + d + "] ";
                  }
                  return true;
              });

    criterion(8, "negative controls: non-integrable span fails (> 0.1), perturbed metric "
                 "fails umbilicity, axiom (b) violation names its witness pair",
              [](std::string& detail) {
                  {
                      const ImmersionSpec spec = fixture("toy_nonintegrable");
                      const auto points = sample_domain(spec, kSamples, kSeed).points;
                      const IntegrabilityReport rep = integrability(spec, "D1", points);
                      if (rep.pass || rep.max_residual <= 0.1) {
                          detail = "integrability did not fail hard enough";
                          return false;
                      }
                  }
                  {
                      const ImmersionSpec spec = fixture("toy_perturbed");
                      const auto points = sample_domain(spec, kSamples, kSeed).points;
                      WarpedReport rep = recover_warping(spec, points);
                      check_foliation_geometry(spec, points, 8, kSeed, &rep);
                      if (rep.fiber_umbilic_residual < 1e-3) {
                          detail = "perturbed toy passed umbilicity";
                          return false;
                      }
                  }
                  {
                      const ImmersionSpec spec = fixture("toy_fcross");
                      const auto points = sample_domain(spec, kSamples, kSeed).points;
                      const AxiomReport rep = check_bislant_axioms(spec, points, 8, kSeed);
                      if (rep.cross_pass || !rep.cross_witness) {
                          detail = "axiom (b) violation not detected";
                          return false;
                      }
                      if (rep.cross_witness->dist_x != "D1" || rep.cross_witness->dist_z != "D2") {
                          detail = "witness pair not named";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(9, "two CLI runs with identical spec, seed and samples write byte-identical "
                 "JSON reports",
              [](std::string& detail) {
                  const char* fixtures_dir = std::getenv("BISLANT_FIXTURES");
                  if (!fixtures_dir) throw std::runtime_error("BISLANT_FIXTURES not set");
                  const std::string spec = std::string(fixtures_dir) + "/ex62.lps";
                  const std::string base =
                      "verify " + spec + " --suite all --samples " + std::to_string(kSamples) +
                      " --seed " + std::to_string(kSeed) + " -o ";
                  if (run_cli(base + "/tmp/bislant_acc_a.json").exit_code != 0 ||
                      run_cli(base + "/tmp/bislant_acc_b.json").exit_code != 0) {
                      detail = "verify run failed";
                      return false;
                  }
                  const std::string a = slurp("/tmp/bislant_acc_a.json");
                  if (a.empty() || a != slurp("/tmp/bislant_acc_b.json")) {
                      detail = "reports differ";
                      return false;
                  }
                  detail = std::to_string(a.size()) + " bytes, identical";
                  return true;
              });

    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
