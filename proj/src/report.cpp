#include "bislant/report.hpp"

#include <cstdio>
#include <sstream>

namespace bislant {

std::string content_digest(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool Report::any_identity_failure() const {
    for (const auto& s : suites)
        if (!s.pass()) return true;
    return axiom_failure.has_value();
}

bool Report::any_claim_mismatch() const {
    for (const auto& c : claims)
        if (!c.match) return true;
    for (const auto& d : classification)
        if (d.claim && !d.claim->match) return true;
    if (warped && warped->has_claim && !warped->claim_match) return true;
    return false;
}

void Report::finalize() {
    if (any_identity_failure()) {
        overall = "fail";
        exit_code = 1;
    } else if (any_claim_mismatch()) {
        overall = "pass-with-mismatched-claims";
        exit_code = 3;
    } else {
        overall = "pass";
        exit_code = 0;
    }
}

namespace {

nlohmann::ordered_json point_json(const Eigen::VectorXd& p) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (int i = 0; i < p.size(); ++i) a.push_back(p(i));
    return a;
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::ordered_json to_json(const IdentityCheck& c) {
    nlohmann::ordered_json j;
    j["suite"] = c.suite;
    j["check"] = c.name;
    j["anchor"] = c.anchor;
    j["point"] = point_json(c.point);
    if (c.skipped) {
        j["skipped"] = true;
        j["skipped_reason"] = c.skip_reason;
    } else {
        j["lhs"] = c.lhs;
        j["rhs"] = c.rhs;
        j["residual"] = c.residual;
        j["threshold"] = c.threshold;
        j["pass"] = c.pass;
    }
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

nlohmann::ordered_json to_json(const SuiteResult& s) {
    nlohmann::ordered_json j;
    j["suite"] = s.suite;
    if (s.not_run_reason) {
        j["not_run"] = *s.not_run_reason;
        j["pass"] = true;
        return j;
    }
    j["pass"] = s.pass();
    j["max_residual"] = s.max_residual();
    j["checks_total"] = s.checks.size();
    j["checks_skipped"] = s.skipped_count();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : s.checks) arr.push_back(to_json(c));
    j["checks"] = std::move(arr);
    return j;
}

nlohmann::ordered_json to_json(const ClaimComparison& c) {
    nlohmann::ordered_json j;
    j["subject"] = c.subject;
    j["claimed"] = c.claimed;
    j["computed"] = c.computed;
    j["verdict"] = c.match ? "match" : "mismatch";
    j["deviation"] = c.deviation;
    return j;
}

nlohmann::ordered_json to_json(const WarpedReport& w) {
    nlohmann::ordered_json j;
    j["base"] = w.base;
    j["fiber"] = w.fiber;
    j["aligned"] = w.aligned;
    j["verdict"] = w.verdict;
    j["detected"] = w.detected;
    j["trivial"] = w.trivial;
    j["cross_residual"] = w.cross_residual;
    j["base_dependence_residual"] = w.base_dep_residual;
    j["fiber_conformal_residual"] = w.fiber_conformal_residual;
    j["warping_base_dependence_residual"] = w.f_base_dep_residual;
    j["f_samples"] = w.f_samples;
    if (w.has_claim) {
        j["claim_ratio_mean"] = w.claim_ratio_mean;
        j["claim_ratio_variance"] = w.claim_ratio_variance;
        j["f_claim_residual"] = w.f_claim_residual;
        j["claim_match"] = w.claim_match;
    }
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    for (const auto& b : w.base_block_samples) blocks.push_back(matrix_json(b));
    j["base_metric_samples"] = std::move(blocks);
    if (!w.note.empty()) j["note"] = w.note;
    if (w.oneill_residual >= 0.0) j["oneill_residual"] = w.oneill_residual;
    if (w.base_geodesic_residual >= 0.0) j["base_geodesic_residual"] = w.base_geodesic_residual;
    if (w.fiber_umbilic_residual >= 0.0) j["fiber_umbilic_residual"] = w.fiber_umbilic_residual;
    if (w.mu_fiber_residual >= 0.0) j["mu_fiber_residual"] = w.mu_fiber_residual;
    return j;
}

nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema"] = kSchemaVersion;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = r.command;
    j["spec"] = r.spec_name;
    j["spec_digest"] = r.spec_digest;
    j["seed"] = r.seed;
    j["samples_requested"] = r.samples_requested;
    j["samples_used"] = r.samples_used;
    j["dropped_points"] = r.dropped_points;
    if (!r.classification.empty()) {
        nlohmann::ordered_json cls = nlohmann::ordered_json::array();
        for (const auto& d : r.classification) {
            nlohmann::ordered_json c;
            c["distribution"] = d.name;
            c["classification"] = to_string(d.classification);
            c["theta_min"] = d.theta_min;
            c["theta_max"] = d.theta_max;
            if (d.claim) c["claim"] = to_json(*d.claim);
            cls.push_back(std::move(c));
        }
        j["classification"] = std::move(cls);
    }
    if (r.proper) j["proper"] = *r.proper;
    if (r.axiom_failure) j["axiom_failure"] = *r.axiom_failure;
    if (!r.suites.empty()) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& s : r.suites) arr.push_back(to_json(s));
        j["suites"] = std::move(arr);
    }
    if (!r.claims.empty()) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : r.claims) arr.push_back(to_json(c));
        j["claims"] = std::move(arr);
    }
    if (r.warped) j["warped"] = to_json(*r.warped);
    j["overall"] = r.overall;
    j["exit_code"] = r.exit_code;
    return j;
}

std::string summarize(const Report& r) {
    std::ostringstream os;
    os << kToolName << " " << r.command << " " << r.spec_name << " (seed " << r.seed
       << ", samples " << r.samples_used << "/" << r.samples_requested << ")\n";
    if (r.axiom_failure) os << "  axioms: FAIL  " << *r.axiom_failure << "\n";
    for (const auto& d : r.classification) {
        os << "  " << d.name << ": " << to_string(d.classification);
        if (d.classification != DistClass::Invariant && d.classification != DistClass::None)
            os << "  theta in [" << d.theta_min << ", " << d.theta_max << "]";
        if (d.claim)
            os << "  claim " << (d.claim->match ? "MATCH" : "MISMATCH") << " (" << d.claim->claimed
               << ")";
        os << "\n";
    }
    if (r.proper) os << "  proper pointwise bi-slant: " << (*r.proper ? "yes" : "no") << "\n";
    for (const auto& s : r.suites) {
        if (s.not_run_reason) {
            os << "  " << s.suite << ": skipped (" << *s.not_run_reason << ")\n";
            continue;
        }
        os << "  " << s.suite << ": " << (s.pass() ? "pass" : "FAIL") << "  max residual "
           << s.max_residual();
        if (s.skipped_count() > 0) os << "  (" << s.skipped_count() << " checks skipped)";
        os << "\n";
    }
    for (const auto& c : r.claims) {
        os << "  claim [" << c.subject << "]: " << (c.match ? "match" : "MISMATCH") << " - "
           << c.computed << "\n";
    }
    if (r.warped) {
        os << "  warped: " << r.warped->verdict;
        if (r.warped->has_claim)
            os << "  f-claim " << (r.warped->claim_match ? "MATCH" : "MISMATCH")
               << " (ratio variance " << r.warped->claim_ratio_variance << ")";
        if (!r.warped->note.empty()) os << "\n  note: " << r.warped->note;
        os << "\n";
    }
    os << "  overall: " << r.overall << " (exit " << r.exit_code << ")\n";
    return os.str();
}

}  // namespace bislant
