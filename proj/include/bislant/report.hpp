#pragma once

#include "bislant/check.hpp"
#include "bislant/dist.hpp"
#include "bislant/structops.hpp"
#include "bislant/warp.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bislant {

inline constexpr const char* kToolName = "bislant";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// FNV-1a 64-bit content hash, hex-encoded.
std::string content_digest(const std::string& text);

/// Classification summary per distribution, with the claim comparison.
struct DistSummary {
    std::string name;
    DistClass classification = DistClass::None;
    double theta_min = 0.0, theta_max = 0.0;
    std::optional<ClaimComparison> claim;
};

struct Report {
    std::string command;  // classify | verify | warped | examples
    std::string spec_name;
    std::string spec_digest;
    std::uint64_t seed = 0;
    int samples_requested = 0;
    int samples_used = 0;
    int dropped_points = 0;
    std::vector<SuiteResult> suites;
    std::vector<ClaimComparison> claims;
    std::vector<DistSummary> classification;
    std::optional<bool> proper;
    std::optional<std::string> axiom_failure;
    std::optional<WarpedReport> warped;
    std::string overall;  // pass | fail | pass-with-mismatched-claims | input-error
    int exit_code = 0;

    bool any_identity_failure() const;
    bool any_claim_mismatch() const;
    /// Sets overall and exit_code from the recorded results.
    void finalize();
};

nlohmann::ordered_json to_json(const IdentityCheck& c);
nlohmann::ordered_json to_json(const SuiteResult& s);
nlohmann::ordered_json to_json(const ClaimComparison& c);
nlohmann::ordered_json to_json(const WarpedReport& w);
nlohmann::ordered_json to_json(const Report& r);

/// Human-readable one-line-per-suite summary.
std::string summarize(const Report& r);

}  // namespace bislant
