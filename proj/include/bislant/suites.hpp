#pragma once

#include "bislant/report.hpp"

#include <iosfwd>
#include <map>

namespace bislant {

struct RunOptions {
    int samples = 32;
    std::uint64_t seed = 42;
    int probes = 8;
};

/// Error in user input (bad suite name, missing claim for a requested suite).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All identity suites driven by `verify`, in report order.
const std::vector<std::string>& suite_names();

/// Axioms + slant functions + classification + claim comparison.
Report run_classify(const ImmersionSpec& spec, const std::string& spec_name,
                    const RunOptions& opts);

/// Identity suites; `suites` entries must name known suites or "all".
Report run_verify(const ImmersionSpec& spec, const std::string& spec_name,
                  const std::vector<std::string>& suites, const RunOptions& opts);

/// Warped detection + O'Neill + foliation geometry.
Report run_warped(const ImmersionSpec& spec, const std::string& spec_name,
                  const RunOptions& opts);

/// classify + verify all + warped, with the worst exit code.
Report run_examples(const ImmersionSpec& spec, const std::string& spec_name,
                    const RunOptions& opts);

/// Slant function on a per-axis grid; `fixed` pins coordinates to values.
/// CSV columns: chart coordinates, then theta (radians). Returns rows written.
int export_slant_csv(const ImmersionSpec& spec, const std::string& dist, int grid,
                     const std::map<std::string, double>& fixed, const RunOptions& opts,
                     std::ostream& out);

/// Thread cap: BISLANT_THREADS when set, else min(hardware, 4), at least 1.
int max_threads();

}  // namespace bislant
