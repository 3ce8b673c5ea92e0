// report.hpp -- run driver, CSV/JSON/plot-data emission, CLI command bodies
#ifndef ODRRSIM_REPORT_HPP
#define ODRRSIM_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "odrrsim/metrics.hpp"
#include "odrrsim/sched.hpp"

namespace odrrsim {

struct RunArtifacts {
    std::string summary_json;
    std::string ledger_csv;
    std::string packets_csv;
    std::string events;
    std::string plot_utilization;
    std::string plot_latency;
    FinalReport final_report;
};

struct RunFlags {
    std::optional<GatingMode> gating_override;
    bool zero_cost_failures = false; // OR-ed with the scenario flag
    bool literal_delay_bound = false;
};

// Runs one (policy, seed) simulation over the whole scenario duration and
// renders every report surface. Pure function of its inputs.
RunArtifacts run_one(const ValidatedScenario& scenario, SchedulerPolicy policy,
                     std::uint64_t seed, const RunFlags& flags = {});

std::string ledger_to_csv(const MetricsLedger& ledger);
std::string packets_to_csv(const MetricsLedger& ledger);

struct RunRequest {
    std::string scenario_path;
    std::vector<SchedulerPolicy> policies;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    std::vector<std::string> formats = {"csv", "json", "plotdata"};
    RunFlags flags;
    bool compare = false;
};

// Exit codes: 0 success, 1 scenario/validation failure, 2 I/O failure.
int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_compare(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err);

} // namespace odrrsim

#endif
