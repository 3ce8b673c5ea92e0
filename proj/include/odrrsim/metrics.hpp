// metrics.hpp -- run ledger plus the PT/SPT/FM, latency and delay-bound math
#ifndef ODRRSIM_METRICS_HPP
#define ODRRSIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odrrsim/channel.hpp"
#include "odrrsim/model.hpp"

namespace odrrsim {

// One row per (flow, round) in which the flow was actually serviced.
struct FlowRoundRecord {
    int flow_id = 0;
    std::int64_t round = 0;
    std::int64_t q_credit = 0;       // quantum added at service start
    std::int64_t bonus_applied = 0;  // banked donations cashed in at service start
    std::int64_t dc_start = 0;       // deficit counter before crediting
    std::int64_t dc_end = 0;         // deficit counter when service ended
    std::int64_t bytes_served = 0;
    std::int64_t bytes_attempted = 0; // includes failed attempts
    std::int64_t packets_served = 0;
    std::int64_t bonus_received = 0; // donations banked for this flow this round
    bool suspended_at_end = false;
    bool completed = false;
    bool backlogged_at_end = false;
};

struct PacketRecord {
    std::uint64_t packet_id = 0;
    int flow_id = 0;
    std::int64_t size = 0;
    Ratio arrival_time;
    std::optional<Ratio> completion_time; // set when served successfully
    std::int64_t attempts = 0;
};

struct RoundBoundary {
    std::int64_t round = 0;
    Ratio t_begin;
    Ratio t_end;
};

struct DonationRecord {
    std::int64_t round = 0;
    int from_flow = 0;
    int to_flow = 0;
    std::int64_t bytes = 0;
};

struct DiscardRecord {
    std::int64_t round = 0;
    int flow_id = 0;
    std::int64_t bytes = 0;
    std::string reason; // completion | idle | no-recipient
};

// Append-only record of everything a run did; all reports and checks are
// recomputable from it.
struct MetricsLedger {
    std::vector<FlowRoundRecord> flow_rounds;
    std::vector<PacketRecord> packets; // one per trace packet, id order
    std::vector<AttemptRecord> attempts;
    std::vector<RoundBoundary> rounds;
    std::vector<DonationRecord> donations;
    std::vector<DiscardRecord> discards;

    Ratio busy_time;  // output line occupied (all attempt transmission times)
    Ratio clock_end;  // simulation clock at run end
    std::int64_t quanta_injected = 0;      // sum of q_credit over services
    std::int64_t failed_charge_drr = 0;    // credits burned on failed DRR attempts
    std::int64_t terminal_dc_total = 0;    // deficit counters left at run end
    std::int64_t outstanding_bonus = 0;    // banked donations never cashed
    std::int64_t discarded_total = 0;
    std::int64_t bytes_served_total = 0;

    const FlowRoundRecord* find_round(int flow_id, std::int64_t round) const;
    const PacketRecord* find_packet(std::uint64_t packet_id) const;
    std::int64_t last_round() const { return rounds.empty() ? 0 : rounds.back().round; }
    std::optional<std::int64_t> completion_round(int flow_id) const;
};

class MetricsError : public std::runtime_error {
  public:
    MetricsError(std::string kind, std::string detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

// PT_i(K): potential throughput of flow i in round K, computed from the
// ledger as credits applied plus the deficit-counter drop. For DRR/ODRR the
// credit is exactly the quantum; for the redistributing policies it is the
// quantum plus cashed bonus (the paper's enlarged quantum).
std::int64_t potential_throughput(const MetricsLedger& ledger, int flow_id,
                                  std::int64_t round);

// SPT over [round_from, round_to], inclusive; sums PT over rounds in which
// the flow was serviced. Telescopes to credits + DC(start) - DC(end).
std::int64_t cumulative_potential_throughput(const MetricsLedger& ledger, int flow_id,
                                             std::int64_t round_from,
                                             std::int64_t round_to);

struct FairnessResult {
    bool applicable = false;
    Ratio value; // max over ordered pairs of SPT_i/w_i - SPT_j/w_j
    int max_flow = 0;
    int min_flow = 0;
};

// Fairness over the whole rounds falling inside [t1, t2]. Only flows
// serviced and backlogged through every such round participate. A
// single-flow scenario yields 0; otherwise, with no qualifying pair the
// result is not-applicable (NoBackloggedPair).
FairnessResult fairness_measure(const MetricsLedger& ledger, const Ratio& t1,
                                const Ratio& t2, const std::map<int, Ratio>& weights,
                                std::size_t scenario_flow_count);

struct LatencyStats {
    Ratio mean;
    Ratio max;
    std::int64_t packets = 0;
};

// Per-packet latency = completion - arrival, over served packets.
LatencyStats per_flow_latency(const MetricsLedger& ledger, int flow_id);

// ((n_critical * s) + max_quantum) * 8 / B seconds: the dimensionally
// consistent reading of the paper's latency bound.
Ratio delay_bound(std::int64_t n_critical, std::int64_t s_bytes,
                  std::int64_t max_quantum_bytes, std::int64_t output_rate_bps);

// The bound as literally printed, (n*s) + Max/B, kept only for comparison;
// the units do not work out, hence double.
double delay_bound_literal(std::int64_t n_critical, std::int64_t s_bytes,
                           std::int64_t max_quantum_bytes, std::int64_t output_rate_bps);

// Successfully served bits over line capacity times busy time.
Ratio bandwidth_utilization(const MetricsLedger& ledger, int flow_id,
                            std::int64_t output_rate_bps);

// Independent straight-line re-implementation of the round semantics used to
// cross-check the engine. Shares only the scenario types with the engine.
// Returns flow id -> completion round (absent if the flow never completes
// within the round cap). Restricted to small scripted scenarios.
std::map<int, std::int64_t> oracle_simulate(const ValidatedScenario& scenario,
                                            SchedulerPolicy policy);

} // namespace odrrsim

#endif
