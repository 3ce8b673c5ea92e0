// sched.hpp -- the DRR/ODRR/ODRREDC/ODRRSDC round-robin engine
#ifndef ODRRSIM_SCHED_HPP
#define ODRRSIM_SCHED_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odrrsim/channel.hpp"
#include "odrrsim/metrics.hpp"
#include "odrrsim/model.hpp"

namespace odrrsim {

class EngineError : public std::runtime_error {
  public:
    EngineError(std::string kind, std::string detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct ServiceOutcome {
    std::int64_t bytes_served = 0;
    std::int64_t packets_served = 0;
    bool suspended = false;
    bool completed = false;
};

struct RoundReport {
    std::int64_t round_index = 0;
    bool idle = false;        // no service pass happened (clock jump or drained)
    bool no_progress = false; // nothing pending, or next event beyond the limit
    std::map<int, std::int64_t> bytes_by_flow;
    Ratio t_begin;
    Ratio t_end;
};

struct FinalReport {
    std::int64_t rounds = 0;
    Ratio clock_end;
    bool all_completed = false;
    std::int64_t total_bytes_served = 0;
};

struct EngineOptions {
    std::optional<GatingMode> gating_override;
    std::optional<bool> zero_cost_failures_override;
};

// Round-robin service over the ActiveList with per-policy deficit-counter
// accounting:
//
//   DRR      failures are charged like successes and retried; no suspension.
//   ODRR     a failure suspends the flow to the error queue; the deficit
//            counter keeps round credit minus the penalty-scaled attempt,
//            which works out to credit minus successfully served bytes.
//   ODRREDC  like ODRR, plus a flow completing with leftover credits splits
//            them equally among higher-priority uncompleted flows.
//   ODRRSDC  like ODRR, plus the whole leftover goes to the single
//            highest-priority uncompleted flow.
//
// Donated credits are banked as bonus_credits and cashed at the recipient's
// next service. Suspended flows are parked until the active list drains of
// error-free backlogged flows, then re-admitted in priority order.
//
// All times are exact rationals; one engine instance owns one run.
class Engine {
  public:
    Engine(const ValidatedScenario& scenario, SchedulerPolicy policy, std::uint64_t seed,
           EngineOptions options = {});

    // One pass over the active list (or one idle/readmission step when the
    // list is empty). t_limit stops idle clock jumps beyond that time.
    RoundReport run_round(std::optional<Ratio> t_limit = std::nullopt);

    // Rounds until clock >= t_end or every flow completed. Finalizes the
    // ledger totals.
    FinalReport run_until(const Ratio& t_end);

    // Credits the flow and serves head-of-line packets while they fit.
    // Normally driven by run_round; callable directly for stepping.
    ServiceOutcome serve_flow(int flow_id);

    // Donation rules, exposed for direct checking. Both zero the donor's
    // deficit counter; with no eligible recipient the leftover is discarded.
    void redistribute_equal(int donor_flow_id, std::int64_t leftover);
    void redistribute_single(int donor_flow_id, std::int64_t leftover);

    // Inter-class gate: is this flow's class inside its scheduling interval
    // at the current clock?
    bool interclass_gate(int flow_id) const;

    void finalize();

    const MetricsLedger& ledger() const { return ledger_; }
    const std::string& event_log() const { return events_; }
    const FlowState& flow_state(int flow_id) const;
    std::int64_t round_index() const { return round_index_; }
    Ratio clock() const { return clock_; }
    std::int64_t max_packet() const { return max_packet_; }
    SchedulerPolicy policy() const { return policy_; }
    bool all_completed() const;

    static constexpr std::int64_t kRoundCap = 5'000'000;

  private:
    ServiceOutcome serve_flow_at(int flow_id, std::int64_t round);
    void drain_arrivals();
    void readmit_suspended();
    void discard_credits(int flow_id, std::int64_t bytes, const char* reason);
    void donate(int from_flow, int to_flow, std::int64_t bytes);
    bool gate_allows(const FlowState& f) const;
    std::int64_t slot_index() const;
    Ratio next_eligible_time() const;
    void check_round_invariants();
    void log_round_served(std::int64_t round, std::int64_t total);

    ValidatedScenario scenario_;
    SchedulerPolicy policy_;
    GatingMode gating_;
    bool zero_cost_failures_;
    std::int64_t line_rate_bps_;
    std::int64_t max_packet_ = 0;
    Ratio slot_length_;

    std::vector<Packet> trace_;
    std::size_t trace_cursor_ = 0;
    std::vector<std::int64_t> attempt_counts_; // by packet id

    std::map<int, FlowState> flows_;
    std::map<int, bool> in_active_;
    std::deque<int> active_list_;
    std::vector<int> error_queue_;

    std::int64_t round_index_ = 0;
    std::int64_t serving_round_ = 0; // round number while a pass is running
    Ratio clock_;

    ChannelModel channel_;
    MetricsLedger ledger_;
    std::string events_;
    bool finalized_ = false;
};

} // namespace odrrsim

#endif
