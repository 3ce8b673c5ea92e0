// model.hpp -- domain types shared by the scheduler, traffic and metrics code
#ifndef ODRRSIM_MODEL_HPP
#define ODRRSIM_MODEL_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "odrrsim/rational.hpp"

namespace odrrsim {

// Validation failures carry a stable kind string ("DuplicatePriority", ...)
// that the CLI prints verbatim and tests match on.
class ValidationError : public std::runtime_error {
  public:
    ValidationError(std::string kind, std::string detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

enum class SchedulerPolicy { DRR, ODRR, ODRREDC, ODRRSDC };

const char* policy_name(SchedulerPolicy p);
SchedulerPolicy policy_from_name(const std::string& name);
bool policy_redistributes(SchedulerPolicy p);

// 802.16 scheduling service classes. The mandatory parameter set per kind is
// fixed; validation rejects any subset or superset. Parameter values are
// carried metadata only.
enum class QoSKind { UGS, rtPS, ertPS, nrtPS, BE };

const char* qos_kind_name(QoSKind k);
QoSKind qos_kind_from_name(const std::string& name);
const std::vector<std::string>& qos_mandatory_params(QoSKind k);

using ParamValue = std::variant<Ratio, std::string>;

struct QoSClass {
    QoSKind kind = QoSKind::BE;
    int class_index_k = 0; // drives the 2^k inter-class interval
    std::map<std::string, ParamValue> mandatory_params;

    bool latency_critical() const {
        return kind == QoSKind::UGS || kind == QoSKind::rtPS || kind == QoSKind::ertPS;
    }
};

// One transmission unit. error_script, when present, is consumed one entry
// per transmission attempt (true = succeed); an exhausted script succeeds.
struct Packet {
    std::uint64_t id = 0;
    int flow_id = 0;
    std::int64_t size = 0; // bytes
    Ratio arrival_time;    // seconds
    std::optional<std::vector<bool>> error_script;
};

struct SizeDistribution {
    enum class Kind { Fixed, UniformInt } kind = Kind::Fixed;
    std::int64_t fixed_bytes = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// Packet as written in a scenario file, before global id assignment.
struct PacketDef {
    std::int64_t size = 0;
    Ratio arrival_time;
    std::optional<std::vector<bool>> error_script;
};

struct TrafficSpec {
    enum class Kind { Static, Poisson } kind = Kind::Static;
    std::vector<PacketDef> packets;           // Static
    Ratio rate_pkts_per_s;                    // Poisson
    SizeDistribution size_dist;               // Poisson
    std::int64_t cap_bytes = 0;               // Poisson
    std::optional<std::int64_t> max_count;    // Poisson; optional generator cap

    // Largest packet this spec can produce (declared max or generator cap).
    std::int64_t size_bound() const;
};

struct FlowDef {
    int flow_id = 0;
    int priority = 0; // lower number = higher priority; unique per scenario
    std::int64_t quantum = 0;
    Ratio weight = Ratio(1);
    std::optional<std::int64_t> input_rate_bps;
    Ratio p_err; // Bernoulli per-attempt error probability
    QoSClass qos;
    TrafficSpec traffic;
};

enum class ChannelMode { Perfect, Scripted, Bernoulli };
enum class GatingMode { Off, Literal, Alternating };

struct ScenarioConfig {
    std::vector<FlowDef> flows;
    std::int64_t output_rate_bps = 0; // line rate B, bits per second
    Ratio duration_s;
    std::int64_t quantum_default = 0;
    std::uint64_t seed = 1;
    SchedulerPolicy policy = SchedulerPolicy::DRR;
    ChannelMode channel = ChannelMode::Perfect;
    bool channel_explicit = false; // channel mode named in the file
    GatingMode gating = GatingMode::Off;
    std::optional<Ratio> slot_length_s;
    bool allow_small_quantum = false;
    bool zero_cost_failures = false;
    std::string name; // optional label
};

// A scenario that passed validate_scenario: invariants checked, defaults
// filled, flows kept in file order. Immutable by convention.
struct ValidatedScenario {
    ScenarioConfig config;

    const FlowDef& flow(int flow_id) const;
    const FlowDef* find_flow(int flow_id) const;
};

// Checks every scenario invariant and fills defaults. Deterministic: the
// same input always yields the same validated form.
ValidatedScenario validate_scenario(const ScenarioConfig& raw);

// M: maximum packet size over the fully expanded scenario traces
// (generators are expanded with the scenario seed).
std::int64_t max_packet_size(const ValidatedScenario& scenario);

// Per-flow run state owned by the engine. deficit_counter and bonus_credits
// are byte balances; bonus_credits stays zero under DRR and plain ODRR.
struct FlowState {
    int flow_id = 0;
    int priority = 0;
    QoSClass qos;
    std::deque<Packet> queue;
    std::int64_t deficit_counter = 0;
    std::int64_t quantum = 0;
    std::int64_t bonus_credits = 0;
    bool suspended = false;
    bool completed = false;
    std::int64_t pending_arrivals = 0; // trace packets not yet enqueued
    bool banked_readmit = false; // re-admitted carrying suspension credit, not yet served
};

} // namespace odrrsim

#endif
