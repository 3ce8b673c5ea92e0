#include "odrrsim/model.hpp"

#include <algorithm>
#include <set>

namespace odrrsim {

const char* policy_name(SchedulerPolicy p) {
    switch (p) {
        case SchedulerPolicy::DRR: return "drr";
        case SchedulerPolicy::ODRR: return "odrr";
        case SchedulerPolicy::ODRREDC: return "odrredc";
        case SchedulerPolicy::ODRRSDC: return "odrrsdc";
    }
    return "?";
}

SchedulerPolicy policy_from_name(const std::string& name) {
    if (name == "drr") return SchedulerPolicy::DRR;
    if (name == "odrr") return SchedulerPolicy::ODRR;
    if (name == "odrredc") return SchedulerPolicy::ODRREDC;
    if (name == "odrrsdc") return SchedulerPolicy::ODRRSDC;
    throw ValidationError("UnknownPolicy", name);
}

bool policy_redistributes(SchedulerPolicy p) {
    return p == SchedulerPolicy::ODRREDC || p == SchedulerPolicy::ODRRSDC;
}

const char* qos_kind_name(QoSKind k) {
    switch (k) {
        case QoSKind::UGS: return "UGS";
        case QoSKind::rtPS: return "rtPS";
        case QoSKind::ertPS: return "ertPS";
        case QoSKind::nrtPS: return "nrtPS";
        case QoSKind::BE: return "BE";
    }
    return "?";
}

QoSKind qos_kind_from_name(const std::string& name) {
    if (name == "UGS") return QoSKind::UGS;
    if (name == "rtPS") return QoSKind::rtPS;
    if (name == "ertPS") return QoSKind::ertPS;
    if (name == "nrtPS") return QoSKind::nrtPS;
    if (name == "BE") return QoSKind::BE;
    throw ValidationError("UnknownQoSKind", name);
}

const std::vector<std::string>& qos_mandatory_params(QoSKind k) {
    static const std::vector<std::string> ugs = {
        "maximum sustained traffic rate", "maximum latency", "tolerated jitter",
        "request/transmission policy"};
    static const std::vector<std::string> rtps = {
        "minimum reserved traffic rate", "maximum sustained traffic rate",
        "maximum latency", "request/transmission policy"};
    static const std::vector<std::string> ertps = {"guaranteed data rate", "delay"};
    static const std::vector<std::string> nrtps = {
        "minimum reserved traffic rate", "maximum sustained traffic rate",
        "traffic priority", "request/transmission policy"};
    static const std::vector<std::string> be = {
        "maximum sustained traffic rate", "traffic priority",
        "request/transmission policy"};
    switch (k) {
        case QoSKind::UGS: return ugs;
        case QoSKind::rtPS: return rtps;
        case QoSKind::ertPS: return ertps;
        case QoSKind::nrtPS: return nrtps;
        case QoSKind::BE: return be;
    }
    return be;
}

std::int64_t TrafficSpec::size_bound() const {
    if (kind == Kind::Static) {
        std::int64_t m = 0;
        for (const auto& p : packets) m = std::max(m, p.size);
        return m;
    }
    return cap_bytes;
}

const FlowDef& ValidatedScenario::flow(int flow_id) const {
    const FlowDef* f = find_flow(flow_id);
    if (!f)
        throw std::out_of_range("unknown flow id " + std::to_string(flow_id));
    return *f;
}

const FlowDef* ValidatedScenario::find_flow(int flow_id) const {
    for (const auto& f : config.flows)
        if (f.flow_id == flow_id) return &f;
    return nullptr;
}

namespace {

void validate_qos(const FlowDef& f) {
    const auto& required = qos_mandatory_params(f.qos.kind);
    for (const auto& name : required) {
        if (!f.qos.mandatory_params.count(name))
            throw ValidationError("MissingMandatoryParam",
                                  std::string(qos_kind_name(f.qos.kind)) + ", " + name);
    }
    for (const auto& [name, value] : f.qos.mandatory_params) {
        (void)value;
        if (std::find(required.begin(), required.end(), name) == required.end())
            throw ValidationError("UnexpectedParam",
                                  std::string(qos_kind_name(f.qos.kind)) + ", " + name);
    }
    if (f.qos.class_index_k < 0 || f.qos.class_index_k > 30)
        throw ValidationError("BadClassIndex",
                              "class_index_k out of range for flow " + std::to_string(f.flow_id));
}

void validate_traffic(const FlowDef& f, const Ratio& duration) {
    const TrafficSpec& t = f.traffic;
    if (t.kind == TrafficSpec::Kind::Static) {
        for (const auto& p : t.packets) {
            if (p.size < 1)
                throw ValidationError("BadPacketSize",
                                      "flow " + std::to_string(f.flow_id) +
                                          " has packet of size " + std::to_string(p.size));
            if (p.arrival_time < Ratio(0) || p.arrival_time > duration)
                throw ValidationError("ArrivalAfterDuration",
                                      "flow " + std::to_string(f.flow_id) +
                                          " arrival " + p.arrival_time.str());
        }
    } else {
        if (!(t.rate_pkts_per_s > Ratio(0)))
            throw ValidationError("NonPositiveRate",
                                  "poisson rate of flow " + std::to_string(f.flow_id));
        if (t.cap_bytes < 1)
            throw ValidationError("BadPacketSize",
                                  "poisson cap_bytes of flow " + std::to_string(f.flow_id));
        if (t.size_dist.kind == SizeDistribution::Kind::Fixed) {
            if (t.size_dist.fixed_bytes < 1 || t.size_dist.fixed_bytes > t.cap_bytes)
                throw ValidationError("BadPacketSize",
                                      "fixed size outside [1, cap] for flow " +
                                          std::to_string(f.flow_id));
        } else {
            if (t.size_dist.lo < 1 || t.size_dist.hi > t.cap_bytes ||
                t.size_dist.lo > t.size_dist.hi)
                throw ValidationError("BadPacketSize",
                                      "uniform size bounds for flow " +
                                          std::to_string(f.flow_id));
        }
        if (t.max_count && *t.max_count < 0)
            throw ValidationError("BadPacketSize",
                                  "negative max_count for flow " + std::to_string(f.flow_id));
    }
}

} // namespace

ValidatedScenario validate_scenario(const ScenarioConfig& raw) {
    ScenarioConfig cfg = raw;

    if (cfg.flows.empty())
        throw ValidationError("NoFlows", "scenario defines no flows");
    if (cfg.output_rate_bps <= 0)
        throw ValidationError("NonPositiveRate", "output_rate_bps must be positive");
    if (cfg.duration_s < Ratio(0))
        throw ValidationError("NegativeDuration", cfg.duration_s.str());
    if (cfg.slot_length_s && !(*cfg.slot_length_s > Ratio(0)))
        throw ValidationError("NonPositiveRate", "slot_length_s must be positive");

    std::set<int> priorities;
    std::set<int> ids;
    bool any_script = false;
    bool any_perr = false;

    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
        FlowDef& f = cfg.flows[i];
        if (f.flow_id == 0) f.flow_id = static_cast<int>(i) + 1;
        if (!ids.insert(f.flow_id).second)
            throw ValidationError("DuplicateFlowId", std::to_string(f.flow_id));
        if (!priorities.insert(f.priority).second)
            throw ValidationError("DuplicatePriority", std::to_string(f.priority));

        if (f.quantum == 0) f.quantum = cfg.quantum_default;
        if (f.quantum <= 0)
            throw ValidationError("NonPositiveQuantum",
                                  "flow " + std::to_string(f.flow_id));
        if (!(f.weight > Ratio(0)))
            throw ValidationError("NonPositiveWeight",
                                  "flow " + std::to_string(f.flow_id));
        if (f.input_rate_bps && *f.input_rate_bps <= 0)
            throw ValidationError("NonPositiveRate",
                                  "input_rate_bps of flow " + std::to_string(f.flow_id));
        if (f.p_err < Ratio(0) || f.p_err > Ratio(1))
            throw ValidationError("InvalidProbability",
                                  "p_err of flow " + std::to_string(f.flow_id));

        validate_qos(f);
        validate_traffic(f, cfg.duration_s);

        // The paper's simplifying choice: quantum >= the flow's largest packet.
        std::int64_t bound = f.traffic.size_bound();
        if (!cfg.allow_small_quantum && bound > 0 && f.quantum < bound)
            throw ValidationError("QuantumBelowMaxPacket",
                                  "flow " + std::to_string(f.flow_id) + " quantum " +
                                      std::to_string(f.quantum) + " < max packet " +
                                      std::to_string(bound));

        if (f.traffic.kind == TrafficSpec::Kind::Static)
            for (const auto& p : f.traffic.packets)
                if (p.error_script) any_script = true;
        if (f.p_err > Ratio(0)) any_perr = true;
    }

    if (!cfg.channel_explicit) {
        if (any_perr)
            cfg.channel = ChannelMode::Bernoulli;
        else if (any_script)
            cfg.channel = ChannelMode::Scripted;
        else
            cfg.channel = ChannelMode::Perfect;
        cfg.channel_explicit = true;
    }

    return ValidatedScenario{std::move(cfg)};
}

} // namespace odrrsim
