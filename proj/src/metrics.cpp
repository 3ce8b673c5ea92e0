#include "odrrsim/metrics.hpp"

#include <algorithm>

namespace odrrsim {

const FlowRoundRecord* MetricsLedger::find_round(int flow_id, std::int64_t round) const {
    for (const auto& r : flow_rounds)
        if (r.flow_id == flow_id && r.round == round) return &r;
    return nullptr;
}

const PacketRecord* MetricsLedger::find_packet(std::uint64_t packet_id) const {
    if (packet_id == 0 || packet_id > packets.size()) return nullptr;
    return &packets[packet_id - 1];
}

std::optional<std::int64_t> MetricsLedger::completion_round(int flow_id) const {
    for (const auto& r : flow_rounds)
        if (r.flow_id == flow_id && r.completed) return r.round;
    return std::nullopt;
}

std::int64_t potential_throughput(const MetricsLedger& ledger, int flow_id,
                                  std::int64_t round) {
    const FlowRoundRecord* r = ledger.find_round(flow_id, round);
    if (!r)
        throw MetricsError("UnknownRound", "flow " + std::to_string(flow_id) +
                                               " round " + std::to_string(round));
    // credits applied this round plus the counter drop; bonus_applied is the
    // delta that turns Q into the enlarged quantum of the redistributing
    // policies (zero under DRR and plain ODRR).
    return r->q_credit + r->bonus_applied + r->dc_start - r->dc_end;
}

std::int64_t cumulative_potential_throughput(const MetricsLedger& ledger, int flow_id,
                                             std::int64_t round_from,
                                             std::int64_t round_to) {
    if (round_from > round_to) return 0;
    if (round_from < 1 || round_to > ledger.last_round())
        throw MetricsError("UnknownRound",
                           "window [" + std::to_string(round_from) + ", " +
                               std::to_string(round_to) + "] outside recorded rounds");
    std::int64_t total = 0;
    for (const auto& r : ledger.flow_rounds)
        if (r.flow_id == flow_id && r.round >= round_from && r.round <= round_to)
            total += r.q_credit + r.bonus_applied + r.dc_start - r.dc_end;
    return total;
}

FairnessResult fairness_measure(const MetricsLedger& ledger, const Ratio& t1,
                                const Ratio& t2, const std::map<int, Ratio>& weights,
                                std::size_t scenario_flow_count) {
    if (t2 < t1)
        throw std::invalid_argument("fairness_measure: t1 > t2");

    // Whole rounds inside the interval; partial rounds are excluded.
    std::vector<std::int64_t> window;
    for (const auto& rb : ledger.rounds)
        if (rb.t_begin >= t1 && rb.t_end <= t2) window.push_back(rb.round);

    FairnessResult res;
    if (scenario_flow_count <= 1) {
        res.applicable = true; // max over the empty pair set
        res.value = Ratio(0);
        return res;
    }
    if (window.empty())
        return res;

    // A flow participates if it was serviced, unsuspended and still
    // backlogged in every round of the window.
    std::map<int, std::int64_t> spt;
    for (const auto& [flow_id, w] : weights) {
        (void)w;
        bool ok = true;
        std::int64_t sum = 0;
        for (std::int64_t k : window) {
            const FlowRoundRecord* r = ledger.find_round(flow_id, k);
            if (!r || r->suspended_at_end || !r->backlogged_at_end) {
                ok = false;
                break;
            }
            sum += r->q_credit + r->bonus_applied + r->dc_start - r->dc_end;
        }
        if (ok) spt[flow_id] = sum;
    }
    if (spt.size() < 2)
        return res; // NoBackloggedPair: bound not applicable

    bool first = true;
    Ratio hi, lo;
    int hi_flow = 0, lo_flow = 0;
    for (const auto& [flow_id, s] : spt) {
        Ratio v = Ratio(s) / weights.at(flow_id);
        if (first || v > hi) {
            hi = v;
            hi_flow = flow_id;
        }
        if (first || v < lo) {
            lo = v;
            lo_flow = flow_id;
        }
        first = false;
    }
    res.applicable = true;
    res.value = hi - lo;
    res.max_flow = hi_flow;
    res.min_flow = lo_flow;
    return res;
}

LatencyStats per_flow_latency(const MetricsLedger& ledger, int flow_id) {
    LatencyStats st;
    Ratio sum(0);
    for (const auto& p : ledger.packets) {
        if (p.flow_id != flow_id || !p.completion_time) continue;
        Ratio lat = *p.completion_time - p.arrival_time;
        sum += lat;
        if (st.packets == 0 || lat > st.max) st.max = lat;
        st.packets++;
    }
    if (st.packets == 0)
        throw MetricsError("NoServedPackets", "flow " + std::to_string(flow_id));
    st.mean = sum / Ratio(st.packets);
    return st;
}

Ratio delay_bound(std::int64_t n_critical, std::int64_t s_bytes,
                  std::int64_t max_quantum_bytes, std::int64_t output_rate_bps) {
    if (s_bytes <= 0 || max_quantum_bytes <= 0 || output_rate_bps <= 0 || n_critical < 0)
        throw std::invalid_argument("delay_bound: inputs must be positive");
    return Ratio((n_critical * s_bytes + max_quantum_bytes) * 8, output_rate_bps);
}

double delay_bound_literal(std::int64_t n_critical, std::int64_t s_bytes,
                           std::int64_t max_quantum_bytes, std::int64_t output_rate_bps) {
    return double(n_critical) * double(s_bytes) +
           double(max_quantum_bytes) * 8.0 / double(output_rate_bps);
}

Ratio bandwidth_utilization(const MetricsLedger& ledger, int flow_id,
                            std::int64_t output_rate_bps) {
    if (ledger.busy_time.is_zero()) return Ratio(0);
    std::int64_t bits = 0;
    for (const auto& r : ledger.flow_rounds)
        if (r.flow_id == flow_id) bits += r.bytes_served * 8;
    return Ratio(bits) / (Ratio(output_rate_bps) * ledger.busy_time);
}

} // namespace odrrsim
