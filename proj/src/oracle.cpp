// oracle.cpp -- brute-force cross-check of the round semantics
//
// Deliberately written flat, with plain arrays and no code shared with the
// engine, so it can serve as an independent referee for completion rounds.
#include <algorithm>
#include <vector>

#include "odrrsim/metrics.hpp"

namespace odrrsim {

namespace {

struct OraclePacket {
    std::int64_t size;
    std::vector<bool> script; // per-attempt outcomes; exhausted = success
    std::int64_t attempts = 0;
};

struct OracleFlow {
    int id;
    int priority;
    std::int64_t quantum;
    std::vector<OraclePacket> pkts;
    std::size_t head = 0;
    std::int64_t dc = 0;
    std::int64_t bonus = 0;
    bool done = false;
};

} // namespace

std::map<int, std::int64_t> oracle_simulate(const ValidatedScenario& scenario,
                                            SchedulerPolicy policy) {
    const ScenarioConfig& cfg = scenario.config;
    if (cfg.flows.size() > 8)
        throw MetricsError("ScenarioTooLarge", "more than 8 flows");
    if (cfg.channel == ChannelMode::Bernoulli)
        throw MetricsError("ScenarioTooLarge", "oracle needs scripted or perfect channel");

    std::vector<OracleFlow> flows;
    for (const auto& fd : cfg.flows) {
        if (fd.traffic.kind != TrafficSpec::Kind::Static)
            throw MetricsError("ScenarioTooLarge", "oracle needs static traffic");
        if (fd.traffic.packets.size() > 10)
            throw MetricsError("ScenarioTooLarge", "more than 10 packets in a flow");
        OracleFlow f;
        f.id = fd.flow_id;
        f.priority = fd.priority;
        f.quantum = fd.quantum;
        for (const auto& pd : fd.traffic.packets) {
            if (!pd.arrival_time.is_zero())
                throw MetricsError("ScenarioTooLarge", "oracle needs all arrivals at t=0");
            OraclePacket op;
            op.size = pd.size;
            if (cfg.channel == ChannelMode::Scripted && pd.error_script)
                op.script = *pd.error_script;
            f.pkts.push_back(op);
        }
        flows.push_back(std::move(f));
    }

    std::map<int, std::int64_t> completion;
    std::vector<std::size_t> order, errq;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (flows[i].pkts.empty()) {
            flows[i].done = true;
            completion[flows[i].id] = 0;
        } else {
            order.push_back(i);
        }
    }

    auto prio_less = [&](std::size_t a, std::size_t b) {
        return flows[a].priority < flows[b].priority;
    };

    std::int64_t round = 0;
    while (!order.empty() || !errq.empty()) {
        if (order.empty()) {
            std::sort(errq.begin(), errq.end(), prio_less);
            order = errq;
            errq.clear();
        }
        ++round;
        if (round > 1000000)
            throw MetricsError("ScenarioTooLarge", "oracle round cap exceeded");

        std::vector<std::size_t> current = order;
        order.clear();
        for (std::size_t idx : current) {
            OracleFlow& f = flows[idx];
            f.dc += f.quantum + f.bonus;
            f.bonus = 0;
            bool errored = false;
            while (f.head < f.pkts.size()) {
                OraclePacket& p = f.pkts[f.head];
                if (p.size > f.dc) break;
                bool ok = true;
                if (p.attempts < static_cast<std::int64_t>(p.script.size()))
                    ok = p.script[static_cast<std::size_t>(p.attempts)];
                p.attempts++;
                if (ok) {
                    f.dc -= p.size;
                    f.head++;
                } else if (policy == SchedulerPolicy::DRR) {
                    f.dc -= p.size; // charged, packet stays
                } else {
                    errored = true; // failed packet not charged
                    break;
                }
            }
            if (errored) {
                errq.push_back(idx);
            } else if (f.head == f.pkts.size()) {
                f.done = true;
                completion[f.id] = round;
                std::int64_t leftover = f.dc;
                f.dc = 0;
                if (leftover > 0 && policy == SchedulerPolicy::ODRREDC) {
                    std::vector<std::size_t> rcpt;
                    for (std::size_t j = 0; j < flows.size(); ++j)
                        if (!flows[j].done && flows[j].priority < f.priority)
                            rcpt.push_back(j);
                    std::sort(rcpt.begin(), rcpt.end(), prio_less);
                    if (!rcpt.empty()) {
                        std::int64_t share = leftover / std::int64_t(rcpt.size());
                        std::int64_t extra = leftover % std::int64_t(rcpt.size());
                        for (std::size_t j = 0; j < rcpt.size(); ++j)
                            flows[rcpt[j]].bonus +=
                                share + (std::int64_t(j) < extra ? 1 : 0);
                    }
                } else if (leftover > 0 && policy == SchedulerPolicy::ODRRSDC) {
                    std::size_t best = flows.size();
                    for (std::size_t j = 0; j < flows.size(); ++j)
                        if (!flows[j].done &&
                            (best == flows.size() || prio_less(j, best)))
                            best = j;
                    if (best < flows.size()) flows[best].bonus += leftover;
                }
            } else {
                order.push_back(idx);
            }
        }
    }
    return completion;
}

} // namespace odrrsim
