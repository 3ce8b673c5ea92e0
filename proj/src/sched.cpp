#include "odrrsim/sched.hpp"

#include <algorithm>
#include <cassert>

#include "odrrsim/traffic.hpp"

namespace odrrsim {

Engine::Engine(const ValidatedScenario& scenario, SchedulerPolicy policy,
               std::uint64_t seed, EngineOptions options)
    : scenario_(scenario), policy_(policy) {
    const ScenarioConfig& cfg = scenario_.config;
    gating_ = options.gating_override.value_or(cfg.gating);
    zero_cost_failures_ =
        options.zero_cost_failures_override.value_or(cfg.zero_cost_failures);
    line_rate_bps_ = cfg.output_rate_bps;

    ScenarioConfig seeded = cfg;
    seeded.seed = seed;
    trace_ = expand_all_traces(ValidatedScenario{seeded});
    attempt_counts_.assign(trace_.size() + 1, 0);

    for (const auto& p : trace_) max_packet_ = std::max(max_packet_, p.size);
    // A slot defaults to one maximum-size packet transmission time.
    if (cfg.slot_length_s)
        slot_length_ = *cfg.slot_length_s;
    else if (max_packet_ > 0)
        slot_length_ = Ratio(max_packet_ * 8, line_rate_bps_);
    else
        slot_length_ = Ratio(1);

    channel_ = ChannelModel(cfg.channel, seed);
    for (const auto& f : cfg.flows) {
        if (cfg.channel == ChannelMode::Bernoulli && f.p_err > Ratio(0))
            channel_.set_flow_error_probability(f.flow_id, f.p_err);
        FlowState st;
        st.flow_id = f.flow_id;
        st.priority = f.priority;
        st.qos = f.qos;
        st.quantum = f.quantum;
        flows_.emplace(f.flow_id, std::move(st));
        in_active_[f.flow_id] = false;
    }

    ledger_.packets.reserve(trace_.size());
    for (const auto& p : trace_) {
        PacketRecord pr;
        pr.packet_id = p.id;
        pr.flow_id = p.flow_id;
        pr.size = p.size;
        pr.arrival_time = p.arrival_time;
        ledger_.packets.push_back(pr);
        flows_.at(p.flow_id).pending_arrivals++;
    }
    // Flows with no traffic at all are complete from the start.
    for (auto& [id, f] : flows_)
        if (f.pending_arrivals == 0) f.completed = true;

    drain_arrivals();
}

const FlowState& Engine::flow_state(int flow_id) const {
    auto it = flows_.find(flow_id);
    if (it == flows_.end())
        throw EngineError("UnknownFlow", std::to_string(flow_id));
    return it->second;
}

bool Engine::all_completed() const {
    for (const auto& [id, f] : flows_)
        if (!f.completed) return false;
    return true;
}

void Engine::drain_arrivals() {
    while (trace_cursor_ < trace_.size() &&
           trace_[trace_cursor_].arrival_time <= clock_) {
        const Packet& p = trace_[trace_cursor_++];
        FlowState& f = flows_.at(p.flow_id);
        f.queue.push_back(p);
        f.pending_arrivals--;
        events_ += "enqueue t=" + p.arrival_time.str() + " flow=" +
                   std::to_string(p.flow_id) + " pkt=" + std::to_string(p.id) +
                   " size=" + std::to_string(p.size) + "\n";
        if (!f.suspended && !in_active_[f.flow_id]) {
            // Fig. 10 semantics: a queue (re)entering the active list starts
            // from a zero deficit counter. Idle exits already zeroed it.
            assert(f.deficit_counter == 0);
            in_active_[f.flow_id] = true;
            active_list_.push_back(f.flow_id);
        }
    }
}

void Engine::readmit_suspended() {
    std::sort(error_queue_.begin(), error_queue_.end(), [this](int a, int b) {
        return flows_.at(a).priority < flows_.at(b).priority;
    });
    for (int fid : error_queue_) {
        FlowState& f = flows_.at(fid);
        f.suspended = false;
        f.banked_readmit = f.deficit_counter > 0;
        in_active_[fid] = true;
        active_list_.push_back(fid);
        events_ += "readmit flow=" + std::to_string(fid) +
                   " dc=" + std::to_string(f.deficit_counter) + "\n";
    }
    error_queue_.clear();
}

void Engine::discard_credits(int flow_id, std::int64_t bytes, const char* reason) {
    if (bytes <= 0) return;
    DiscardRecord d;
    d.round = serving_round_ ? serving_round_ : round_index_;
    d.flow_id = flow_id;
    d.bytes = bytes;
    d.reason = reason;
    ledger_.discards.push_back(d);
    ledger_.discarded_total += bytes;
    events_ += "discard round=" + std::to_string(d.round) + " flow=" +
               std::to_string(flow_id) + " bytes=" + std::to_string(bytes) +
               " reason=" + reason + "\n";
}

void Engine::donate(int from_flow, int to_flow, std::int64_t bytes) {
    if (bytes <= 0) return;
    flows_.at(to_flow).bonus_credits += bytes;
    DonationRecord d;
    d.round = serving_round_ ? serving_round_ : round_index_;
    d.from_flow = from_flow;
    d.to_flow = to_flow;
    d.bytes = bytes;
    ledger_.donations.push_back(d);
    events_ += "donate round=" + std::to_string(d.round) + " from=" +
               std::to_string(from_flow) + " to=" + std::to_string(to_flow) +
               " bytes=" + std::to_string(bytes) + "\n";
}

void Engine::redistribute_equal(int donor_flow_id, std::int64_t leftover) {
    if (policy_ != SchedulerPolicy::ODRREDC)
        throw EngineError("WrongPolicy", "redistribute_equal requires odrredc");
    FlowState& donor = flows_.at(donor_flow_id);
    if (!donor.completed)
        throw EngineError("NotCompleted",
                          "flow " + std::to_string(donor_flow_id) + " still has work");
    donor.deficit_counter = 0;
    if (leftover <= 0) return;

    std::vector<int> recipients;
    for (const auto& [id, f] : flows_)
        if (!f.completed && f.priority < donor.priority) recipients.push_back(id);
    if (recipients.empty()) {
        discard_credits(donor_flow_id, leftover, "no-recipient");
        return;
    }
    std::sort(recipients.begin(), recipients.end(), [this](int a, int b) {
        return flows_.at(a).priority < flows_.at(b).priority;
    });
    std::int64_t n = static_cast<std::int64_t>(recipients.size());
    std::int64_t share = leftover / n;
    std::int64_t remainder = leftover % n;
    // Equal split; the leftover bytes land one each on the highest-priority
    // recipients, so a 5-byte leftover over three flows splits 2/2/1.
    for (std::size_t i = 0; i < recipients.size(); ++i) {
        std::int64_t amount = share + (static_cast<std::int64_t>(i) < remainder ? 1 : 0);
        donate(donor_flow_id, recipients[i], amount);
    }
}

void Engine::redistribute_single(int donor_flow_id, std::int64_t leftover) {
    if (policy_ != SchedulerPolicy::ODRRSDC)
        throw EngineError("WrongPolicy", "redistribute_single requires odrrsdc");
    FlowState& donor = flows_.at(donor_flow_id);
    if (!donor.completed)
        throw EngineError("NotCompleted",
                          "flow " + std::to_string(donor_flow_id) + " still has work");
    donor.deficit_counter = 0;
    if (leftover <= 0) return;

    int best = -1;
    for (const auto& [id, f] : flows_) {
        if (f.completed) continue;
        if (best < 0 || f.priority < flows_.at(best).priority) best = id;
    }
    if (best < 0) {
        discard_credits(donor_flow_id, leftover, "no-recipient");
        return;
    }
    donate(donor_flow_id, best, leftover);
}

ServiceOutcome Engine::serve_flow(int flow_id) {
    if (!flows_.count(flow_id))
        throw EngineError("UnknownFlow", std::to_string(flow_id));
    if (flows_.at(flow_id).completed)
        throw EngineError("ServeOnCompletedFlow", std::to_string(flow_id));
    return serve_flow_at(flow_id, serving_round_ ? serving_round_ : round_index_ + 1);
}

ServiceOutcome Engine::serve_flow_at(int flow_id, std::int64_t round) {
    FlowState& f = flows_.at(flow_id);

    FlowRoundRecord rec;
    rec.flow_id = flow_id;
    rec.round = round;
    rec.dc_start = f.deficit_counter;
    rec.q_credit = f.quantum;
    rec.bonus_applied = f.bonus_credits;

    // Credit step: quantum plus any banked donations.
    std::int64_t bonus = f.bonus_credits;
    f.bonus_credits = 0;
    f.banked_readmit = false;
    f.deficit_counter += f.quantum + bonus;
    ledger_.quanta_injected += f.quantum;
    std::int64_t round_credit = f.deficit_counter;

    ServiceOutcome out;
    std::int64_t attempted = 0;

    while (!f.queue.empty()) {
        const Packet& p = f.queue.front();
        if (p.size > f.deficit_counter) break; // blocked until next quantum

        std::int64_t attempt_index = attempt_counts_[p.id]++;
        AttemptRecord ar = channel_.attempt_transmit(p, round, attempt_index);
        if (ar.success || !zero_cost_failures_) {
            Ratio tx(p.size * 8, line_rate_bps_);
            clock_ += tx;
            ledger_.busy_time += tx;
        }
        ledger_.attempts.push_back(ar);
        ledger_.packets[p.id - 1].attempts++;
        attempted += p.size;
        events_ += std::string("attempt flow=") + std::to_string(flow_id) +
                   " pkt=" + std::to_string(p.id) + " size=" + std::to_string(p.size) +
                   " n=" + std::to_string(attempt_index) +
                   " result=" + (ar.success ? "ok" : "fail") + " t=" + clock_.str() + "\n";

        if (ar.success) {
            f.deficit_counter -= p.size;
            out.bytes_served += p.size;
            out.packets_served++;
            ledger_.packets[p.id - 1].completion_time = clock_;
            ledger_.bytes_served_total += p.size;
            f.queue.pop_front();
            continue;
        }

        if (policy_ == SchedulerPolicy::DRR) {
            // DRR is oblivious to channel state: the wasted transmission is
            // charged like a successful one and the packet stays for retry.
            f.deficit_counter -= p.size;
            ledger_.failed_charge_drr += p.size;
            continue;
        }

        // ODRR family: suspend on error. The failed packet's size is never
        // deducted, so the counter keeps round credit minus served bytes.
        out.suspended = true;
        f.suspended = true;
        if (policy_ == SchedulerPolicy::ODRR) {
            // DC = round credit - pf * attempted, the worked form; with
            // pf = served/attempted this is exactly credit - served.
            Ratio pf = penalty_factor(attempted, out.bytes_served);
            Ratio dc = Ratio(round_credit) - pf * Ratio(attempted);
            if (!dc.is_integer() || dc.num() != f.deficit_counter)
                throw EngineError("PenaltyMismatch", dc.str());
            events_ += "penalty flow=" + std::to_string(flow_id) + " pf=" + pf.str() +
                       " dc=" + std::to_string(f.deficit_counter) + "\n";
        }
        break;
    }

    const char* outcome = "blocked";
    if (out.suspended) {
        outcome = "suspended";
    } else if (f.queue.empty()) {
        if (f.pending_arrivals == 0) {
            f.completed = true;
            out.completed = true;
            outcome = "completed";
            std::int64_t leftover = f.deficit_counter;
            if (leftover > 0) {
                if (policy_ == SchedulerPolicy::ODRREDC)
                    redistribute_equal(flow_id, leftover);
                else if (policy_ == SchedulerPolicy::ODRRSDC)
                    redistribute_single(flow_id, leftover);
                else
                    discard_credits(flow_id, leftover, "completion");
            }
            f.deficit_counter = 0;
        } else {
            // Idle, not complete: more arrivals are coming. The counter is
            // reset now; re-entry to the active list starts from zero.
            outcome = "idle";
            discard_credits(flow_id, f.deficit_counter, "idle");
            f.deficit_counter = 0;
        }
    }

    rec.dc_end = f.deficit_counter;
    rec.bytes_served = out.bytes_served;
    rec.bytes_attempted = attempted;
    rec.packets_served = out.packets_served;
    rec.suspended_at_end = out.suspended;
    rec.completed = out.completed;
    rec.backlogged_at_end = !f.queue.empty();
    ledger_.flow_rounds.push_back(rec);

    events_ += "served flow=" + std::to_string(flow_id) + " round=" + std::to_string(round) +
               " dc0=" + std::to_string(rec.dc_start) + " q=" + std::to_string(rec.q_credit) +
               " bonus=" + std::to_string(bonus) + " bytes=" + std::to_string(out.bytes_served) +
               " attempted=" + std::to_string(attempted) +
               " dc1=" + std::to_string(rec.dc_end) + " outcome=" + outcome + "\n";
    return out;
}

bool Engine::interclass_gate(int flow_id) const {
    return gate_allows(flow_state(flow_id));
}

bool Engine::gate_allows(const FlowState& f) const {
    // Off: feature disabled. Literal: interval length equals its period, so
    // every slot is covered and the gate never blocks. Alternating: class
    // F_k owns every other block of 2^k slots.
    if (gating_ != GatingMode::Alternating) return true;
    int k = f.qos.class_index_k;
    std::int64_t block = slot_index() >> k;
    return (block & 1) == 0;
}

std::int64_t Engine::slot_index() const {
    return Ratio::floor_div(clock_, slot_length_);
}

Ratio Engine::next_eligible_time() const {
    Ratio best;
    bool found = false;
    for (int fid : active_list_) {
        const FlowState& f = flows_.at(fid);
        if (gate_allows(f)) return clock_;
        std::int64_t k = f.qos.class_index_k;
        std::int64_t block = slot_index() >> k;
        std::int64_t next_slot = (block + 1) << k;
        Ratio t = Ratio(next_slot) * slot_length_;
        if (!found || t < best) {
            best = t;
            found = true;
        }
    }
    return found ? best : clock_;
}

RoundReport Engine::run_round(std::optional<Ratio> t_limit) {
    RoundReport rep;
    drain_arrivals();

    if (active_list_.empty()) {
        if (!error_queue_.empty()) {
            readmit_suspended();
        } else if (trace_cursor_ < trace_.size()) {
            // Idle system: jump to the earliest pending arrival.
            Ratio next = trace_[trace_cursor_].arrival_time;
            if (t_limit && next > *t_limit) {
                rep.idle = true;
                rep.no_progress = true;
                return rep;
            }
            events_ += "idle t=" + clock_.str() + " -> " + next.str() + "\n";
            clock_ = next;
            drain_arrivals();
            rep.idle = true;
            rep.round_index = round_index_;
            rep.t_begin = rep.t_end = clock_;
            return rep;
        } else {
            rep.idle = true;
            rep.no_progress = true;
            return rep;
        }
    }

    serving_round_ = round_index_ + 1;
    rep.round_index = serving_round_;
    rep.t_begin = clock_;
    events_ += "round " + std::to_string(serving_round_) + " begin t=" + clock_.str() + "\n";

    std::size_t n = active_list_.size();
    std::int64_t total = 0;
    bool any_service = false;
    for (std::size_t i = 0; i < n; ++i) {
        drain_arrivals();
        int fid = active_list_.front();
        active_list_.pop_front();
        FlowState& f = flows_.at(fid);
        if (!gate_allows(f)) {
            events_ += "gate skip flow=" + std::to_string(fid) +
                       " slot=" + std::to_string(slot_index()) + "\n";
            active_list_.push_back(fid);
            continue;
        }
        in_active_[fid] = false;
        any_service = true;
        ServiceOutcome so = serve_flow_at(fid, serving_round_);
        rep.bytes_by_flow[fid] = so.bytes_served;
        total += so.bytes_served;
        if (so.suspended) {
            error_queue_.push_back(fid);
        } else if (!f.queue.empty()) {
            in_active_[fid] = true;
            active_list_.push_back(fid);
        }
    }

    round_index_ = serving_round_;
    serving_round_ = 0;
    drain_arrivals();
    rep.t_end = clock_;
    ledger_.rounds.push_back(RoundBoundary{round_index_, rep.t_begin, rep.t_end});

    // Donations of this round, mirrored into the recipients' rows.
    for (const auto& d : ledger_.donations) {
        if (d.round != round_index_) continue;
        for (auto it = ledger_.flow_rounds.rbegin(); it != ledger_.flow_rounds.rend(); ++it) {
            if (it->round != round_index_) break;
            if (it->flow_id == d.to_flow) it->bonus_received += d.bytes;
        }
    }

    check_round_invariants();
    events_ += "round " + std::to_string(round_index_) + " end t=" + clock_.str() +
               " served=" + std::to_string(total) + "\n";

    if (active_list_.empty() && !error_queue_.empty()) readmit_suspended();

    if (!any_service && !active_list_.empty()) {
        // Every backlogged flow was gated off; advance to the earliest slot
        // where some class becomes eligible again.
        Ratio t = next_eligible_time();
        if (t > clock_) {
            if (t_limit && t > *t_limit) {
                rep.no_progress = true;
                return rep;
            }
            events_ += "idle t=" + clock_.str() + " -> " + t.str() + "\n";
            clock_ = t;
            drain_arrivals();
        }
    }
    return rep;
}

void Engine::check_round_invariants() {
    // Lemma 1 at the round boundary: counters are never negative, and any
    // flow in normal rotation is capped by the maximum packet size. A
    // suspended flow banks its unused round credit for re-admission, so the
    // upper bound applies again at its first post-readmission service.
    std::int64_t dc_sum = 0;
    std::int64_t bonus_sum = 0;
    for (const auto& [id, f] : flows_) {
        if (f.deficit_counter < 0)
            throw EngineError("Lemma1Violation",
                              "flow " + std::to_string(id) + " DC < 0");
        if (!f.suspended && !f.banked_readmit && f.deficit_counter > max_packet_)
            throw EngineError("Lemma1Violation",
                              "flow " + std::to_string(id) + " DC " +
                                  std::to_string(f.deficit_counter) + " > M " +
                                  std::to_string(max_packet_));
        dc_sum += f.deficit_counter;
        bonus_sum += f.bonus_credits;
    }
    // Credit conservation: everything injected is served, burned on DRR
    // retries, still sitting in a counter or bank, or was discarded.
    std::int64_t rhs = ledger_.bytes_served_total + ledger_.failed_charge_drr + dc_sum +
                       bonus_sum + ledger_.discarded_total;
    if (ledger_.quanta_injected != rhs)
        throw EngineError("ConservationViolation",
                          std::to_string(ledger_.quanta_injected) + " injected vs " +
                              std::to_string(rhs) + " accounted");
}

FinalReport Engine::run_until(const Ratio& t_end) {
    if (t_end > scenario_.config.duration_s)
        throw std::invalid_argument("run_until: t_end beyond scenario duration");
    std::int64_t guard = 0;
    while (clock_ < t_end && !all_completed()) {
        RoundReport rep = run_round(t_end);
        if (rep.no_progress) break;
        if (++guard > kRoundCap)
            throw EngineError("RoundLimitExceeded", std::to_string(kRoundCap));
    }
    finalize();
    FinalReport fin;
    fin.rounds = round_index_;
    fin.clock_end = clock_;
    fin.all_completed = all_completed();
    fin.total_bytes_served = ledger_.bytes_served_total;
    return fin;
}

void Engine::finalize() {
    ledger_.terminal_dc_total = 0;
    ledger_.outstanding_bonus = 0;
    for (const auto& [id, f] : flows_) {
        ledger_.terminal_dc_total += f.deficit_counter;
        ledger_.outstanding_bonus += f.bonus_credits;
    }
    ledger_.clock_end = clock_;
    finalized_ = true;
}

} // namespace odrrsim
