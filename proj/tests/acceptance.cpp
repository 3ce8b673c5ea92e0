// acceptance.cpp -- the artifact's acceptance gate, one line per criterion
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "odrrsim/metrics.hpp"
#include "odrrsim/report.hpp"
#include "odrrsim/sched.hpp"
#include "odrrsim/traffic.hpp"
#include "test_util.hpp"

using namespace odrrsim;
using testutil::load_scenario;

namespace {

constexpr SchedulerPolicy kAllPolicies[] = {SchedulerPolicy::DRR, SchedulerPolicy::ODRR,
                                            SchedulerPolicy::ODRREDC,
                                            SchedulerPolicy::ODRRSDC};

struct Failure {
    std::string detail;
};

using CheckFn = std::function<void(std::vector<Failure>&)>;

bool run_criterion(int number, const std::string& title, double budget_s, CheckFn fn) {
    std::vector<Failure> failures;
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(failures);
    } catch (const std::exception& e) {
        failures.push_back({std::string("exception: ") + e.what()});
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && elapsed > budget_s)
        failures.push_back({"runtime " + std::to_string(elapsed) + " s exceeds budget " +
                            std::to_string(budget_s) + " s"});
    if (failures.empty()) {
        std::printf("PASS criterion %2d: %s (%.2f s)\n", number, title.c_str(), elapsed);
        return true;
    }
    std::printf("FAIL criterion %2d: %s (%.2f s)\n", number, title.c_str(), elapsed);
    for (std::size_t i = 0; i < failures.size() && i < 5; ++i)
        std::printf("    - %s\n", failures[i].detail.c_str());
    if (failures.size() > 5)
        std::printf("    ... and %zu more\n", failures.size() - 5);
    return false;
}

void expect(std::vector<Failure>& fails, bool cond, const std::string& msg) {
    if (!cond) fails.push_back({msg});
}

FlowDef gen_flow(int id, int priority) {
    FlowDef f;
    f.flow_id = id;
    f.priority = priority;
    f.qos.kind = QoSKind::BE;
    f.qos.mandatory_params["maximum sustained traffic rate"] = Ratio(9000);
    f.qos.mandatory_params["traffic priority"] = Ratio(priority);
    f.qos.mandatory_params["request/transmission policy"] = std::string("contention");
    return f;
}

// Randomized scenario for the lemma suites: up to 10 flows, Bernoulli error
// probability drawn from {0, 1/10, 3/10}, staggered arrivals.
ValidatedScenario random_lemma_scenario(std::uint64_t seed) {
    DeterministicRng rng(derive_seed(seed, 0xacce97ed, 1));
    ScenarioConfig cfg;
    cfg.output_rate_bps = 9000;
    cfg.quantum_default = 750;
    cfg.channel = ChannelMode::Bernoulli;
    cfg.channel_explicit = true;
    const Ratio perrs[3] = {Ratio(0), Ratio(1, 10), Ratio(3, 10)};
    int n_flows = 1 + int(rng.next_u64() % 10);
    std::int64_t total_bytes = 0;
    for (int i = 1; i <= n_flows; ++i) {
        FlowDef f = gen_flow(i, i);
        f.p_err = perrs[rng.next_u64() % 3];
        std::int64_t flow_max = 0;
        int n_pkts = 1 + int(rng.next_u64() % 12);
        for (int k = 0; k < n_pkts; ++k) {
            PacketDef p;
            p.size = rng.uniform_int(1, 750);
            // most packets arrive at t=0, some stagger in later
            if (rng.next_u64() % 4 == 0)
                p.arrival_time = Ratio(rng.uniform_int(0, 30), 1);
            flow_max = std::max(flow_max, p.size);
            total_bytes += p.size;
            f.traffic.packets.push_back(p);
        }
        f.quantum = rng.uniform_int(flow_max, flow_max + 500);
        cfg.flows.push_back(f);
    }
    cfg.duration_s = Ratio(total_bytes * 8 * 12, cfg.output_rate_bps) + Ratio(100);
    return validate_scenario(cfg);
}

// Small scripted scenario inside the oracle's limits, arrivals all at t=0.
ValidatedScenario random_oracle_scenario(std::uint64_t seed) {
    DeterministicRng rng(derive_seed(seed, 0x04ac1e00, 2));
    ScenarioConfig cfg;
    cfg.output_rate_bps = 9000;
    cfg.quantum_default = 750;
    cfg.channel = ChannelMode::Scripted;
    cfg.channel_explicit = true;
    int n_flows = 1 + int(rng.next_u64() % 8);
    std::int64_t attempt_bytes = 0;
    for (int i = 1; i <= n_flows; ++i) {
        FlowDef f = gen_flow(i, i);
        std::int64_t flow_max = 0;
        int n_pkts = 1 + int(rng.next_u64() % 10);
        for (int k = 0; k < n_pkts; ++k) {
            PacketDef p;
            p.size = rng.uniform_int(1, 750);
            std::uint64_t roll = rng.next_u64() % 10;
            std::int64_t fails = roll < 2 ? 1 : (roll == 2 ? 2 : 0);
            if (fails > 0) p.error_script = std::vector<bool>(std::size_t(fails), false);
            flow_max = std::max(flow_max, p.size);
            attempt_bytes += p.size * (fails + 1);
            f.traffic.packets.push_back(p);
        }
        f.quantum = rng.uniform_int(flow_max, flow_max + 450);
        cfg.flows.push_back(f);
    }
    cfg.duration_s = Ratio(attempt_bytes * 8, cfg.output_rate_bps) + Ratio(1000);
    return validate_scenario(cfg);
}

struct LemmaStats {
    std::int64_t boundaries = 0;
    std::int64_t windows = 0;
};

// Criterion 4 checker: 0 <= DC at every recorded point; DC <= M at the end
// of every round in which the flow was in normal rotation. A flow suspended
// with banked credit is outside the rotation until its next service, which
// is where the bound applies again.
void check_lemma1(const MetricsLedger& led, std::int64_t m, std::vector<Failure>& fails,
                  LemmaStats& stats) {
    for (const auto& r : led.flow_rounds) {
        ++stats.boundaries;
        expect(fails, r.dc_start >= 0 && r.dc_end >= 0,
               "negative DC for flow " + std::to_string(r.flow_id) + " round " +
                   std::to_string(r.round));
        if (!r.suspended_at_end)
            expect(fails, r.dc_end <= m,
                   "DC " + std::to_string(r.dc_end) + " > M " + std::to_string(m) +
                       " for flow " + std::to_string(r.flow_id) + " round " +
                       std::to_string(r.round));
    }
}

// Criterion 5 checker: over every maximal run of consecutive serviced,
// unsuspended, still-backlogged rounds opening at DC <= M, every sub-window
// of m rounds satisfies m*Q - M <= SPT <= credits + M (credits = m*Q plus
// any cashed bonus; bonus is zero under DRR/ODRR, giving the literal lemma).
void check_lemma2(const MetricsLedger& led, const ValidatedScenario& s, std::int64_t m,
                  std::vector<Failure>& fails, LemmaStats& stats) {
    for (const auto& fd : s.config.flows) {
        std::vector<const FlowRoundRecord*> rows;
        for (const auto& r : led.flow_rounds)
            if (r.flow_id == fd.flow_id) rows.push_back(&r);
        std::size_t i = 0;
        while (i < rows.size()) {
            // maximal eligible segment of consecutive rounds
            std::size_t j = i;
            auto eligible = [&](const FlowRoundRecord* r) {
                return !r->suspended_at_end && r->backlogged_at_end;
            };
            if (!eligible(rows[i])) {
                ++i;
                continue;
            }
            while (j + 1 < rows.size() && eligible(rows[j + 1]) &&
                   rows[j + 1]->round == rows[j]->round + 1)
                ++j;
            // prefix sums over [i, j]
            std::size_t len = j - i + 1;
            std::vector<std::int64_t> pt(len + 1, 0), credits(len + 1, 0);
            for (std::size_t k = 0; k < len; ++k) {
                const auto* r = rows[i + k];
                pt[k + 1] = pt[k] + r->q_credit + r->bonus_applied + r->dc_start - r->dc_end;
                credits[k + 1] = credits[k] + r->q_credit + r->bonus_applied;
            }
            for (std::size_t a = 0; a < len; ++a) {
                if (rows[i + a]->dc_start > m) continue; // banked re-admission credit
                for (std::size_t b = a; b < len; ++b) {
                    ++stats.windows;
                    std::int64_t rounds = std::int64_t(b - a + 1);
                    std::int64_t spt = pt[b + 1] - pt[a];
                    std::int64_t window_credits = credits[b + 1] - credits[a];
                    expect(fails, spt >= rounds * fd.quantum - m,
                           "SPT " + std::to_string(spt) + " below m*Q - M for flow " +
                               std::to_string(fd.flow_id));
                    expect(fails, spt <= window_credits + m,
                           "SPT " + std::to_string(spt) + " above credits + M for flow " +
                               std::to_string(fd.flow_id));
                }
            }
            i = j + 1;
        }
    }
}

} // namespace

int main() {
    bool ok = true;
    std::vector<std::pair<MetricsLedger, std::pair<ValidatedScenario, std::int64_t>>> lemma_runs;

    // ---------------------------------------------------------------- 1
    ok &= run_criterion(1, "ODRR worked example: penalty 550/700, DC exactly 200", 1.0,
                        [&](std::vector<Failure>& fails) {
        ValidatedScenario s = load_scenario("fig1_odrr.json");
        Engine e(s, SchedulerPolicy::ODRR, 1);
        e.run_until(s.config.duration_s);
        const FlowRoundRecord* r2 = e.ledger().find_round(2, 2);
        expect(fails, r2 != nullptr, "flow 2 round 2 missing from ledger");
        if (!r2) return;
        Ratio pf = penalty_factor(r2->bytes_attempted, r2->bytes_served);
        expect(fails, pf == Ratio(550, 700),
               "penalty factor " + pf.str() + " != 550/700");
        expect(fails, r2->bytes_attempted == 700, "attempted bytes != 700");
        expect(fails, r2->bytes_served == 550, "served bytes != 550");
        expect(fails, r2->dc_end == 200,
               "post-suspension DC " + std::to_string(r2->dc_end) + " != 200");
        // the worked arithmetic: DC = 750 - pf * 700, exactly
        expect(fails, Ratio(750) - pf * Ratio(700) == Ratio(200),
               "750 - pf*700 is not exactly 200");
    });

    // ---------------------------------------------------------------- 2
    ok &= run_criterion(2, "redistribution saves exactly one round on the walkthrough", 1.0,
                        [&](std::vector<Failure>& fails) {
        ValidatedScenario s = load_scenario("walkthrough.json");
        Engine edc(s, SchedulerPolicy::ODRREDC, 1);
        Engine control(s, SchedulerPolicy::ODRR, 1);
        edc.run_until(s.config.duration_s);
        control.run_until(s.config.duration_s);
        auto with = edc.ledger().completion_round(1);
        auto without = control.ledger().completion_round(1);
        expect(fails, with.has_value() && without.has_value(),
               "errored flow did not complete");
        if (!with || !without) return;
        expect(fails, *without - *with == 1,
               "completion rounds " + std::to_string(*with) + " vs " +
                   std::to_string(*without) + ", expected a difference of exactly 1");
    });

    // ---------------------------------------------------------------- 3
    ok &= run_criterion(3, "ODRRSDC hands the donor's whole leftover to one flow", 1.0,
                        [&](std::vector<Failure>& fails) {
        ValidatedScenario s = load_scenario("walkthrough.json");
        Engine e(s, SchedulerPolicy::ODRRSDC, 1);
        e.run_until(s.config.duration_s);
        const auto& dons = e.ledger().donations;
        expect(fails, !dons.empty(), "no donation recorded");
        if (dons.empty()) return;
        // flow 2 completes with 50 left; all 50 go to the highest-priority
        // uncompleted flow (flow 1), banked whole
        const DonationRecord& d = dons.front();
        expect(fails, d.from_flow == 2 && d.bytes == 50,
               "first donor expected to give 50 bytes from flow 2");
        expect(fails, d.to_flow == 1, "recipient is not the highest-priority flow");
        std::int64_t banked = 0;
        for (const auto& dd : dons)
            if (dd.from_flow == 2) banked += dd.bytes;
        expect(fails, banked == 50, "donor's leftover was split, not given whole");
    });

    // ------------------------------------------------------------- 4 & 5
    LemmaStats l1_stats, l2_stats;
    std::vector<Failure> lemma2_fails;
    ok &= run_criterion(4, "lemma 1 over 1000 random scenarios x 4 policies", 60.0,
                        [&](std::vector<Failure>& fails) {
        for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
            ValidatedScenario s = random_lemma_scenario(seed);
            std::int64_t m = max_packet_size(s);
            for (SchedulerPolicy p : kAllPolicies) {
                Engine e(s, p, seed);
                e.run_until(s.config.duration_s);
                check_lemma1(e.ledger(), m, fails, l1_stats);
                check_lemma2(e.ledger(), s, m, lemma2_fails, l2_stats);
                if (fails.size() > 20) return;
            }
        }
        expect(fails, l1_stats.boundaries > 100000,
               "suspiciously few round boundaries checked");
    });

    ok &= run_criterion(5, "lemma 2 on every continuously-backlogged window of the same runs",
                        60.0, [&](std::vector<Failure>& fails) {
        for (auto& f : lemma2_fails) fails.push_back(f);
        expect(fails, l2_stats.windows > 100000, "suspiciously few windows checked");
    });

    // ---------------------------------------------------------------- 6
    ok &= run_criterion(6, "error-free DRR fairness: FM <= Q + 2M on backlogged windows",
                        60.0, [&](std::vector<Failure>& fails) {
        std::int64_t checked = 0;
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            DeterministicRng rng(derive_seed(seed, 0xfa1f, 3));
            ScenarioConfig cfg;
            cfg.output_rate_bps = 9000;
            cfg.quantum_default = 750; // equal quanta, equal (unit) weights
            int n_flows = 2 + int(rng.next_u64() % 7);
            for (int i = 1; i <= n_flows; ++i) {
                FlowDef f = gen_flow(i, i);
                int n_pkts = 2 + int(rng.next_u64() % 11);
                for (int k = 0; k < n_pkts; ++k) {
                    PacketDef p;
                    p.size = rng.uniform_int(1, 750);
                    f.traffic.packets.push_back(p);
                }
                cfg.flows.push_back(f);
            }
            cfg.duration_s = Ratio(2000);
            ValidatedScenario s = validate_scenario(cfg);
            std::int64_t m = max_packet_size(s);
            Engine e(s, SchedulerPolicy::DRR, seed);
            e.run_until(s.config.duration_s);
            const MetricsLedger& led = e.ledger();
            std::int64_t last = led.last_round();
            Ratio bound(750 + 2 * m);
            for (std::int64_t a = 1; a <= last; ++a) {
                for (std::int64_t b = a; b <= last; ++b) {
                    // flows serviced and backlogged through [a, b]
                    std::vector<std::int64_t> spts;
                    for (const auto& fd : s.config.flows) {
                        bool eligible = true;
                        std::int64_t spt = 0;
                        for (std::int64_t k = a; k <= b && eligible; ++k) {
                            const FlowRoundRecord* r = led.find_round(fd.flow_id, k);
                            if (!r || !r->backlogged_at_end || r->suspended_at_end)
                                eligible = false;
                            else
                                spt += r->q_credit + r->bonus_applied + r->dc_start -
                                       r->dc_end;
                        }
                        if (eligible) spts.push_back(spt);
                    }
                    if (spts.size() < 2) continue;
                    auto [lo, hi] = std::minmax_element(spts.begin(), spts.end());
                    Ratio fm = Ratio(*hi - *lo); // unit weights
                    ++checked;
                    expect(fails, fm <= bound,
                           "FM " + fm.str() + " above Q+2M on seed " +
                               std::to_string(seed));
                    if (fails.size() > 10) return;
                }
            }
        }
        expect(fails, checked > 1000, "suspiciously few FM windows checked");
    });

    // ---------------------------------------------------------------- 7
    ok &= run_criterion(7, "engine equals the brute-force oracle on 200 random scenarios",
                        60.0, [&](std::vector<Failure>& fails) {
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            ValidatedScenario s = random_oracle_scenario(seed);
            for (SchedulerPolicy p : kAllPolicies) {
                auto expected = oracle_simulate(s, p);
                Engine e(s, p, seed);
                e.run_until(s.config.duration_s);
                for (const auto& fd : s.config.flows) {
                    auto got = e.ledger().completion_round(fd.flow_id);
                    std::int64_t engine_round = got ? *got : 0;
                    std::int64_t oracle_round = expected.count(fd.flow_id)
                                                    ? expected.at(fd.flow_id)
                                                    : 0;
                    expect(fails, engine_round == oracle_round,
                           "seed " + std::to_string(seed) + " policy " +
                               policy_name(p) + " flow " + std::to_string(fd.flow_id) +
                               ": engine " + std::to_string(engine_round) + " oracle " +
                               std::to_string(oracle_round));
                    if (fails.size() > 10) return;
                }
            }
        }
    });

    // ---------------------------------------------------------------- 8
    ok &= run_criterion(8, "desk-scale delay bound holds for every critical flow, 20 seeds",
                        120.0, [&](std::vector<Failure>& fails) {
        ValidatedScenario s = load_scenario("desk_scale.json");
        // n = 2 critical flows, s = 750 B cap, Max = quantum 750, B = 9000
        Ratio bound = delay_bound(2, 750, 750, 9000);
        expect(fails, bound == Ratio(2), "bound should be exactly 2 s");
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            for (SchedulerPolicy p : kAllPolicies) {
                Engine e(s, p, seed);
                e.run_until(s.config.duration_s);
                for (const auto& fd : s.config.flows) {
                    if (!fd.qos.latency_critical()) continue;
                    bool any_served = false;
                    for (const auto& pr : e.ledger().packets)
                        if (pr.flow_id == fd.flow_id && pr.completion_time) any_served = true;
                    if (!any_served) continue;
                    LatencyStats st = per_flow_latency(e.ledger(), fd.flow_id);
                    expect(fails, st.max <= bound,
                           "seed " + std::to_string(seed) + " policy " + policy_name(p) +
                               " flow " + std::to_string(fd.flow_id) + " max latency " +
                               st.max.str() + " > 2 s");
                }
            }
        }
    });

    // ---------------------------------------------------------------- 9
    ok &= run_criterion(9,
                        "ordering: SDC <= EDC <= ODRR latency and EDC/SDC >= ODRR "
                        "throughput in >= 80% of 20 seeds",
                        300.0, [&](std::vector<Failure>& fails) {
        ValidatedScenario s = load_scenario("sixflow_err.json");
        int lat_ok = 0, thr_ok = 0, seeds = 20;
        for (std::uint64_t seed = 1; seed <= std::uint64_t(seeds); ++seed) {
            std::map<SchedulerPolicy, Ratio> lat;
            std::map<SchedulerPolicy, std::int64_t> thr;
            for (SchedulerPolicy p : {SchedulerPolicy::ODRR, SchedulerPolicy::ODRREDC,
                                      SchedulerPolicy::ODRRSDC}) {
                Engine e(s, p, seed);
                e.run_until(s.config.duration_s);
                Ratio sum(0);
                std::int64_t n = 0;
                for (const auto& pr : e.ledger().packets) {
                    if (!pr.completion_time) continue;
                    if (!s.flow(pr.flow_id).qos.latency_critical()) continue;
                    sum += *pr.completion_time - pr.arrival_time;
                    ++n;
                }
                lat[p] = n ? sum / Ratio(n) : Ratio(0);
                thr[p] = e.ledger().bytes_served_total;
            }
            if (lat[SchedulerPolicy::ODRRSDC] <= lat[SchedulerPolicy::ODRREDC] &&
                lat[SchedulerPolicy::ODRREDC] <= lat[SchedulerPolicy::ODRR])
                ++lat_ok;
            if (thr[SchedulerPolicy::ODRREDC] >= thr[SchedulerPolicy::ODRR] &&
                thr[SchedulerPolicy::ODRRSDC] >= thr[SchedulerPolicy::ODRR])
                ++thr_ok;
        }
        expect(fails, lat_ok * 5 >= seeds * 4,
               "latency ordering held in only " + std::to_string(lat_ok) + "/20 seeds");
        expect(fails, thr_ok * 5 >= seeds * 4,
               "throughput ordering held in only " + std::to_string(thr_ok) + "/20 seeds");
        std::printf("    (latency ordering %d/20, throughput ordering %d/20)\n", lat_ok,
                    thr_ok);
    });

    // --------------------------------------------------------------- 10
    ok &= run_criterion(10, "byte-identical ledgers and reports on repeated runs", 120.0,
                        [&](std::vector<Failure>& fails) {
        struct Probe {
            const char* file;
            const char* dir;
            SchedulerPolicy policy;
            std::uint64_t seed;
        };
        const Probe probes[] = {
            {"fig1_odrr.json", ODRRSIM_TEST_DATA_DIR, SchedulerPolicy::ODRR, 1},
            {"sixflow_err.json", ODRRSIM_TEST_DATA_DIR, SchedulerPolicy::ODRRSDC, 11},
            {"twenty_queue.json", ODRRSIM_SCENARIO_DIR, SchedulerPolicy::ODRREDC, 4},
        };
        for (const Probe& probe : probes) {
            ValidatedScenario s = validate_scenario(parse_scenario_json(
                testutil::read_file(std::string(probe.dir) + "/" + probe.file)));
            RunArtifacts a = run_one(s, probe.policy, probe.seed);
            RunArtifacts b = run_one(s, probe.policy, probe.seed);
            expect(fails, a.events == b.events,
                   std::string(probe.file) + ": event logs differ");
            expect(fails, a.ledger_csv == b.ledger_csv,
                   std::string(probe.file) + ": ledger CSVs differ");
            expect(fails, a.packets_csv == b.packets_csv,
                   std::string(probe.file) + ": packet CSVs differ");
            expect(fails, a.summary_json == b.summary_json,
                   std::string(probe.file) + ": summaries differ");
        }
    });

    std::printf("%s\n", ok ? "ALL ACCEPTANCE CRITERIA PASSED" : "ACCEPTANCE FAILURES PRESENT");
    return ok ? 0 : 1;
}
