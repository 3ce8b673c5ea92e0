#include "odrrsim/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "odrrsim/scenario_io.hpp"
#include "odrrsim/traffic.hpp"

namespace odrrsim {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string ledger_to_csv(const MetricsLedger& ledger) {
    std::ostringstream os;
    os << "flow_id,round,q_credit,bonus_applied,dc_start,dc_end,bytes_served,"
          "bytes_attempted,packets_served,bonus_received,suspended,completed,"
          "backlogged\n";
    for (const auto& r : ledger.flow_rounds) {
        os << r.flow_id << "," << r.round << "," << r.q_credit << "," << r.bonus_applied
           << "," << r.dc_start << "," << r.dc_end << "," << r.bytes_served << ","
           << r.bytes_attempted << "," << r.packets_served << "," << r.bonus_received
           << "," << (r.suspended_at_end ? 1 : 0) << "," << (r.completed ? 1 : 0) << ","
           << (r.backlogged_at_end ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string packets_to_csv(const MetricsLedger& ledger) {
    std::ostringstream os;
    os << "packet_id,flow_id,size_bytes,arrival_s,completion_s,attempts\n";
    for (const auto& p : ledger.packets) {
        os << p.packet_id << "," << p.flow_id << "," << p.size << ","
           << p.arrival_time.str() << ","
           << (p.completion_time ? p.completion_time->str() : std::string("")) << ","
           << p.attempts << "\n";
    }
    return os.str();
}

namespace {

std::string plot_file(const std::string& value_name,
                      const std::vector<std::pair<int, double>>& rows) {
    std::ostringstream os;
    os << "# flow_id\t" << value_name << "\n";
    for (const auto& [flow, v] : rows) os << flow << "\t" << v << "\n";
    return os.str();
}

ordered_json ratio_field(const Ratio& r) {
    ordered_json j;
    j["exact"] = r.str();
    j["value"] = r.to_double();
    return j;
}

} // namespace

RunArtifacts run_one(const ValidatedScenario& scenario, SchedulerPolicy policy,
                     std::uint64_t seed, const RunFlags& flags) {
    EngineOptions opts;
    opts.gating_override = flags.gating_override;
    if (flags.zero_cost_failures) opts.zero_cost_failures_override = true;

    Engine engine(scenario, policy, seed, opts);
    FinalReport fin = engine.run_until(scenario.config.duration_s);
    const MetricsLedger& ledger = engine.ledger();
    const ScenarioConfig& cfg = scenario.config;

    RunArtifacts art;
    art.final_report = fin;
    art.events = engine.event_log();
    art.ledger_csv = ledger_to_csv(ledger);
    art.packets_csv = packets_to_csv(ledger);

    // Delay bound inputs: n latency-critical flows, max packet size realized
    // by this run's traffic, largest quantum in the scenario.
    std::int64_t n_critical = 0;
    std::int64_t max_quantum = 0;
    for (const auto& f : cfg.flows) {
        if (f.qos.latency_critical()) n_critical++;
        max_quantum = std::max(max_quantum, f.quantum);
    }
    std::int64_t m = engine.max_packet();

    std::map<int, Ratio> weights;
    for (const auto& f : cfg.flows) weights[f.flow_id] = f.weight;
    FairnessResult fm =
        fairness_measure(ledger, Ratio(0), ledger.clock_end, weights, cfg.flows.size());

    ordered_json summary;
    summary["scenario"] = cfg.name;
    summary["policy"] = policy_name(policy);
    summary["seed"] = seed;
    summary["duration_s"] = ratio_field(cfg.duration_s);
    summary["output_rate_bps"] = cfg.output_rate_bps;
    summary["max_packet_bytes"] = m;
    summary["rounds"] = fin.rounds;
    summary["clock_end_s"] = ratio_field(fin.clock_end);
    summary["busy_time_s"] = ratio_field(ledger.busy_time);
    summary["total_bytes_served"] = ledger.bytes_served_total;
    summary["all_completed"] = fin.all_completed;
    if (m > 0 && n_critical >= 0 && max_quantum > 0) {
        Ratio bound = delay_bound(n_critical, m, max_quantum, cfg.output_rate_bps);
        summary["delay_bound_s"] = ratio_field(bound);
        if (flags.literal_delay_bound)
            summary["delay_bound_literal"] =
                delay_bound_literal(n_critical, m, max_quantum, cfg.output_rate_bps);
    }
    summary["fairness_measure"] =
        fm.applicable ? ordered_json(ratio_field(fm.value)) : ordered_json(nullptr);

    std::vector<std::pair<int, double>> util_rows, lat_rows;
    summary["flows"] = ordered_json::array();
    for (const auto& f : cfg.flows) {
        ordered_json fj;
        fj["flow_id"] = f.flow_id;
        fj["priority"] = f.priority;
        fj["qos_kind"] = qos_kind_name(f.qos.kind);
        fj["latency_critical"] = f.qos.latency_critical();
        std::int64_t bytes = 0, packets = 0;
        std::int64_t spt = 0;
        for (const auto& r : ledger.flow_rounds) {
            if (r.flow_id != f.flow_id) continue;
            bytes += r.bytes_served;
            packets += r.packets_served;
            spt += r.q_credit + r.bonus_applied + r.dc_start - r.dc_end;
        }
        fj["bytes_served"] = bytes;
        fj["packets_served"] = packets;
        fj["spt_total"] = spt;
        auto comp = ledger.completion_round(f.flow_id);
        fj["completion_round"] = comp ? ordered_json(*comp) : ordered_json(nullptr);
        Ratio util = bandwidth_utilization(ledger, f.flow_id, cfg.output_rate_bps);
        fj["utilization"] = ratio_field(util);
        util_rows.push_back({f.flow_id, util.to_double()});
        if (packets > 0) {
            LatencyStats st = per_flow_latency(ledger, f.flow_id);
            fj["latency_mean_s"] = ratio_field(st.mean);
            fj["latency_max_s"] = ratio_field(st.max);
            lat_rows.push_back({f.flow_id, st.mean.to_double()});
        } else {
            fj["latency_mean_s"] = nullptr;
            fj["latency_max_s"] = nullptr;
            lat_rows.push_back({f.flow_id, 0.0});
        }
        std::int64_t bonus = 0;
        for (const auto& d : ledger.donations)
            if (d.to_flow == f.flow_id) bonus += d.bytes;
        fj["bonus_received_total"] = bonus;
        summary["flows"].push_back(fj);
    }
    art.summary_json = summary.dump(2) + "\n";
    art.plot_utilization = plot_file("utilization", util_rows);
    art.plot_latency = plot_file("mean_latency_s", lat_rows);
    return art;
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::ios_base::failure("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

bool wants(const RunRequest& req, const std::string& fmt) {
    return std::find(req.formats.begin(), req.formats.end(), fmt) != req.formats.end();
}

// mean latency over all packets of latency-critical flows, exact
std::optional<Ratio> critical_mean_latency(const ValidatedScenario& scenario,
                                           const MetricsLedger& ledger) {
    Ratio sum(0);
    std::int64_t n = 0;
    for (const auto& p : ledger.packets) {
        if (!p.completion_time) continue;
        if (!scenario.flow(p.flow_id).qos.latency_critical()) continue;
        sum += *p.completion_time - p.arrival_time;
        n++;
    }
    if (n == 0) return std::nullopt;
    return sum / Ratio(n);
}

} // namespace

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    ValidatedScenario scenario;
    try {
        scenario = validate_scenario(load_scenario_file(request.scenario_path));
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        for (SchedulerPolicy p : request.policies) {
            for (std::uint64_t s : request.seeds) {
                RunArtifacts art = run_one(scenario, p, s, request.flags);
                fs::path dir = fs::path(request.out_dir) / policy_name(p) /
                               ("seed" + std::to_string(s));
                fs::create_directories(dir);
                if (wants(request, "csv")) {
                    write_atomic(dir / "ledger.csv", art.ledger_csv);
                    write_atomic(dir / "packets.csv", art.packets_csv);
                }
                if (wants(request, "json"))
                    write_atomic(dir / "summary.json", art.summary_json);
                if (wants(request, "plotdata")) {
                    write_atomic(dir / "utilization.dat", art.plot_utilization);
                    write_atomic(dir / "latency_mean.dat", art.plot_latency);
                }
                write_atomic(dir / "events.log", art.events);
                out << policy_name(p) << " seed " << s << ": rounds "
                    << art.final_report.rounds << ", served "
                    << art.final_report.total_bytes_served << " B, clock "
                    << art.final_report.clock_end.str() << " s -> " << dir.string()
                    << "\n";
            }
        }
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_compare(const RunRequest& request, std::ostream& out, std::ostream& err) {
    ValidatedScenario scenario;
    try {
        scenario = validate_scenario(load_scenario_file(request.scenario_path));
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        std::ostringstream csv;
        csv << "policy,seed,mean_latency_critical_s,aggregate_throughput_bytes,"
               "fairness_measure,completed_flows\n";
        std::map<int, Ratio> weights;
        for (const auto& f : scenario.config.flows) weights[f.flow_id] = f.weight;

        struct Agg {
            double lat_sum = 0;
            std::int64_t lat_n = 0;
            double thr_sum = 0;
            std::int64_t runs = 0;
            std::int64_t lat_wins = 0;
            std::int64_t thr_wins = 0;
        };
        std::map<SchedulerPolicy, Agg> agg;
        std::map<std::uint64_t, std::pair<SchedulerPolicy, Ratio>> best_lat;
        std::map<std::uint64_t, std::pair<SchedulerPolicy, std::int64_t>> best_thr;

        for (SchedulerPolicy policy : request.policies) {
            for (std::uint64_t seed : request.seeds) {
                EngineOptions opts;
                opts.gating_override = request.flags.gating_override;
                if (request.flags.zero_cost_failures)
                    opts.zero_cost_failures_override = true;
                Engine engine(scenario, policy, seed, opts);
                engine.run_until(scenario.config.duration_s);
                const MetricsLedger& ledger = engine.ledger();

                auto lat = critical_mean_latency(scenario, ledger);
                FairnessResult fm = fairness_measure(ledger, Ratio(0), ledger.clock_end,
                                                     weights, scenario.config.flows.size());
                std::int64_t completed = 0;
                for (const auto& f : scenario.config.flows)
                    if (ledger.completion_round(f.flow_id)) completed++;

                csv << policy_name(policy) << "," << seed << ","
                    << (lat ? std::to_string(lat->to_double()) : std::string("")) << ","
                    << ledger.bytes_served_total << ","
                    << (fm.applicable ? std::to_string(fm.value.to_double())
                                      : std::string(""))
                    << "," << completed << "\n";

                Agg& a = agg[policy];
                if (lat) {
                    a.lat_sum += lat->to_double();
                    a.lat_n++;
                }
                a.thr_sum += double(ledger.bytes_served_total);
                a.runs++;

                if (lat) {
                    auto it = best_lat.find(seed);
                    if (it == best_lat.end() || *lat < it->second.second)
                        best_lat[seed] = {policy, *lat};
                }
                auto jt = best_thr.find(seed);
                if (jt == best_thr.end() || ledger.bytes_served_total > jt->second.second)
                    best_thr[seed] = {policy, ledger.bytes_served_total};
            }
        }
        for (const auto& [seed, win] : best_lat) agg[win.first].lat_wins++;
        for (const auto& [seed, win] : best_thr) agg[win.first].thr_wins++;

        std::ostringstream txt;
        txt << "policy          mean_lat_crit_s  throughput_B  lat_wins  thr_wins\n";
        for (const auto& [p, a] : agg) {
            char line[160];
            std::snprintf(line, sizeof(line), "%-15s %15.6f %13.0f %9lld %9lld\n",
                          policy_name(p), a.lat_n ? a.lat_sum / double(a.lat_n) : 0.0,
                          a.runs ? a.thr_sum / double(a.runs) : 0.0,
                          static_cast<long long>(a.lat_wins),
                          static_cast<long long>(a.thr_wins));
            txt << line;
        }
        txt << "(wins = seeds where the policy had the best value; ties go to the"
               " first policy reaching it)\n";

        fs::create_directories(request.out_dir);
        write_atomic(fs::path(request.out_dir) / "compare.csv", csv.str());
        write_atomic(fs::path(request.out_dir) / "compare.txt", txt.str());
        out << txt.str();
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_validate(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
    try {
        ValidatedScenario v = validate_scenario(load_scenario_file(scenario_path));
        out << scenario_to_json(v);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace odrrsim
