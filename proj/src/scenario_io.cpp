#include "odrrsim/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace odrrsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& detail) {
    throw ValidationError("BadScenario", detail);
}

Ratio ratio_from(const json& v, const std::string& field) {
    if (v.is_string()) {
        try {
            return Ratio::parse(v.get<std::string>());
        } catch (const std::exception& e) {
            bad(field + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return Ratio(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return Ratio(static_cast<std::int64_t>(v.get<std::uint64_t>()));
    if (v.is_number_float()) {
        // Shortest round-trip decimal of the stored double, parsed exactly.
        return Ratio::parse(json(v.get<double>()).dump());
    }
    bad(field + ": expected a number or rational string");
}

std::int64_t int_from(const json& v, const std::string& field) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
    bad(field + ": expected an integer");
}

GatingMode gating_from(const json& v) {
    if (v.is_boolean()) return v.get<bool>() ? GatingMode::Alternating : GatingMode::Off;
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "off") return GatingMode::Off;
        if (s == "literal") return GatingMode::Literal;
        if (s == "alternating") return GatingMode::Alternating;
    }
    bad("interclass_gating: expected off|literal|alternating");
}

const char* gating_name(GatingMode g) {
    switch (g) {
        case GatingMode::Off: return "off";
        case GatingMode::Literal: return "literal";
        case GatingMode::Alternating: return "alternating";
    }
    return "off";
}

ChannelMode channel_from(const std::string& s) {
    if (s == "perfect") return ChannelMode::Perfect;
    if (s == "scripted") return ChannelMode::Scripted;
    if (s == "bernoulli") return ChannelMode::Bernoulli;
    bad("channel: expected perfect|scripted|bernoulli");
}

const char* channel_name(ChannelMode m) {
    switch (m) {
        case ChannelMode::Perfect: return "perfect";
        case ChannelMode::Scripted: return "scripted";
        case ChannelMode::Bernoulli: return "bernoulli";
    }
    return "perfect";
}

std::vector<bool> script_from(const json& v) {
    std::vector<bool> out;
    if (!v.is_array()) bad("error_script: expected an array of fail|succeed");
    for (const auto& e : v) {
        if (e.is_string()) {
            std::string s = e.get<std::string>();
            if (s == "fail")
                out.push_back(false);
            else if (s == "succeed" || s == "ok")
                out.push_back(true);
            else
                bad("error_script entry '" + s + "'");
        } else if (e.is_boolean()) {
            out.push_back(e.get<bool>());
        } else {
            bad("error_script: entries must be fail|succeed");
        }
    }
    return out;
}

TrafficSpec traffic_from(const json& v) {
    TrafficSpec t;
    if (!v.is_object() || !v.contains("type")) bad("traffic: missing type");
    std::string type = v.at("type").get<std::string>();
    if (type == "static") {
        t.kind = TrafficSpec::Kind::Static;
        if (v.contains("packets")) {
            for (const auto& pj : v.at("packets")) {
                PacketDef p;
                p.size = int_from(pj.at("size"), "packet size");
                if (pj.contains("arrival_s"))
                    p.arrival_time = ratio_from(pj.at("arrival_s"), "arrival_s");
                if (pj.contains("error_script"))
                    p.error_script = script_from(pj.at("error_script"));
                t.packets.push_back(std::move(p));
            }
        }
    } else if (type == "poisson") {
        t.kind = TrafficSpec::Kind::Poisson;
        t.rate_pkts_per_s = ratio_from(v.at("rate_pkts_per_s"), "rate_pkts_per_s");
        t.cap_bytes = int_from(v.at("cap_bytes"), "cap_bytes");
        if (v.contains("max_count")) t.max_count = int_from(v.at("max_count"), "max_count");
        const json& sd = v.at("size");
        std::string sk = sd.at("type").get<std::string>();
        if (sk == "fixed") {
            t.size_dist.kind = SizeDistribution::Kind::Fixed;
            t.size_dist.fixed_bytes = int_from(sd.at("bytes"), "size.bytes");
        } else if (sk == "uniform") {
            t.size_dist.kind = SizeDistribution::Kind::UniformInt;
            t.size_dist.lo = int_from(sd.at("lo"), "size.lo");
            t.size_dist.hi = int_from(sd.at("hi"), "size.hi");
        } else {
            bad("traffic size type '" + sk + "'");
        }
    } else {
        bad("traffic type '" + type + "'");
    }
    return t;
}

QoSClass qos_from(const json& v) {
    QoSClass q;
    if (!v.is_object() || !v.contains("kind")) bad("qos: missing kind");
    q.kind = qos_kind_from_name(v.at("kind").get<std::string>());
    if (v.contains("class_index_k"))
        q.class_index_k = static_cast<int>(int_from(v.at("class_index_k"), "class_index_k"));
    if (v.contains("params")) {
        for (const auto& [name, pv] : v.at("params").items()) {
            if (pv.is_string())
                q.mandatory_params[name] = pv.get<std::string>();
            else
                q.mandatory_params[name] = ratio_from(pv, "qos param " + name);
        }
    }
    return q;
}

} // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        bad(e.what());
    }
    if (!doc.is_object()) bad("top level must be an object");

    ScenarioConfig cfg;
    try {
        if (doc.contains("name")) cfg.name = doc.at("name").get<std::string>();
        cfg.output_rate_bps = int_from(doc.at("output_rate_bps"), "output_rate_bps");
        cfg.duration_s = ratio_from(doc.at("duration_s"), "duration_s");
        if (doc.contains("quantum_default"))
            cfg.quantum_default = int_from(doc.at("quantum_default"), "quantum_default");
        if (doc.contains("seed"))
            cfg.seed = static_cast<std::uint64_t>(int_from(doc.at("seed"), "seed"));
        if (doc.contains("policy"))
            cfg.policy = policy_from_name(doc.at("policy").get<std::string>());
        if (doc.contains("channel")) {
            cfg.channel = channel_from(doc.at("channel").get<std::string>());
            cfg.channel_explicit = true;
        }
        if (doc.contains("interclass_gating"))
            cfg.gating = gating_from(doc.at("interclass_gating"));
        if (doc.contains("slot_length_s"))
            cfg.slot_length_s = ratio_from(doc.at("slot_length_s"), "slot_length_s");
        if (doc.contains("allow_small_quantum"))
            cfg.allow_small_quantum = doc.at("allow_small_quantum").get<bool>();
        if (doc.contains("zero_cost_failures"))
            cfg.zero_cost_failures = doc.at("zero_cost_failures").get<bool>();

        if (!doc.contains("flows") || !doc.at("flows").is_array())
            bad("flows: expected an array");
        for (const auto& fj : doc.at("flows")) {
            FlowDef f;
            if (fj.contains("id")) f.flow_id = static_cast<int>(int_from(fj.at("id"), "id"));
            f.priority = static_cast<int>(int_from(fj.at("priority"), "priority"));
            if (fj.contains("quantum"))
                f.quantum = int_from(fj.at("quantum"), "quantum");
            if (fj.contains("weight")) f.weight = ratio_from(fj.at("weight"), "weight");
            if (fj.contains("input_rate_bps"))
                f.input_rate_bps = int_from(fj.at("input_rate_bps"), "input_rate_bps");
            if (fj.contains("p_err")) f.p_err = ratio_from(fj.at("p_err"), "p_err");
            f.qos = qos_from(fj.at("qos"));
            f.traffic = traffic_from(fj.at("traffic"));
            cfg.flows.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str());
}

namespace {

ordered_json ratio_out(const Ratio& r) {
    if (r.is_integer()) return ordered_json(r.num());
    return ordered_json(r.str());
}

} // namespace

std::string scenario_to_json(const ValidatedScenario& scenario) {
    const ScenarioConfig& cfg = scenario.config;
    ordered_json doc;
    if (!cfg.name.empty()) doc["name"] = cfg.name;
    doc["output_rate_bps"] = cfg.output_rate_bps;
    doc["duration_s"] = ratio_out(cfg.duration_s);
    if (cfg.quantum_default > 0) doc["quantum_default"] = cfg.quantum_default;
    doc["seed"] = cfg.seed;
    doc["policy"] = policy_name(cfg.policy);
    doc["channel"] = channel_name(cfg.channel);
    doc["interclass_gating"] = gating_name(cfg.gating);
    if (cfg.slot_length_s) doc["slot_length_s"] = ratio_out(*cfg.slot_length_s);
    doc["allow_small_quantum"] = cfg.allow_small_quantum;
    doc["zero_cost_failures"] = cfg.zero_cost_failures;

    doc["flows"] = ordered_json::array();
    for (const auto& f : cfg.flows) {
        ordered_json fj;
        fj["id"] = f.flow_id;
        fj["priority"] = f.priority;
        fj["quantum"] = f.quantum;
        fj["weight"] = ratio_out(f.weight);
        if (f.input_rate_bps) fj["input_rate_bps"] = *f.input_rate_bps;
        fj["p_err"] = ratio_out(f.p_err);
        ordered_json qj;
        qj["kind"] = qos_kind_name(f.qos.kind);
        qj["class_index_k"] = f.qos.class_index_k;
        ordered_json params = ordered_json::object();
        for (const auto& [name, v] : f.qos.mandatory_params) {
            if (std::holds_alternative<Ratio>(v))
                params[name] = ratio_out(std::get<Ratio>(v));
            else
                params[name] = std::get<std::string>(v);
        }
        qj["params"] = params;
        fj["qos"] = qj;
        ordered_json tj;
        if (f.traffic.kind == TrafficSpec::Kind::Static) {
            tj["type"] = "static";
            tj["packets"] = ordered_json::array();
            for (const auto& p : f.traffic.packets) {
                ordered_json pj;
                pj["size"] = p.size;
                pj["arrival_s"] = ratio_out(p.arrival_time);
                if (p.error_script) {
                    ordered_json sj = ordered_json::array();
                    for (bool ok : *p.error_script) sj.push_back(ok ? "succeed" : "fail");
                    pj["error_script"] = sj;
                }
                tj["packets"].push_back(pj);
            }
        } else {
            tj["type"] = "poisson";
            tj["rate_pkts_per_s"] = ratio_out(f.traffic.rate_pkts_per_s);
            tj["cap_bytes"] = f.traffic.cap_bytes;
            if (f.traffic.max_count) tj["max_count"] = *f.traffic.max_count;
            ordered_json sj;
            if (f.traffic.size_dist.kind == SizeDistribution::Kind::Fixed) {
                sj["type"] = "fixed";
                sj["bytes"] = f.traffic.size_dist.fixed_bytes;
            } else {
                sj["type"] = "uniform";
                sj["lo"] = f.traffic.size_dist.lo;
                sj["hi"] = f.traffic.size_dist.hi;
            }
            tj["size"] = sj;
        }
        fj["traffic"] = tj;
        doc["flows"].push_back(fj);
    }
    return doc.dump(2) + "\n";
}

} // namespace odrrsim
