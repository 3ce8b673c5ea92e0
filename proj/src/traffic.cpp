#include "odrrsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace odrrsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t purpose, std::uint64_t index) {
    return splitmix64(splitmix64(root ^ purpose) ^ index);
}

std::int64_t DeterministicRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi)
        throw std::invalid_argument("uniform_int: lo > hi");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64()); // full range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

Ratio DeterministicRng::exp_interval(double rate_per_s) {
    double u = unit_double(); // in [0, 1)
    double t = -std::log(1.0 - u) / rate_per_s;
    double ticks = std::floor(t * 1e6 + 0.5);
    if (ticks < 0) ticks = 0;
    if (ticks > 9e15) ticks = 9e15; // clamp pathological draws
    return Ratio(static_cast<std::int64_t>(ticks), 1000000);
}

std::vector<Packet> expand_trace(const TrafficSpec& spec, const Ratio& duration,
                                 std::uint64_t seed, int flow_id) {
    std::vector<Packet> out;
    if (spec.kind == TrafficSpec::Kind::Static) {
        for (const auto& def : spec.packets) {
            Packet p;
            p.flow_id = flow_id;
            p.size = def.size;
            p.arrival_time = def.arrival_time;
            p.error_script = def.error_script;
            out.push_back(std::move(p));
        }
        std::stable_sort(out.begin(), out.end(), [](const Packet& a, const Packet& b) {
            return a.arrival_time < b.arrival_time;
        });
        return out;
    }

    DeterministicRng rng(seed);
    double rate = spec.rate_pkts_per_s.to_double();
    Ratio t(0);
    std::int64_t count = 0;
    while (true) {
        if (spec.max_count && count >= *spec.max_count) break;
        t += rng.exp_interval(rate);
        if (t > duration) break;
        Packet p;
        p.flow_id = flow_id;
        p.arrival_time = t;
        if (spec.size_dist.kind == SizeDistribution::Kind::Fixed)
            p.size = spec.size_dist.fixed_bytes;
        else
            p.size = rng.uniform_int(spec.size_dist.lo, spec.size_dist.hi);
        out.push_back(std::move(p));
        ++count;
    }
    return out;
}

std::vector<Packet> expand_all_traces(const ValidatedScenario& scenario) {
    struct Entry {
        Packet packet;
        std::size_t flow_pos;
        std::size_t seq;
    };
    std::vector<Entry> entries;
    const auto& cfg = scenario.config;
    for (std::size_t i = 0; i < cfg.flows.size(); ++i) {
        const FlowDef& f = cfg.flows[i];
        std::uint64_t seed = derive_seed(cfg.seed, kTrafficStream, i);
        auto trace = expand_trace(f.traffic, cfg.duration_s, seed, f.flow_id);
        for (std::size_t k = 0; k < trace.size(); ++k)
            entries.push_back(Entry{std::move(trace[k]), i, k});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.packet.arrival_time != b.packet.arrival_time)
            return a.packet.arrival_time < b.packet.arrival_time;
        if (a.flow_pos != b.flow_pos) return a.flow_pos < b.flow_pos;
        return a.seq < b.seq;
    });
    std::vector<Packet> out;
    out.reserve(entries.size());
    std::uint64_t id = 1;
    for (auto& e : entries) {
        e.packet.id = id++;
        out.push_back(std::move(e.packet));
    }
    return out;
}

std::vector<Packet> arrivals_in(const std::vector<Packet>& trace, const Ratio& t_from,
                                const Ratio& t_to) {
    if (t_to < t_from)
        throw std::invalid_argument("arrivals_in: t_from > t_to");
    std::vector<Packet> out;
    for (const auto& p : trace)
        if (p.arrival_time >= t_from && p.arrival_time < t_to) out.push_back(p);
    return out;
}

std::string trace_to_csv(const std::vector<Packet>& trace) {
    std::ostringstream os;
    os << "packet_id,flow_id,size_bytes,arrival_s\n";
    for (const auto& p : trace)
        os << p.id << "," << p.flow_id << "," << p.size << "," << p.arrival_time.str()
           << "\n";
    return os.str();
}

std::int64_t max_packet_size(const ValidatedScenario& scenario) {
    std::int64_t m = 0;
    for (const auto& p : expand_all_traces(scenario)) m = std::max(m, p.size);
    return m;
}

} // namespace odrrsim
