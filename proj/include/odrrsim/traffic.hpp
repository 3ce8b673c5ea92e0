// traffic.hpp -- packet arrival generation: static lists and Poisson streams
#ifndef ODRRSIM_TRAFFIC_HPP
#define ODRRSIM_TRAFFIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "odrrsim/model.hpp"

namespace odrrsim {

// Deterministic draws on top of std::mt19937_64 (a standardized generator).
// std::uniform_int_distribution et al. are implementation-defined, so the
// mappings live here.
class DeterministicRng {
  public:
    explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [lo, hi], rejection sampled
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // uniform in [0, 1) with 53 random bits
    double unit_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // exponential inter-arrival for the given rate, quantized to whole
    // microseconds so downstream arithmetic stays rational
    Ratio exp_interval(double rate_per_s);

  private:
    std::mt19937_64 eng_;
};

// Stable stream split: sub-seed for (purpose, index) pairs.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t purpose, std::uint64_t index);

inline constexpr std::uint64_t kTrafficStream = 0x7261666669630001ULL;
inline constexpr std::uint64_t kChannelStream = 0x6368616e6e656c01ULL;

// Materializes one flow's arrivals over [0, duration]. Static specs pass
// through (arrival 0 unless stated); Poisson draws come from the seeded
// stream. Pure function of (spec, duration, seed); packet ids stay 0 here,
// global assignment happens in expand_all_traces.
std::vector<Packet> expand_trace(const TrafficSpec& spec, const Ratio& duration,
                                 std::uint64_t seed, int flow_id);

// All flows merged and sorted by (arrival_time, flow position, sequence);
// ids assigned in that order so equal arrival times break ties stably.
std::vector<Packet> expand_all_traces(const ValidatedScenario& scenario);

// Packets with t_from <= arrival < t_to, original order preserved.
std::vector<Packet> arrivals_in(const std::vector<Packet>& trace, const Ratio& t_from,
                                const Ratio& t_to);

std::string trace_to_csv(const std::vector<Packet>& trace);

} // namespace odrrsim

#endif
