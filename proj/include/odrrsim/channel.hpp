// channel.hpp -- per-attempt transmission outcome and the ODRR penalty factor
#ifndef ODRRSIM_CHANNEL_HPP
#define ODRRSIM_CHANNEL_HPP

#include <cstdint>
#include <map>

#include "odrrsim/model.hpp"

namespace odrrsim {

struct AttemptRecord {
    std::uint64_t packet_id = 0;
    int flow_id = 0;
    std::int64_t round_index = 0;
    bool success = false;
    std::int64_t bytes_attempted = 0;
    std::int64_t bytes_counted_successful = 0; // == bytes_attempted iff success
};

// Decides whether one transmission attempt succeeds. The channel never
// touches queues; the engine removes packets only on success.
//
// Bernoulli outcomes are a pure function of (seed, packet id, attempt index),
// so replaying a run -- or the same packet under a different policy -- sees
// the same channel. Scripted mode reads the packet's error_script at the
// attempt index; an exhausted script succeeds.
class ChannelModel {
  public:
    ChannelModel() = default;
    ChannelModel(ChannelMode mode, std::uint64_t seed) : mode_(mode), seed_(seed) {}

    void set_flow_error_probability(int flow_id, const Ratio& p_err);

    ChannelMode mode() const { return mode_; }

    // attempt_index counts prior attempts for this packet (0 for the first).
    AttemptRecord attempt_transmit(const Packet& packet, std::int64_t round_index,
                                   std::int64_t attempt_index) const;

  private:
    bool bernoulli_fails(const Packet& packet, std::int64_t attempt_index) const;

    ChannelMode mode_ = ChannelMode::Perfect;
    std::uint64_t seed_ = 0;
    std::map<int, unsigned __int128> fail_threshold_; // p_err scaled to 2^64
};

// successful_bytes / attempted_bytes as an exact ratio (the paper's worked
// 550/700 example). Throws ZeroAttempt when attempted_bytes == 0.
Ratio penalty_factor(std::int64_t attempted_bytes, std::int64_t successful_bytes);

class ZeroAttempt : public std::domain_error {
  public:
    ZeroAttempt() : std::domain_error("ZeroAttempt: penalty factor of an empty round") {}
};

} // namespace odrrsim

#endif
