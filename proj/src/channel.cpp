#include "odrrsim/channel.hpp"

#include "odrrsim/traffic.hpp"

namespace odrrsim {

void ChannelModel::set_flow_error_probability(int flow_id, const Ratio& p_err) {
    if (p_err < Ratio(0) || p_err > Ratio(1))
        throw ValidationError("InvalidProbability", "p_err of flow " + std::to_string(flow_id));
    // threshold = p * 2^64, exact; draw fails iff u64 < threshold
    unsigned __int128 num = static_cast<unsigned __int128>(p_err.num());
    unsigned __int128 thr = (num << 64) / static_cast<unsigned __int128>(p_err.den());
    fail_threshold_[flow_id] = thr;
}

bool ChannelModel::bernoulli_fails(const Packet& packet, std::int64_t attempt_index) const {
    auto it = fail_threshold_.find(packet.flow_id);
    if (it == fail_threshold_.end() || it->second == 0) return false;
    std::uint64_t u = derive_seed(derive_seed(seed_, kChannelStream, packet.id),
                                  0x617474656d707401ULL,
                                  static_cast<std::uint64_t>(attempt_index));
    return static_cast<unsigned __int128>(u) < it->second;
}

AttemptRecord ChannelModel::attempt_transmit(const Packet& packet, std::int64_t round_index,
                                             std::int64_t attempt_index) const {
    bool ok = true;
    switch (mode_) {
        case ChannelMode::Perfect:
            ok = true;
            break;
        case ChannelMode::Scripted:
            if (packet.error_script &&
                attempt_index < static_cast<std::int64_t>(packet.error_script->size()))
                ok = (*packet.error_script)[static_cast<std::size_t>(attempt_index)];
            else
                ok = true; // exhausted or absent script succeeds
            break;
        case ChannelMode::Bernoulli:
            ok = !bernoulli_fails(packet, attempt_index);
            break;
    }
    AttemptRecord rec;
    rec.packet_id = packet.id;
    rec.flow_id = packet.flow_id;
    rec.round_index = round_index;
    rec.success = ok;
    rec.bytes_attempted = packet.size;
    rec.bytes_counted_successful = ok ? packet.size : 0;
    return rec;
}

Ratio penalty_factor(std::int64_t attempted_bytes, std::int64_t successful_bytes) {
    if (attempted_bytes == 0)
        throw ZeroAttempt();
    if (attempted_bytes < 0 || successful_bytes < 0 || successful_bytes > attempted_bytes)
        throw std::invalid_argument("penalty_factor: need attempted >= successful >= 0");
    return Ratio(successful_bytes, attempted_bytes);
}

} // namespace odrrsim
