#pragma once

#include <array>
#include <cstdint>

namespace arratia::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function (Salmon et al., Random123).
Counter philox4x32(Counter ctr, Key key);

/// SplitMix64 finalizer; used to derive keys from (seed, stream id).
std::uint64_t mix64(std::uint64_t x);

/// Counter-based stream: the draws for item `index` of stream `stream_id`
/// depend only on (seed, stream_id, index), never on which thread runs it.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index);

    /// Uniform on the open interval (0, 1), 53 bits.
    double uniform();

    /// Standard normal via Box-Muller; values are produced in pairs.
    double normal();

private:
    void refill();

    Key key_{};
    Counter ctr_{};
    std::uint64_t draw_ = 0;
    std::array<std::uint64_t, 2> words_{};
    int used_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace arratia::rng
