#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace subweibull {

using Philox4x64 = std::array<std::uint64_t, 4>;

// Philox4x64-10 bijection (Salmon et al. 2011).
Philox4x64 philox4x64(Philox4x64 ctr, std::array<std::uint64_t, 2> key);

// Counter-based stream. The key is (seed, stream_id); a three-word path
// selects a substream, and word 0 of the counter enumerates output blocks.
// Copies are independent cursors over the same sequence.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream = 0);

    // Independent stream derived from this one's identity (not its cursor).
    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64();
    result_type operator()() { return next_u64(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    double uniform();       // [0, 1)
    double uniform_open();  // (0, 1)
    double normal();
    double exponential();
    double gamma(double shape);
    bool coin() { return (next_u64() & 1u) != 0; }

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream_id() const { return key_[1]; }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 3> path_;
    std::uint64_t block_ = 0;
    Philox4x64 buf_{};
    int pos_ = 4;
};

// Standard normal quantile (Wichura AS241, ~1e-16 relative).
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace subweibull
