// SPDX-License-Identifier: Apache-2.0
#pragma once

// Counter-based random streams.
//
// Every stream is addressed by (master seed, trajectory, purpose, index) and
// is independent of the order in which streams are created, so results do not
// depend on how trajectories are distributed over worker threads.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace ousamp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/// Purposes keep the service, signal and noise draws of one trajectory in
/// disjoint streams.
enum class StreamPurpose : std::uint32_t {
    Service = 1,
    SignalBusy = 2,
    SignalIdle = 3,
    Noise = 4,
    Scalar = 5,
    Test = 6,
};

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t trajectory = 0;
    StreamPurpose purpose = StreamPurpose::Test;
    std::uint32_t index = 0;
};

/// UniformRandomBitGenerator over one Philox stream; yields 64-bit words.
class PhiloxEngine {
public:
    using result_type = std::uint64_t;

    explicit PhiloxEngine(const StreamKey& k) noexcept {
        const std::uint64_t kk = hash_combine(k.seed, k.trajectory);
        key_ = {static_cast<std::uint32_t>(kk), static_cast<std::uint32_t>(kk >> 32)};
        prefix_hi_ = static_cast<std::uint32_t>(k.purpose);
        prefix_lo_ = k.index;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        if (lane_ == kWords) refill();
        return buf_[lane_++];
    }

private:
    static constexpr int kWords = 2;

    void refill() noexcept {
        const auto out = Philox4x32::block(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
             prefix_lo_, prefix_hi_},
            key_);
        buf_[0] = (std::uint64_t{out[0]} << 32) | out[1];
        buf_[1] = (std::uint64_t{out[2]} << 32) | out[3];
        ++block_;
        lane_ = 0;
    }

    Philox4x32::Key key_{};
    std::uint32_t prefix_hi_ = 0;
    std::uint32_t prefix_lo_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, kWords> buf_{};
    int lane_ = kWords;
};

/// A random stream with the handful of variates the simulators need.
class RandomStream {
public:
    explicit RandomStream(const StreamKey& key) : engine_(key) {}
    RandomStream(std::uint64_t seed, std::uint64_t trajectory, StreamPurpose purpose,
                 std::uint32_t index = 0)
        : engine_(StreamKey{seed, trajectory, purpose, index}) {}

    double normal() { return normal_(engine_); }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        // 53 random mantissa bits, offset by half an ulp to exclude 0.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    PhiloxEngine& engine() noexcept { return engine_; }

private:
    PhiloxEngine engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ousamp
