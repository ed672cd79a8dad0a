#pragma once

#include <array>
#include <cstdint>

namespace sidefd {

/// Counter-based random generator (Philox-4x32-10).
///
/// The generator is a pure function of (key, counter), so distinct streams are
/// obtained by keying with (seed, stream) and every stream can be regenerated
/// independently of scheduling order. This is what makes parallel Monte Carlo
/// runs reproducible regardless of the worker count.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Next raw 32-bit word.
    std::uint32_t next_u32();

    /// Next 64-bit word.
    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on (0, 1].
    double uniform_pos();

    /// Standard normal (Box-Muller; draws are consumed in pairs).
    double normal();

    /// Exponential with the given rate.
    double exponential(double rate);

private:
    std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

    std::uint32_t key0_ = 0;
    std::uint32_t key1_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; used to derive per-replication seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derive a child seed from (base, index); children of distinct indices are
/// statistically independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

} // namespace sidefd
