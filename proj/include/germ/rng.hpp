#pragma once
// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The 64-bit seed is the Philox key; the 64-bit stream id occupies the upper
// half of the 128-bit counter and a block index the lower half, so every
// (seed, stream) pair names an independent, platform-independent sequence.
// Each block yields two 64-bit outputs, low word first.

#include <array>
#include <cstdint>

namespace germ {

class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()();

    // Uniform in [0,1) with 53 random bits.
    double uniform();
    // Rademacher variable, +1 or -1 with equal probability.
    int sign();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Ten-round Philox4x32 bijection; exposed for known-answer tests.
    static Counter block(Counter counter, Key key);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned buffered_ = 0;
};

using Rng = Philox4x32;

} // namespace germ
