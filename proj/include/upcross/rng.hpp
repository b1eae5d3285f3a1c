#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace upcross {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

/// Counter-based random stream for one trial. The key is the master seed and
/// the upper counter half is the trial index, so streams for different trials
/// never overlap and need no shared state.
class TrialStream {
public:
    using result_type = std::uint64_t;

    TrialStream(std::uint64_t seed, std::uint64_t trial);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t trial() const { return trial_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t trial_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int available_ = 0;
};

} // namespace upcross
