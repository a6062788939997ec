#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace twoscale {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Combine a base seed with integer coordinates into a derived 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> coords) noexcept;

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * Stateless: the output is a pure function of (counter, key).
 */
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

//---------------------------------------------------------------------------//
/*!
 * Standard Gaussian variates addressed by (seed, stream, step).
 *
 * The draws for a given step do not depend on which other steps were
 * requested, so parallel workers with different streams are reproducible
 * regardless of scheduling.
 */
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Fill out with independent N(0, 1) draws belonging to the given step.
    void fill(std::uint64_t step, std::span<double> out) const noexcept;

  private:
    Philox4x32::Key key_;
};

}  // namespace twoscale
