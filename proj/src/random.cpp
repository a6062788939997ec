#include "twoscale/random.hpp"

#include <cmath>
#include <numbers>

namespace twoscale {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> coords) noexcept {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ull));
    return h;
}

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept {
    const std::uint64_t coords[] = {stream};
    const std::uint64_t k = derive_seed(seed, coords);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

void NormalStream::fill(std::uint64_t step, std::span<double> out) const noexcept {
    constexpr double kInv53 = 1.0 / 9007199254740992.0;
    std::size_t i = 0;
    for (std::uint32_t block = 0; i < out.size(); ++block) {
        const auto r = Philox4x32::generate(
            {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32), block, 0u}, key_);
        const std::uint64_t a = (std::uint64_t{r[0]} << 32) | r[1];
        const std::uint64_t b = (std::uint64_t{r[2]} << 32) | r[3];
        // Box-Muller with u1 in (0, 1] and u2 in [0, 1).
        const double u1 = static_cast<double>((a >> 11) + 1) * kInv53;
        const double u2 = static_cast<double>(b >> 11) * kInv53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out[i++] = radius * std::cos(angle);
        if (i < out.size()) out[i++] = radius * std::sin(angle);
    }
}

}  // namespace twoscale
