#pragma once

#include <array>
#include <cstdint>

namespace nblsat::detail {

// Philox-4x32-10 counter-based generator (Salmon et al., SC'11). A pure
// function of (counter, key): ideal for reproducible parallel sampling,
// since any draw can be addressed directly without advancing shared state.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            if (round < 9) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
        }
        return ctr;
    }
};

// Maps a 32-bit word to the symmetric unit interval (-0.5, 0.5).
constexpr double to_unit_interval(std::uint32_t word) {
    return (static_cast<double>(word) + 0.5) * 0x1p-32 - 0.5;
}

}  // namespace nblsat::detail
