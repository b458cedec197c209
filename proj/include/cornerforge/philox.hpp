#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// Output is a pure function of (key, counter), so any worker can derive the
// variable it needs without shared state. Bit-exact with the Random123
// reference implementation; see tests/test_mandache.cpp for known answers.

#include <array>
#include <cstdint>

namespace cornerforge {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
    std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
    auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

/// 64 uniform bits for (seed, index, role): key = seed, counter = (index lo,
/// index hi, role, 0); the first two output words form the value (word 0 low).
inline std::uint64_t philox_u64(std::uint64_t seed, std::uint64_t index, std::uint32_t role) {
  PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  PhiloxCounter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), role, 0};
  auto out = philox4x32_10(ctr, key);
  return std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32);
}

}  // namespace cornerforge
