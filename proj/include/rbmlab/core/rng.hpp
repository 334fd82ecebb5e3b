#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace rbmlab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Output is a pure function of (key, counter): there is no hidden state, so
/// any entry of any sample can be regenerated in isolation and the order in
/// which workers visit entries does not matter.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)} {}

  [[nodiscard]] constexpr Counter operator()(Counter ctr) const noexcept {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr std::pair<std::uint32_t, std::uint32_t> mulhilo(
      std::uint32_t a, std::uint32_t b) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    return {static_cast<std::uint32_t>(p >> 32), static_cast<std::uint32_t>(p)};
  }

  static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
    const auto [hi0, lo0] = mulhilo(kMul0, c[0]);
    const auto [hi1, lo1] = mulhilo(kMul1, c[2]);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Maps 64 random bits to a double in the open interval (0, 1).
[[nodiscard]] constexpr double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normals from one Philox block (Box-Muller).
///
/// The 128 output bits are split into two 53-bit uniforms u1, u2 and mapped to
/// (r cos t, r sin t) with r = sqrt(-2 ln u1), t = 2 pi u2.
[[nodiscard]] inline std::array<double, 2> normal_pair(
    const Philox4x32& gen, const Philox4x32::Counter& ctr) noexcept {
  const auto out = gen(ctr);
  const std::uint64_t b1 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  const std::uint64_t b2 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  const double r = std::sqrt(-2.0 * std::log(bits_to_open_unit(b1)));
  const double t = 2.0 * std::numbers::pi * bits_to_open_unit(b2);
  return {r * std::cos(t), r * std::sin(t)};
}

/// Counter layout for a matrix entry (j, k) of a given sample and retry.
///
/// Word 3 packs the retry attempt into its top 8 bits and the high 24 bits of
/// the sample index below it.
[[nodiscard]] constexpr Philox4x32::Counter entry_counter(
    std::uint64_t sample, std::uint32_t attempt, std::uint32_t row,
    std::uint32_t col) noexcept {
  return {row, col, static_cast<std::uint32_t>(sample),
          ((attempt & 0xFFu) << 24) |
              static_cast<std::uint32_t>((sample >> 32) & 0xFFFFFFu)};
}

}  // namespace rbmlab
