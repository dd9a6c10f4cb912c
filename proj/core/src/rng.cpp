#include "bjacobi/rng.hpp"

#include <cmath>

#include "bjacobi/model.hpp"

namespace bjacobi {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

__extension__ using u128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) noexcept {
  const u128 product = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

inline void round(PhiloxCounter& c, const PhiloxKey& k) noexcept {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kM0, c[0], hi0, lo0);
  mulhilo(kM1, c[2], hi1, lo1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    round(counter, key);
  }
  return counter;
}

double uniform_open_closed(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double uniform_closed_open(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double NoiseSource::normal(std::uint64_t step, std::uint64_t coord, std::uint64_t level,
                           std::uint64_t node) const noexcept {
  if (zero_) return 0.0;
  const PhiloxCounter block = philox4x64({step, coord / 2, level, node}, {seed_, path_id_});
  const double radius = std::sqrt(-2.0 * std::log(uniform_open_closed(block[0])));
  const double angle = 2.0 * kPi * uniform_closed_open(block[1]);
  return (coord % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

void NoiseSource::normals(std::uint64_t step, std::uint64_t level, std::uint64_t node,
                          std::span<double> out) const noexcept {
  if (zero_) {
    for (double& v : out) v = 0.0;
    return;
  }
  for (std::size_t c = 0; c < out.size(); c += 2) {
    const PhiloxCounter block = philox4x64({step, c / 2, level, node}, {seed_, path_id_});
    const double radius = std::sqrt(-2.0 * std::log(uniform_open_closed(block[0])));
    const double angle = 2.0 * kPi * uniform_closed_open(block[1]);
    out[c] = radius * std::cos(angle);
    if (c + 1 < out.size()) out[c + 1] = radius * std::sin(angle);
  }
}

double bridge_quantum(double dt, int level, int max_levels) noexcept {
  // Normals never exceed 9 in magnitude, so |dW| < 2^(c+4) with c = ceil(log2 sqrt dt);
  // the finest grid keeps 53 bits of headroom over that bound.
  const int c = static_cast<int>(std::ceil(std::log2(std::sqrt(dt))));
  return std::ldexp(1.0, c + 4 - 53 + (max_levels - level));
}

double quantize(double v, double quantum) noexcept {
  if (quantum == 0.0) return v;
  return std::nearbyint(v / quantum) * quantum;
}

std::pair<double, double> refine_increment(double dw, double h, double z,
                                           double quantum) noexcept {
  const double left = quantize(0.5 * dw + 0.5 * z * std::sqrt(h), quantum);
  return {left, dw - left};
}

}  // namespace bjacobi
