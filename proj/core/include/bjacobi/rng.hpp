#pragma once

// Counter-based normals. Every draw is a pure function of
// (seed, path_id, step, coordinate, level, node), so paths can be replayed
// in any order and on any number of workers.

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace bjacobi {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64 with 10 rounds.
PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Uniform in (0, 1] from the top 53 bits.
double uniform_open_closed(std::uint64_t bits) noexcept;
/// Uniform in [0, 1) from the top 53 bits.
double uniform_closed_open(std::uint64_t bits) noexcept;

class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t path_id) noexcept
      : seed_(seed), path_id_(path_id) {}

  /// A source whose every normal is exactly 0.
  static NoiseSource zero() noexcept {
    NoiseSource out(0, 0);
    out.zero_ = true;
    return out;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t path_id() const noexcept { return path_id_; }
  bool is_zero() const noexcept { return zero_; }

  /// Standard normal for the tuple. Coordinates 2k and 2k+1 share one
  /// Philox block and take the cosine and sine halves of one Box-Muller pair.
  double normal(std::uint64_t step, std::uint64_t coord, std::uint64_t level,
                std::uint64_t node) const noexcept;

  /// normal(step, c, level, node) for c = 0 .. out.size()-1, one block per pair.
  void normals(std::uint64_t step, std::uint64_t level, std::uint64_t node,
               std::span<double> out) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t path_id_;
  bool zero_ = false;
};

/// Grid spacing for Brownian increments of a base step dt at bridge level
/// `level` when at most `max_levels` halvings can occur. Every increment at
/// level L is a multiple of bridge_quantum(dt, L, max_levels), which is a
/// power of two, so splits and their sums are exact in floating point.
double bridge_quantum(double dt, int level, int max_levels) noexcept;

/// Rounds v to the nearest multiple of quantum; quantum = 0 leaves v unchanged.
double quantize(double v, double quantum) noexcept;

/// Splits an increment over a step of length h into its two halves using
/// the Brownian bridge: left = dW/2 + z sqrt(h)/2 (rounded to `quantum`),
/// right = dW - left.
std::pair<double, double> refine_increment(double dw, double h, double z,
                                           double quantum = 0.0) noexcept;

}  // namespace bjacobi
