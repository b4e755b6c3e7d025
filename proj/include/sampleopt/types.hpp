#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace sampleopt {

using Scalar = double;
using Vec = Eigen::VectorX<Scalar>;
using Mat = Eigen::MatrixX<Scalar>;
using Index = Eigen::Index;

/// Seeded, splittable random source.
///
/// Core engine is std::mt19937_64, whose output sequence is pinned by the
/// C++ standard. Streams are derived from (seed, stream_id) through a
/// SplitMix64 mix, so distinct stream_ids give statistically independent
/// sequences from one master seed. Uniform doubles are built explicitly from
/// the top 53 bits and Gaussians via the Marsaglia polar method, so the draw
/// sequence does not depend on the standard library's unspecified
/// distribution algorithms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id), engine_(derive_state(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// New stream derived from this stream's identity and a child id.
  RngStream derive(std::uint64_t child_id) const {
    return RngStream(split_mix64(seed_ ^ split_mix64(stream_id_)), child_id);
  }

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform on [0, 1).
  Scalar uniform() {
    return static_cast<Scalar>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via polar rejection; one spare value cached.
  Scalar gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    Scalar u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const Scalar f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection keeps the draw exactly uniform for any n.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  static std::uint64_t split_mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  static std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream_id) {
    return split_mix64(split_mix64(seed) ^ split_mix64(stream_id ^ 0xd1b54a32d192ed03ULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  Scalar spare_ = 0.0;
};

}  // namespace sampleopt
