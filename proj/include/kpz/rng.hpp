#pragma once

#include <cstdint>

namespace kpz {

/// Counter-based splittable random stream.
///
/// Output i of a stream is a hash of (key, i). Children are keyed by hashing
/// (parent key, child index), so a tree of streams is reproducible from one
/// 64-bit seed regardless of how work is scheduled.
class Stream {
 public:
  explicit Stream(std::uint64_t seed = 0);

  Stream split(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  double exponential(double rate);
  double gamma(double shape);
  double inverse_gamma(double shape);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  Stream(std::uint64_t key, int);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z);

enum class VariateKind { gaussian, gamma, inverse_gamma, exponential };

struct Variate {
  VariateKind kind = VariateKind::gaussian;
  double param = 1.0;  ///< shape for gamma laws, rate for exponential
};

double sample_variate(const Variate& v, Stream& rng);

}  // namespace kpz
