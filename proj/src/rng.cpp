#include "kpz/rng.hpp"

#include <cmath>
#include <numbers>

#include "kpz/error.hpp"

namespace kpz {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSplitSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed) : key_(mix64(seed ^ kGolden)) {}

Stream::Stream(std::uint64_t key, int) : key_(key) {}

Stream Stream::split(std::uint64_t index) const {
  return Stream(mix64(key_ ^ mix64(index + kSplitSalt)), 0);
}

std::uint64_t Stream::next_u64() {
  ++counter_;
  return mix64(key_ ^ mix64(counter_ * kGolden));
}

double Stream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double Stream::exponential(double rate) {
  require(rate > 0.0, "exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

double Stream::gamma(double shape) {
  require(shape > 0.0, "gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost: gamma(a) = gamma(a + 1) * U^{1/a}
    const double g = gamma(shape + 1.0);
    return g * std::exp(std::log(uniform()) / shape);
  }
  // Marsaglia-Tsang
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Stream::inverse_gamma(double shape) { return 1.0 / gamma(shape); }

double sample_variate(const Variate& v, Stream& rng) {
  switch (v.kind) {
    case VariateKind::gaussian:
      return rng.gaussian();
    case VariateKind::gamma:
      return rng.gamma(v.param);
    case VariateKind::inverse_gamma:
      return rng.inverse_gamma(v.param);
    case VariateKind::exponential:
      return rng.exponential(v.param);
  }
  throw DomainError("sample_variate: unknown kind");
}

}  // namespace kpz
