#include "grl/core.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

namespace grl {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (value + kGolden + (seed << 6) + (seed >> 2)));
}

std::uint64_t hash_double(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  std::uint64_t bits = 0;
  static_assert(sizeof bits == sizeof x);
  std::memcpy(&bits, &x, sizeof bits);
  return mix64(bits);
}

std::size_t PerceptHash::operator()(const Percept& e) const noexcept {
  return static_cast<std::size_t>(hash_combine(mix64(e.observation), hash_double(e.reward)));
}

RngStream::RngStream(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + kGolden * counter_);
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw ConfigError("uniform_index: empty range");
  const std::uint64_t bound = n;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return static_cast<std::size_t>(x % bound);
}

RngStream RngStream::split(std::uint64_t stream_id) const {
  RngStream child(0);
  child.key_ = mix64(key_ ^ mix64(stream_id * 0xd1342543de82ef95ULL + 1));
  return child;
}

FiniteDistribution::FiniteDistribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  double total = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw ConfigError("distribution has a negative or NaN entry");
    total += x;
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    throw ConfigError("distribution sums to " + std::to_string(total));
}

FiniteDistribution FiniteDistribution::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double x : weights) {
    if (!(x >= 0.0)) throw ConfigError("weights have a negative or NaN entry");
    total += x;
  }
  if (total <= 0.0) throw ConfigError("weights are all zero");
  for (double& x : weights) x /= total;
  FiniteDistribution d;
  d.p_ = std::move(weights);
  return d;
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  if (n == 0) throw ConfigError("uniform distribution over nothing");
  FiniteDistribution d;
  d.p_.assign(n, 1.0 / static_cast<double>(n));
  return d;
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

std::size_t sample_categorical(std::span<const double> weights, RngStream& rng) {
  double total = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw ConfigError("sample_categorical: negative weight");
    if (weights[i] > 0.0) last_positive = i;
    total += weights[i];
  }
  if (last_positive == weights.size()) throw ConfigError("sample_categorical: all weights are zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc && weights[i] > 0.0) return i;
  }
  return last_positive;
}

GeometricDiscount::GeometricDiscount(double beta) : beta_(beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("discount must lie in [0, 1]");
}

double GeometricDiscount::weight(int k) const { return std::pow(beta_, k); }

double GeometricDiscount::partial_sum(int horizon) const {
  double s = 0.0;
  double w = 1.0;
  for (int k = 0; k < horizon; ++k) {
    s += w;
    w *= beta_;
  }
  return s;
}

int effective_horizon(const GeometricDiscount& discount, double eps) {
  if (!(eps > 0.0)) throw ConfigError("effective_horizon: eps must be positive");
  const double beta = discount.beta();
  if (eps >= 1.0) return 0;
  if (beta == 0.0) return 1;
  if (beta == 1.0) throw ConfigError("effective_horizon: undiscounted horizon is unbounded");
  int h = static_cast<int>(std::ceil(std::log(eps) / std::log(beta)));
  if (h < 0) h = 0;
  while (std::pow(beta, h) > eps) ++h;
  while (h > 0 && std::pow(beta, h - 1) <= eps) --h;
  return h;
}

}  // namespace grl
