#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grl {

// Raised for malformed inputs: bad parameters, unnormalized vectors, bad files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when the true percept has zero probability under the agent's model.
class ModelInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAction : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised when a snapshot is restored into an object that did not produce it.
class SnapshotMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Action = int;
inline constexpr Action kNoAction = -1;

struct Percept {
  std::uint64_t observation = 0;
  double reward = 0.0;

  friend bool operator==(const Percept&, const Percept&) = default;
};

struct PerceptHash {
  std::size_t operator()(const Percept& e) const noexcept;
};

struct HistoryEntry {
  Action action = kNoAction;
  Percept percept;
};

// Append-only; the first entry carries kNoAction.
class History {
 public:
  void append(Action a, const Percept& e) { entries_.push_back({a, e}); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const HistoryEntry& operator[](std::size_t i) const { return entries_[i]; }
  const HistoryEntry& back() const { return entries_.back(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<HistoryEntry> entries_;
};

// SplitMix64 keyed by seed, indexed by a counter. Streams derived with
// split() are independent of how far the parent has advanced.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);
  RngStream split(std::uint64_t stream_id) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_double(double x);

inline constexpr double kNormTolerance = 1e-12;

// Non-negative weights summing to one within kNormTolerance.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  // Throws ConfigError if any entry is negative or the sum is off by more than the tolerance.
  explicit FiniteDistribution(std::vector<double> probabilities);
  // Scales arbitrary non-negative weights to sum to one; rejects an all-zero vector.
  static FiniteDistribution normalized(std::vector<double> weights);
  static FiniteDistribution uniform(std::size_t n);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probabilities() const { return p_; }

 private:
  std::vector<double> p_;
};

double entropy_bits(std::span<const double> p);
inline double entropy_bits(const FiniteDistribution& d) { return entropy_bits(d.probabilities()); }

// Draws index i with probability w_i / sum(w). Consumes one uniform draw.
std::size_t sample_categorical(std::span<const double> weights, RngStream& rng);

class GeometricDiscount {
 public:
  explicit GeometricDiscount(double beta);
  double beta() const { return beta_; }
  double weight(int k) const;
  // Sum of weights over k = 0..horizon-1.
  double partial_sum(int horizon) const;

 private:
  double beta_;
};

// Smallest H with beta^H <= eps; throws if eps <= 0 or beta == 1 with eps < 1.
int effective_horizon(const GeometricDiscount& discount, double eps);

struct RewardRange {
  double min = 0.0;
  double max = 0.0;
};

}  // namespace grl
