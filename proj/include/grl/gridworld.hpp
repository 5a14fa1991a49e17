#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grl/environment.hpp"

namespace grl {

enum GridAction : Action { kLeft = 0, kRight = 1, kUp = 2, kDown = 3, kStay = 4 };
inline constexpr int kGridActions = 5;

enum class TileKind : std::uint8_t { empty, wall, dispenser, trap, noise, self_modification };

struct Tile {
  TileKind kind = TileKind::empty;
  double theta = 0.0;  // dispensers only
  friend bool operator==(const Tile&, const Tile&) = default;
};

struct GridRewards {
  double empty = -1.0;
  double wall = -5.0;
  double cake = 100.0;
  friend bool operator==(const GridRewards&, const GridRewards&) = default;
};

inline constexpr double kRewardMax = 9007199254740991.0;  // 2^53 - 1
inline constexpr int kObservationWallBits = 4;
inline constexpr int kDefaultNoiseAlphabet = 1024;

struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct GridSpec {
  int size = 0;
  std::vector<Tile> tiles;  // row-major, size * size
  GridRewards rewards;
  Coord start;
  int noise_alphabet = kDefaultNoiseAlphabet;

  static GridSpec filled(int n, TileKind kind = TileKind::empty);
  bool in_bounds(int r, int c) const { return r >= 0 && c >= 0 && r < size && c < size; }
  const Tile& at(int r, int c) const { return tiles[static_cast<std::size_t>(r * size + c)]; }
  Tile& at(int r, int c) { return tiles[static_cast<std::size_t>(r * size + c)]; }
  bool has(TileKind kind) const;
  // Throws ConfigError on an inconsistent layout. A true environment must
  // also contain a dispenser reachable from the start.
  void validate(bool require_dispenser = true) const;
};

// Neighbour offsets indexed by GridAction (kStay is the zero offset).
inline constexpr int kDeltaRow[kGridActions] = {0, 0, -1, 1, 0};
inline constexpr int kDeltaCol[kGridActions] = {-1, 1, 0, 0, 0};

// Wall bits of the 4-neighbourhood; out of bounds counts as wall.
std::uint64_t wall_mask(const GridSpec& g, int r, int c);

// Shortest path lengths from `from` through non-wall tiles; -1 when unreachable.
// Traps are entered but never expanded.
std::vector<int> bfs_distances(const GridSpec& g, Coord from);
int reachable_tile_count(const GridSpec& g);

// Text format:
//   N=<int> theta=<real> rewards=<empty>,<wall>,<cake> [start=<r>,<c>] [noise=<alphabet>]
//   then N rows over the alphabet . # D T N M
GridSpec parse_grid(const std::string& text);
GridSpec load_grid(const std::string& path);
std::string format_grid(const GridSpec& g);

// Exact probability of percept e from a grid state.
double grid_conditional(const GridSpec& g, const GridState& s, const Percept& e);

class Gridworld final : public Environment {
 public:
  explicit Gridworld(GridSpec spec);
  explicit Gridworld(std::shared_ptr<const GridSpec> spec);

  int num_actions() const override { return kGridActions; }
  RewardRange reward_range() const override;
  void perform(Action a) override;
  Percept generate_percept(RngStream& rng) const override;
  double conditional(const Percept& e) const override;
  std::vector<Percept> percept_space() const override;
  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& s) override;
  std::unique_ptr<Environment> clone() const override;
  std::uint64_t state_hash() const override;

  const GridSpec& spec() const { return *spec_; }
  const std::shared_ptr<const GridSpec>& shared_spec() const { return spec_; }
  const GridState& state() const { return state_; }
  Coord position() const { return {state_.row, state_.col}; }

 private:
  Gridworld(const Gridworld&) = default;

  std::shared_ptr<const GridSpec> spec_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint8_t> noisy_;  // 1 where a noise source is on or next to the tile
  GridState state_;
};

// Random layout with the start open and at least one dispenser, redrawn until
// the highest-theta dispenser is reachable from the start. `probs` is the
// distribution over (empty, wall, dispenser); dispensers get `theta`.
GridSpec build_random_grid(int n, const FiniteDistribution& probs, double theta, std::uint64_t seed);

}  // namespace grl
