#include "grl/gridworld.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

namespace grl {

namespace {

std::atomic<std::uint64_t> g_next_env_id{1};

char tile_char(TileKind k) {
  switch (k) {
    case TileKind::empty: return '.';
    case TileKind::wall: return '#';
    case TileKind::dispenser: return 'D';
    case TileKind::trap: return 'T';
    case TileKind::noise: return 'N';
    case TileKind::self_modification: return 'M';
  }
  return '?';
}

std::string fmt_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("grid header: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("grid header: bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

bool noise_in_view(const GridSpec& g, int r, int c) {
  for (int a = 0; a < kGridActions; ++a) {
    const int rr = r + kDeltaRow[a];
    const int cc = c + kDeltaCol[a];
    if (g.in_bounds(rr, cc) && g.at(rr, cc).kind == TileKind::noise) return true;
  }
  return false;
}

}  // namespace

Environment::Environment() : id_(g_next_env_id.fetch_add(1)) {}
Environment::Environment(const Environment&) : id_(g_next_env_id.fetch_add(1)) {}

void Environment::check_owner(const EnvSnapshot& s) const {
  if (s.owner != id_) throw SnapshotMismatch("snapshot belongs to a different environment instance");
}

GridSpec GridSpec::filled(int n, TileKind kind) {
  GridSpec g;
  g.size = n;
  g.tiles.assign(static_cast<std::size_t>(n * n), Tile{kind, 0.0});
  return g;
}

bool GridSpec::has(TileKind kind) const {
  return std::any_of(tiles.begin(), tiles.end(), [kind](const Tile& t) { return t.kind == kind; });
}

void GridSpec::validate(bool require_dispenser) const {
  if (size < 1) throw ConfigError("grid side length must be positive");
  if (tiles.size() != static_cast<std::size_t>(size * size)) throw ConfigError("grid tile count mismatch");
  if (!in_bounds(start.row, start.col)) throw ConfigError("grid start out of bounds");
  if (at(start.row, start.col).kind == TileKind::wall) throw ConfigError("grid start is a wall");
  if (noise_alphabet < 2) throw ConfigError("noise alphabet must have at least 2 symbols");
  for (const Tile& t : tiles)
    if (t.kind == TileKind::dispenser && !(t.theta > 0.0 && t.theta <= 1.0))
      throw ConfigError("dispenser theta must lie in (0, 1]");
  if (!require_dispenser) return;
  int best = -1;
  for (int i = 0; i < size * size; ++i) {
    const Tile& t = tiles[static_cast<std::size_t>(i)];
    if (t.kind == TileKind::dispenser && (best < 0 || t.theta > tiles[static_cast<std::size_t>(best)].theta)) best = i;
  }
  if (best < 0) throw ConfigError("grid has no dispenser");
  if (bfs_distances(*this, start)[static_cast<std::size_t>(best)] < 0)
    throw ConfigError("best dispenser is unreachable from the start");
}

std::uint64_t wall_mask(const GridSpec& g, int r, int c) {
  std::uint64_t m = 0;
  for (int a = 0; a < kObservationWallBits; ++a) {
    const int rr = r + kDeltaRow[a];
    const int cc = c + kDeltaCol[a];
    if (!g.in_bounds(rr, cc) || g.at(rr, cc).kind == TileKind::wall) m |= (1ULL << a);
  }
  return m;
}

std::vector<int> bfs_distances(const GridSpec& g, Coord from) {
  std::vector<int> dist(static_cast<std::size_t>(g.size * g.size), -1);
  if (!g.in_bounds(from.row, from.col) || g.at(from.row, from.col).kind == TileKind::wall) return dist;
  std::deque<Coord> queue{from};
  dist[static_cast<std::size_t>(from.row * g.size + from.col)] = 0;
  while (!queue.empty()) {
    const Coord cur = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(cur.row * g.size + cur.col)];
    if (g.at(cur.row, cur.col).kind == TileKind::trap && !(cur == from)) continue;
    for (int a = 0; a < kObservationWallBits; ++a) {
      const int rr = cur.row + kDeltaRow[a];
      const int cc = cur.col + kDeltaCol[a];
      if (!g.in_bounds(rr, cc) || g.at(rr, cc).kind == TileKind::wall) continue;
      int& slot = dist[static_cast<std::size_t>(rr * g.size + cc)];
      if (slot >= 0) continue;
      slot = d + 1;
      queue.push_back({rr, cc});
    }
  }
  return dist;
}

int reachable_tile_count(const GridSpec& g) {
  const auto dist = bfs_distances(g, g.start);
  return static_cast<int>(std::count_if(dist.begin(), dist.end(), [](int d) { return d >= 0; }));
}

GridSpec parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  while (std::getline(in, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
  }
  if (header.empty()) throw ConfigError("grid text is empty");

  GridSpec g;
  double theta = 1.0;
  bool have_n = false;
  std::istringstream hs(header);
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ConfigError("grid header: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "N") {
      g.size = parse_int(value);
      have_n = true;
    } else if (key == "theta") {
      theta = parse_real(value);
    } else if (key == "rewards") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) throw ConfigError("grid header: rewards needs three values");
      g.rewards = {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
    } else if (key == "start") {
      const auto parts = split(value, ',');
      if (parts.size() != 2) throw ConfigError("grid header: start needs row,col");
      g.start = {parse_int(parts[0]), parse_int(parts[1])};
    } else if (key == "noise") {
      g.noise_alphabet = parse_int(value);
    } else {
      throw ConfigError("grid header: unknown key '" + key + "'");
    }
  }
  if (!have_n || g.size < 1) throw ConfigError("grid header: missing N");

  g.tiles.reserve(static_cast<std::size_t>(g.size * g.size));
  std::string line;
  int rows = 0;
  while (rows < g.size && std::getline(in, line)) {
    std::string row;
    for (char ch : line)
      if (ch != ' ' && ch != '\t' && ch != '\r') row.push_back(ch);
    if (row.empty()) continue;
    if (static_cast<int>(row.size()) != g.size)
      throw ConfigError("grid row " + std::to_string(rows) + " has " + std::to_string(row.size()) + " tiles");
    for (char ch : row) {
      Tile t;
      switch (ch) {
        case '.': t.kind = TileKind::empty; break;
        case '#': t.kind = TileKind::wall; break;
        case 'D': t = {TileKind::dispenser, theta}; break;
        case 'T': t.kind = TileKind::trap; break;
        case 'N': t.kind = TileKind::noise; break;
        case 'M': t.kind = TileKind::self_modification; break;
        default: throw ConfigError(std::string("grid: unknown tile character '") + ch + "'");
      }
      g.tiles.push_back(t);
    }
    ++rows;
  }
  if (rows != g.size) throw ConfigError("grid: expected " + std::to_string(g.size) + " rows");
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw ConfigError("grid: trailing content");
  g.validate(false);
  return g;
}

GridSpec load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read grid file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

std::string format_grid(const GridSpec& g) {
  double theta = 1.0;
  for (const Tile& t : g.tiles)
    if (t.kind == TileKind::dispenser) {
      theta = t.theta;
      break;
    }
  std::string out = "N=" + std::to_string(g.size) + " theta=" + fmt_real(theta) + " rewards=" +
                    fmt_real(g.rewards.empty) + "," + fmt_real(g.rewards.wall) + "," + fmt_real(g.rewards.cake);
  if (!(g.start == Coord{0, 0}))
    out += " start=" + std::to_string(g.start.row) + "," + std::to_string(g.start.col);
  if (g.noise_alphabet != kDefaultNoiseAlphabet) out += " noise=" + std::to_string(g.noise_alphabet);
  out += "\n";
  for (int r = 0; r < g.size; ++r) {
    for (int c = 0; c < g.size; ++c) out.push_back(tile_char(g.at(r, c).kind));
    out += "\n";
  }
  return out;
}

double grid_conditional(const GridSpec& g, const GridState& s, const Percept& e) {
  const std::uint64_t walls = e.observation & ((1ULL << kObservationWallBits) - 1);
  const std::uint64_t symbol = e.observation >> kObservationWallBits;
  if (walls != wall_mask(g, s.row, s.col)) return 0.0;
  double p_obs = 1.0;
  if (noise_in_view(g, s.row, s.col)) {
    if (symbol >= static_cast<std::uint64_t>(g.noise_alphabet)) return 0.0;
    p_obs = 1.0 / g.noise_alphabet;
  } else if (symbol != 0) {
    return 0.0;
  }
  double p_reward = 0.0;
  const Tile& here = g.at(s.row, s.col);
  if (s.wireheaded) {
    p_reward = e.reward == kRewardMax ? 1.0 : 0.0;
  } else if (s.trapped || s.bumped) {
    p_reward = e.reward == g.rewards.wall ? 1.0 : 0.0;
  } else if (here.kind == TileKind::dispenser) {
    if (e.reward == g.rewards.cake) p_reward += here.theta;
    if (e.reward == g.rewards.empty) p_reward += 1.0 - here.theta;
  } else {
    p_reward = e.reward == g.rewards.empty ? 1.0 : 0.0;
  }
  return p_obs * p_reward;
}

Gridworld::Gridworld(GridSpec spec) : Gridworld(std::make_shared<const GridSpec>(std::move(spec))) {}

Gridworld::Gridworld(std::shared_ptr<const GridSpec> spec) : spec_(std::move(spec)) {
  spec_->validate(false);
  const int n = spec_->size;
  masks_.resize(static_cast<std::size_t>(n * n));
  noisy_.resize(static_cast<std::size_t>(n * n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      masks_[static_cast<std::size_t>(r * n + c)] = wall_mask(*spec_, r, c);
      noisy_[static_cast<std::size_t>(r * n + c)] = noise_in_view(*spec_, r, c) ? 1 : 0;
    }
  state_.row = spec_->start.row;
  state_.col = spec_->start.col;
  const TileKind k = spec_->at(state_.row, state_.col).kind;
  state_.trapped = k == TileKind::trap;
  state_.wireheaded = k == TileKind::self_modification;
}

RewardRange Gridworld::reward_range() const {
  const GridRewards& r = spec_->rewards;
  RewardRange out{std::min({r.empty, r.wall, r.cake}), std::max({r.empty, r.wall, r.cake})};
  if (spec_->has(TileKind::self_modification)) out.max = kRewardMax;
  return out;
}

void Gridworld::perform(Action a) {
  if (a < 0 || a >= kGridActions) throw InvalidAction("gridworld action " + std::to_string(a));
  state_.bumped = false;
  if (state_.trapped || a == kStay) return;
  const int r = state_.row + kDeltaRow[a];
  const int c = state_.col + kDeltaCol[a];
  if (!spec_->in_bounds(r, c) || spec_->at(r, c).kind == TileKind::wall) {
    state_.bumped = true;
    return;
  }
  state_.row = r;
  state_.col = c;
  const TileKind k = spec_->at(r, c).kind;
  if (k == TileKind::trap) state_.trapped = true;
  if (k == TileKind::self_modification) state_.wireheaded = true;
}

Percept Gridworld::generate_percept(RngStream& rng) const {
  const auto idx = static_cast<std::size_t>(state_.row * spec_->size + state_.col);
  Percept e;
  e.observation = masks_[idx];
  if (noisy_[idx])
    e.observation |= static_cast<std::uint64_t>(rng.uniform_index(static_cast<std::size_t>(spec_->noise_alphabet)))
                     << kObservationWallBits;
  const GridRewards& rw = spec_->rewards;
  const Tile& here = spec_->tiles[idx];
  if (state_.wireheaded) {
    e.reward = kRewardMax;
  } else if (state_.trapped || state_.bumped) {
    e.reward = rw.wall;
  } else if (here.kind == TileKind::dispenser) {
    e.reward = rng.uniform() < here.theta ? rw.cake : rw.empty;
  } else {
    e.reward = rw.empty;
  }
  return e;
}

double Gridworld::conditional(const Percept& e) const {
  const auto idx = static_cast<std::size_t>(state_.row * spec_->size + state_.col);
  // Fast path for the common noise-free case.
  if (!noisy_[idx] && e.observation != masks_[idx]) return 0.0;
  return grid_conditional(*spec_, state_, e);
}

std::vector<Percept> Gridworld::percept_space() const {
  std::vector<double> rewards{spec_->rewards.empty, spec_->rewards.wall, spec_->rewards.cake};
  if (spec_->has(TileKind::self_modification)) rewards.push_back(kRewardMax);
  std::sort(rewards.begin(), rewards.end());
  rewards.erase(std::unique(rewards.begin(), rewards.end()), rewards.end());
  const std::uint64_t symbols = spec_->has(TileKind::noise) ? static_cast<std::uint64_t>(spec_->noise_alphabet) : 1;
  std::vector<Percept> out;
  out.reserve(static_cast<std::size_t>(16 * symbols * rewards.size()));
  for (std::uint64_t sym = 0; sym < symbols; ++sym)
    for (std::uint64_t walls = 0; walls < 16; ++walls)
      for (double r : rewards) out.push_back({walls | (sym << kObservationWallBits), r});
  return out;
}

EnvSnapshot Gridworld::snapshot() const { return {id(), state_}; }

void Gridworld::restore(const EnvSnapshot& s) {
  check_owner(s);
  const auto* st = std::get_if<GridState>(&s.state);
  if (st == nullptr) throw SnapshotMismatch("not a gridworld snapshot");
  state_ = *st;
}

std::unique_ptr<Environment> Gridworld::clone() const { return std::unique_ptr<Environment>(new Gridworld(*this)); }

std::uint64_t Gridworld::state_hash() const {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(state_.row) * 1000003ULL + static_cast<std::uint64_t>(state_.col));
  h = hash_combine(h, (state_.bumped ? 1U : 0U) | (state_.trapped ? 2U : 0U) | (state_.wireheaded ? 4U : 0U));
  return h;
}

GridSpec build_random_grid(int n, const FiniteDistribution& probs, double theta, std::uint64_t seed) {
  if (n < 2) throw ConfigError("build_random_grid: N must be at least 2");
  if (probs.size() != 3) throw ConfigError("build_random_grid: expected (empty, wall, dispenser) probabilities");
  if (probs[2] <= 0.0) throw ConfigError("build_random_grid: dispenser probability must be positive");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("build_random_grid: theta must lie in (0, 1]");
  RngStream rng(seed);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GridSpec g = GridSpec::filled(n);
    for (Tile& t : g.tiles) {
      switch (sample_categorical(probs.probabilities(), rng)) {
        case 0: t = {TileKind::empty, 0.0}; break;
        case 1: t = {TileKind::wall, 0.0}; break;
        default: t = {TileKind::dispenser, theta}; break;
      }
    }
    if (g.at(0, 0).kind == TileKind::wall) g.at(0, 0) = {TileKind::empty, 0.0};
    try {
      g.validate(true);
      return g;
    } catch (const ConfigError&) {
    }
  }
  throw ConfigError("build_random_grid: no solvable layout found");
}

}  // namespace grl
