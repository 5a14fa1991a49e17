#include "grl/utility.hpp"

#include <algorithm>
#include <cmath>

namespace grl {

double utility_rl(const Percept& e) { return e.reward; }

double utility_square(double xi) { return -xi; }

double utility_shannon(double xi) {
  if (!(xi > 0.0)) return kShannonCap;
  return std::min(-std::log2(xi), kShannonCap);
}

double utility_kl(const Model& posterior) { return -posterior.entropy(); }

double step_utility(UtilityKind kind, const Percept& e, double xi, const Model& posterior) {
  switch (kind) {
    case UtilityKind::reward: return utility_rl(e);
    case UtilityKind::square: return utility_square(xi);
    case UtilityKind::shannon: return utility_shannon(xi);
    case UtilityKind::kl: return utility_kl(posterior);
  }
  return 0.0;
}

RewardRange utility_range(UtilityKind kind, const Model& model) {
  switch (kind) {
    case UtilityKind::reward: return model.reward_range();
    case UtilityKind::square: return {-1.0, 0.0};
    case UtilityKind::shannon: return {0.0, kShannonCap};
    case UtilityKind::kl: {
      const double h0 = model.prior_entropy();
      // A model with nothing to learn still needs a non-degenerate range.
      return {h0 > 0.0 ? -h0 : -1.0, 0.0};
    }
  }
  return {0.0, 1.0};
}

std::string_view to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::reward: return "reward";
    case UtilityKind::square: return "square";
    case UtilityKind::shannon: return "shannon";
    case UtilityKind::kl: return "kl";
  }
  return "?";
}

}  // namespace grl
