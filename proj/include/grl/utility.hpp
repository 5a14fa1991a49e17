#pragma once

#include <string_view>

#include "grl/model.hpp"

namespace grl {

enum class UtilityKind { reward, square, shannon, kl };

inline constexpr double kShannonCap = 1000.0;

double utility_rl(const Percept& e);
// xi is the predictive probability the model assigned to the percept.
double utility_square(double xi);
double utility_shannon(double xi);
// Negative entropy of the (already updated) posterior.
double utility_kl(const Model& posterior);

double step_utility(UtilityKind kind, const Percept& e, double xi, const Model& posterior);

// Declared bounds of a utility, used to normalize values inside the search.
// RL uses the model's reward range, Square [-1, 0], Shannon [0, cap], and KL
// [-H0, 0] where H0 is the model's prior entropy.
RewardRange utility_range(UtilityKind kind, const Model& model);

std::string_view to_string(UtilityKind kind);

}  // namespace grl
