#include "grl/model.hpp"

#include <atomic>

namespace grl {

namespace {
std::atomic<std::uint64_t> g_next_model_id{1};
}

Model::Model() : id_(g_next_model_id.fetch_add(1)) {}
Model::Model(const Model&) : id_(g_next_model_id.fetch_add(1)) {}

void Model::check_owner(const ModelSnapshot& s) const {
  if (s.owner != id_) throw SnapshotMismatch("snapshot belongs to a different model instance");
}

EnvironmentModel::EnvironmentModel(std::unique_ptr<Environment> env) : env_(std::move(env)) {
  if (!env_) throw ConfigError("EnvironmentModel needs an environment");
}

double EnvironmentModel::update(Action, const Percept& e) {
  const double p = env_->conditional(e);
  if (p <= 0.0) throw ModelInconsistency("percept impossible under the known environment");
  return p;
}

ModelSnapshot EnvironmentModel::snapshot() const { return {id(), env_->snapshot()}; }

void EnvironmentModel::restore(const ModelSnapshot& s) {
  check_owner(s);
  env_->restore(std::any_cast<const EnvSnapshot&>(s.state));
}

}  // namespace grl
