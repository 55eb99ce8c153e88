#include "diab/ensemble.hpp"

#include <algorithm>
#include <fstream>

#include "diab/errors.hpp"

namespace diab {

namespace {

void check_boundary(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ArgumentError("decision boundary T must lie in [0, 1]");
}

}  // namespace

EnsembleModel::EnsembleModel(std::vector<TrainedModel> members, double decision_boundary_t)
    : members_(std::move(members)), t_(decision_boundary_t) {
  check_boundary(t_);
  if (members_.size() != kAllModelKinds.size())
    throw ArgumentError("ensemble requires exactly " + std::to_string(kAllModelKinds.size()) +
                        " members, got " + std::to_string(members_.size()));
  for (size_t i = 0; i < members_.size(); ++i)
    for (size_t j = i + 1; j < members_.size(); ++j)
      if (members_[i].kind() == members_[j].kind())
        throw ArgumentError("ensemble members must have pairwise distinct kinds (duplicate " +
                            to_string(members_[i].kind()) + ")");
  // Canonical member order: the averaged probability is then independent
  // of the order the members were handed in, down to the last bit.
  std::sort(members_.begin(), members_.end(),
            [](const TrainedModel& a, const TrainedModel& b) {
              return static_cast<int>(a.kind()) < static_cast<int>(b.kind());
            });
  const size_t width = members_[0].catalog().columns.size();
  for (const TrainedModel& m : members_)
    if (m.catalog().columns.size() != width)
      throw ShapeError("ensemble members disagree on input width");
}

void EnsembleModel::set_decision_boundary(double t) {
  check_boundary(t);
  t_ = t;
}

std::vector<double> EnsembleModel::member_probas(std::span<const double> x) const {
  std::vector<double> p;
  p.reserve(members_.size());
  for (const TrainedModel& m : members_) p.push_back(m.predict_proba(x));
  return p;
}

double EnsembleModel::proba(std::span<const double> x) const {
  double sum = 0.0;
  for (const TrainedModel& m : members_) sum += m.predict_proba(x);
  return sum / static_cast<double>(members_.size());
}

std::vector<double> EnsembleModel::proba_rows(const DesignMatrix& X) const {
  std::vector<double> p(X.rows);
  for (size_t i = 0; i < X.rows; ++i) p[i] = proba(X.row(i));
  return p;
}

nlohmann::json EnsembleModel::to_json() const {
  nlohmann::json members = nlohmann::json::array();
  for (const TrainedModel& m : members_) members.push_back(m.to_json());
  return {{"format_version", 1},
          {"decision_boundary_t", t_},
          {"internal_cutoff", internal_cutoff()},
          {"members", std::move(members)}};
}

EnsembleModel EnsembleModel::from_json(const nlohmann::json& j) {
  std::vector<TrainedModel> members;
  for (const auto& m : j.at("members")) members.push_back(TrainedModel::from_json(m));
  return EnsembleModel(std::move(members), j.at("decision_boundary_t").get<double>());
}

void EnsembleModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write ensemble file: " + path);
  out << to_json().dump(1) << '\n';
  if (!out) throw IoError("write failure on: " + path);
}

EnsembleModel EnsembleModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing ensemble artifact: " + path + " (run `train` first)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("malformed ensemble artifact " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace diab
