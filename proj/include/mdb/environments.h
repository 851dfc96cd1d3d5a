#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdb/core.h"
#include "mdb/ltr_data.h"
#include "mdb/multileaving.h"
#include "mdb/rng.h"

namespace mdb {

/// Names of the synthetic utility datasets.
std::span<const std::string_view> synthetic_dataset_names();

/// Utility vector of a named synthetic dataset: one arm at 0.8 followed by
/// the listed groups. Arithmetic and geometric families include both
/// endpoints 0.7 and 0.2. Throws std::invalid_argument for an unknown name.
std::vector<double> make_synthetic_dataset(std::string_view name);

/// Turns a selected arm set into resolved duels.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t arms() const = 0;
  /// `set` must be sorted, duplicate-free and non-empty.
  virtual std::vector<DuelOutcome> round(std::span<const ArmId> set, Rng& rng) const = 0;
};

/// One N(u_i, 1) score per selected arm; every pair is decided by the scores.
class UtilityEnvironment final : public Environment {
 public:
  explicit UtilityEnvironment(std::vector<double> utilities);

  std::size_t arms() const override { return utilities_.size(); }
  std::vector<DuelOutcome> round(std::span<const ArmId> set, Rng& rng) const override;

  const std::vector<double>& utilities() const { return utilities_; }
  const PreferenceMatrix& preferences() const { return preferences_; }

 private:
  std::vector<double> utilities_;
  PreferenceMatrix preferences_;
};

/// Independent Bernoulli(p_ij) per selected pair.
class MatrixEnvironment final : public Environment {
 public:
  explicit MatrixEnvironment(PreferenceMatrix p) : p_(std::move(p)) {}

  std::size_t arms() const override { return p_.size(); }
  std::vector<DuelOutcome> round(std::span<const ArmId> set, Rng& rng) const override;

  const PreferenceMatrix& preferences() const { return p_; }

 private:
  PreferenceMatrix p_;
};

/// Matrix where arm 0 beats every other arm with probability 1/2 + margin
/// and all other pairs are even.
PreferenceMatrix margin_matrix(std::size_t arms, double margin);

/// Feature rankers over a LETOR dataset compared by SOSM multileaving of the
/// top-`depth` documents and simulated clicks.
class LtrEnvironment final : public Environment {
 public:
  LtrEnvironment(std::shared_ptr<const LtrDataset> dataset, std::vector<FeatureId> rankers,
                 ClickModel model, std::size_t depth = kDefaultDepth);

  std::size_t arms() const override { return rankers_.size(); }
  std::vector<DuelOutcome> round(std::span<const ArmId> set, Rng& rng) const override;

  struct Round {
    std::vector<DuelOutcome> outcomes;
    std::size_t query = 0;
    MultileavedList shown;
  };
  /// Same as round(), also reporting the sampled query index and the list shown.
  Round ltr_round(std::span<const ArmId> set, Rng& rng) const;

  const LtrDataset& dataset() const { return *dataset_; }
  const std::vector<FeatureId>& rankers() const { return rankers_; }
  const ClickModel& click_model() const { return model_; }
  const RankedList& ranking(std::size_t query, ArmId arm) const {
    return rankings_[query * rankers_.size() + arm];
  }

 private:
  std::size_t sample_query(Rng& rng) const;

  std::shared_ptr<const LtrDataset> dataset_;
  std::vector<FeatureId> rankers_;
  ClickModel model_;
  std::size_t depth_;
  std::vector<RankedList> rankings_;  // [query][arm]
  std::vector<std::vector<int>> grades_;
};

/// Fraction of arms in `subset` (other than `star`) that beat `star` in more
/// than half of their duels over `rounds` comparisons of the whole subset.
double distortion_fraction(const Environment& env, std::span<const ArmId> subset, ArmId star,
                           std::size_t rounds, Rng& rng);

/// How a selected set is charged: mean preference shortfall against a matrix and
/// its Condorcet winner, or NDCG shortfall against the best ranker.
class RegretModel {
 public:
  static RegretModel condorcet(PreferenceMatrix p);
  static RegretModel ndcg(std::vector<double> table);

  double operator()(std::span<const ArmId> set) const;
  /// The arm regret is measured against.
  ArmId best() const { return best_; }
  /// False when the matrix has no Condorcet winner and best() is a stand-in
  /// (highest row sum); instantaneous regret can then go negative.
  bool exact() const { return exact_; }

 private:
  std::optional<PreferenceMatrix> p_;
  std::vector<double> ndcg_;
  ArmId best_ = 0;
  bool exact_ = true;
};

}  // namespace mdb
