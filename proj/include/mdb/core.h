#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mdb {

/// Dense arm (ranker) index in [0, K).
using ArmId = std::size_t;

/// Sorted, duplicate-free set of arms chosen for one round.
using ArmSet = std::vector<ArmId>;

/// One resolved pairwise comparison.
struct DuelOutcome {
  ArmId winner = 0;
  ArmId loser = 0;

  friend bool operator==(const DuelOutcome&, const DuelOutcome&) = default;
};

/// P(X_i > X_j) for independent unit-variance Gaussians centred at the two
/// utilities, i.e. Phi((u_i - u_j) / sqrt(2)).
double closed_form_win_prob(double u_i, double u_j);

/// Ground-truth pairwise win probabilities. p(i, j) + p(j, i) == 1 and
/// p(i, i) == 1/2 are checked on construction.
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;
  PreferenceMatrix(std::size_t arms, std::vector<double> row_major);

  static PreferenceMatrix from_utilities(std::span<const double> utilities);
  /// Takes the strict upper triangle as given and fills the rest.
  static PreferenceMatrix from_upper(std::size_t arms,
                                     const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return arms_; }
  double operator()(ArmId i, ArmId j) const { return p_[i * arms_ + j]; }

  PreferenceMatrix restricted_to(std::span<const ArmId> arms) const;
  std::vector<std::vector<double>> rows() const;

 private:
  std::size_t arms_ = 0;
  std::vector<double> p_;
};

/// The arm whose off-diagonal row is strictly above 1/2, if any.
std::optional<ArmId> condorcet_winner(const PreferenceMatrix& p);

/// Average regret of a set against the Condorcet winner `star`:
/// mean_{j in S} p(star, j) - 1/2. Throws std::invalid_argument on empty S.
double set_regret(const PreferenceMatrix& p, ArmId star, std::span<const ArmId> set);

/// Average NDCG shortfall of a set relative to the best arm in `ndcg`.
double ndcg_set_regret(std::span<const double> ndcg, std::span<const ArmId> set);

/// Running duel statistics: wins(i, j) counts wins of i over j.
class WinCountMatrix {
 public:
  WinCountMatrix() = default;
  explicit WinCountMatrix(std::size_t arms) : arms_(arms), w_(arms * arms, 0) {}
  /// Rebuilds a matrix from row-major win counts. Throws std::invalid_argument
  /// on a size mismatch or a non-zero diagonal.
  static WinCountMatrix from_counts(std::size_t arms, std::vector<std::uint64_t> row_major);

  std::size_t size() const { return arms_; }
  std::uint64_t wins(ArmId i, ArmId j) const { return w_[i * arms_ + j]; }
  std::uint64_t comparisons(ArmId i, ArmId j) const {
    return w_[i * arms_ + j] + w_[j * arms_ + i];
  }
  /// Empirical p_ij; 1/2 for unobserved pairs and the diagonal.
  double mean(ArmId i, ArmId j) const;
  std::uint64_t total() const { return total_; }

  /// Throws std::out_of_range if any arm is >= size() or winner == loser.
  void record_duels(std::span<const DuelOutcome> outcomes);
  void record(const DuelOutcome& outcome);

  friend bool operator==(const WinCountMatrix&, const WinCountMatrix&) = default;

 private:
  std::size_t arms_ = 0;
  std::vector<std::uint64_t> w_;
  std::uint64_t total_ = 0;
};

/// One logged point of a cumulative-regret curve.
struct RegretPoint {
  std::uint64_t t = 0;
  double instantaneous = 0.0;
  double cumulative = 0.0;

  friend bool operator==(const RegretPoint&, const RegretPoint&) = default;
};

/// Per-round regret accumulator that keeps only the requested checkpoints.
class RegretTrace {
 public:
  void add(std::uint64_t t, double instantaneous, bool keep);

  double cumulative() const { return cumulative_; }
  const std::vector<RegretPoint>& points() const { return points_; }

 private:
  double cumulative_ = 0.0;
  std::vector<RegretPoint> points_;
};

}  // namespace mdb
