#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mdb/core.h"
#include "mdb/rng.h"

namespace mdb {

struct MdbConfig {
  double alpha = 0.5;  // confidence width
  double beta = 1.5;   // widening factor for the exploration set, >= 1
  void validate() const;
};

struct RucbConfig {
  double alpha = 0.51;
  void validate() const;
};

/// RMED1 with exploration term f(K) = coefficient * K^exponent.
struct RmedConfig {
  double coefficient = 0.3;
  double exponent = 1.01;
  double f_of_k(std::size_t arms) const;
  void validate() const;
};

struct MergeRucbConfig {
  double alpha = 1.01;
  std::size_t batch_size = 4;
  void validate() const;
};

/// subset_size == 0 draws the subset size uniformly from [1, K] every round.
struct RandomConfig {
  std::size_t subset_size = 0;
  void validate() const;
};

using PolicyConfig = std::variant<MdbConfig, RucbConfig, RmedConfig, MergeRucbConfig, RandomConfig>;

/// Upper confidence bound w/n + sqrt(width * ln t / n); +inf when n == 0.
/// Throws std::invalid_argument if width <= 0.
double ucb(std::uint64_t wins, std::uint64_t n, std::uint64_t t, double width);

/// Potential Condorcet winners under the narrow (alpha) and wide (beta*alpha)
/// bounds. narrow is always a subset of wide.
struct CandidateSets {
  ArmSet narrow;  // E
  ArmSet wide;    // F
};
CandidateSets candidate_sets(const WinCountMatrix& w, std::uint64_t t, const MdbConfig& cfg);

/// MDB's rule: every arm on round 1; afterwards F when |E| > 1, E when
/// |E| == 1, and every arm when E is empty.
ArmSet mdb_select(const WinCountMatrix& w, std::uint64_t t, const MdbConfig& cfg);

/// Members whose bounds against every other member are >= 1/2; all members
/// when none qualify.
ArmSet rucb_champions(const WinCountMatrix& w, std::span<const ArmId> members, std::uint64_t t,
                      double alpha);
/// Champion drawn from rucb_champions over all arms, challenger maximising
/// u_jc with u_cc = 1/2. Returns {c} when the champion wins that contest.
ArmSet rucb_select(const WinCountMatrix& w, std::uint64_t t, const RucbConfig& cfg, Rng& rng);

/// Bernoulli KL divergence d(p, q) with 0 ln 0 := 0.
double binary_kl(double p, double q);

/// Empirical divergence I_i = sum over j with p_hat(i,j) <= 1/2 of n_ij d(p_hat(i,j), 1/2).
double rmed_divergence(const WinCountMatrix& w, ArmId i);

/// Uniform m-subset of [0, K), sorted. Throws std::invalid_argument unless 1 <= m <= K.
ArmSet random_select(std::size_t arms, std::size_t m, Rng& rng);

/// Common select/observe contract. select() returns the arm set S_t for round
/// t (1-based); observe() feeds back the duels resolved among S_t.
class Policy {
 public:
  explicit Policy(std::size_t arms) : wins_(arms) {}
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  virtual std::string_view name() const = 0;

  ArmSet select(std::uint64_t t, Rng& rng);
  /// Throws std::invalid_argument if an outcome references an arm outside the
  /// last selection.
  void observe(std::span<const DuelOutcome> outcomes);

  std::size_t arms() const { return wins_.size(); }
  const WinCountMatrix& counts() const { return wins_; }

 protected:
  virtual ArmSet do_select(std::uint64_t t, Rng& rng) = 0;
  virtual void after_observe(std::span<const DuelOutcome> /*outcomes*/) {}

  std::uint64_t round() const { return round_; }

 private:
  WinCountMatrix wins_;
  ArmSet last_;
  std::uint64_t round_ = 0;
};

/// Multi-dueling bandit: play every arm on round 1; afterwards exploit the
/// single narrow candidate, or explore the whole wide candidate set.
class MdbPolicy final : public Policy {
 public:
  MdbPolicy(std::size_t arms, MdbConfig cfg);
  std::string_view name() const override { return "mdb"; }

 protected:
  ArmSet do_select(std::uint64_t t, Rng& rng) override;

 private:
  MdbConfig cfg_;
};

/// Relative UCB. Champion uniform over arms whose bounds against all others
/// are >= 1/2; challenger maximises u_jc with u_cc = 1/2, so a champion that
/// is confidently best is played alone.
class RucbPolicy final : public Policy {
 public:
  RucbPolicy(std::size_t arms, RucbConfig cfg);
  std::string_view name() const override { return "rucb"; }

 protected:
  ArmSet do_select(std::uint64_t t, Rng& rng) override;

 private:
  RucbConfig cfg_;
};

/// RMED1: every pair once, then loops over the arms whose empirical
/// divergence is within ln t + f(K) of the smallest.
class RmedPolicy final : public Policy {
 public:
  RmedPolicy(std::size_t arms, RmedConfig cfg);
  std::string_view name() const override { return "rmed1"; }

  double divergence(ArmId i) const { return divergence_[i]; }
  /// Arms currently passing the ln t + f(K) test.
  ArmSet plausible(std::uint64_t t) const;

 protected:
  ArmSet do_select(std::uint64_t t, Rng& rng) override;
  void after_observe(std::span<const DuelOutcome> outcomes) override;

 private:
  ArmId opponent(ArmId i) const;
  double threshold(std::uint64_t t) const;

  RmedConfig cfg_;
  double f_of_k_;
  std::vector<double> divergence_;
  std::size_t init_pair_ = 0;
  std::vector<ArmId> current_;  // L_C remainder, consumed front to back
  std::size_t cursor_ = 0;
  std::vector<bool> in_current_;
  std::vector<bool> in_next_;
};

/// MergeRUCB: RUCB inside small batches visited round-robin, eliminating
/// arms that are confidently beaten within their batch and merging batches
/// once the surviving arm count halves.
class MergeRucbPolicy final : public Policy {
 public:
  MergeRucbPolicy(std::size_t arms, MergeRucbConfig cfg);
  std::string_view name() const override { return "merge_rucb"; }

  const std::vector<ArmSet>& batches() const { return batches_; }
  std::size_t survivors() const;
  /// Partition into batches in the given arm order (used instead of a shuffle).
  void set_partition(std::span<const ArmId> order);

 protected:
  ArmSet do_select(std::uint64_t t, Rng& rng) override;
  void after_observe(std::span<const DuelOutcome> outcomes) override;

 private:
  void eliminate(std::size_t batch);
  void merge_if_needed();

  MergeRucbConfig cfg_;
  std::vector<ArmSet> batches_;
  std::size_t cursor_ = 0;
  std::size_t last_batch_ = 0;
  std::size_t merge_reference_ = 0;
  bool partitioned_ = false;
};

class RandomPolicy final : public Policy {
 public:
  RandomPolicy(std::size_t arms, RandomConfig cfg);
  std::string_view name() const override { return "random"; }

 protected:
  ArmSet do_select(std::uint64_t t, Rng& rng) override;

 private:
  RandomConfig cfg_;
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, std::size_t arms);

}  // namespace mdb
