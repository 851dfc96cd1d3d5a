#include "mdb/policies.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mdb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared by ucb() and the matrix scans so both give bit-identical bounds.
inline double bound(std::uint64_t wins, std::uint64_t n, double width_log_t) {
  if (n == 0) return kInf;
  const double nd = static_cast<double>(n);
  return static_cast<double>(wins) / nd + std::sqrt(width_log_t / nd);
}

inline double pair_bound(const WinCountMatrix& w, ArmId i, ArmId j, double width_log_t) {
  if (i == j) return 0.5;
  return bound(w.wins(i, j), w.comparisons(i, j), width_log_t);
}

double log_round(std::uint64_t t) { return std::log(static_cast<double>(std::max<std::uint64_t>(t, 1))); }

ArmSet all_arms(std::size_t k) {
  ArmSet s(k);
  std::iota(s.begin(), s.end(), ArmId{0});
  return s;
}

ArmSet as_set(ArmId a, ArmId b) {
  if (a == b) return {a};
  return a < b ? ArmSet{a, b} : ArmSet{b, a};
}

template <class T>
const T& pick_uniform(const std::vector<T>& v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

std::vector<ArmId> champions_of(const WinCountMatrix& w, std::span<const ArmId> members,
                                double width_log_t) {
  std::vector<ArmId> champions;
  for (ArmId i : members) {
    bool plausible = true;
    for (ArmId j : members) {
      if (j != i && pair_bound(w, i, j, width_log_t) < 0.5) {
        plausible = false;
        break;
      }
    }
    if (plausible) champions.push_back(i);
  }
  if (champions.empty()) champions.assign(members.begin(), members.end());
  return champions;
}

// RUCB champion/challenger rule over `members` (a subset of arms).
ArmSet rucb_pair(const WinCountMatrix& w, std::span<const ArmId> members, double width_log_t,
                 Rng& rng) {
  const ArmId c = pick_uniform(champions_of(w, members, width_log_t), rng);
  double best = -kInf;
  std::vector<ArmId> challengers;
  for (ArmId j : members) {
    const double u = pair_bound(w, j, c, width_log_t);
    if (u > best) {
      best = u;
      challengers.assign(1, j);
    } else if (u == best) {
      challengers.push_back(j);
    }
  }
  return as_set(c, pick_uniform(challengers, rng));
}

}  // namespace

void MdbConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("mdb: alpha must be > 0");
  if (!(beta >= 1.0)) throw std::invalid_argument("mdb: beta must be >= 1");
}

void RucbConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("rucb: alpha must be > 0");
}

double RmedConfig::f_of_k(std::size_t arms) const {
  return coefficient * std::pow(static_cast<double>(arms), exponent);
}

void RmedConfig::validate() const {
  if (!(coefficient >= 0.0)) throw std::invalid_argument("rmed1: coefficient must be >= 0");
}

void MergeRucbConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("merge_rucb: alpha must be > 0");
  if (batch_size < 2) throw std::invalid_argument("merge_rucb: batch_size must be >= 2");
}

void RandomConfig::validate() const {}

double ucb(std::uint64_t wins, std::uint64_t n, std::uint64_t t, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("ucb: width must be > 0");
  return bound(wins, n, width * log_round(t));
}

CandidateSets candidate_sets(const WinCountMatrix& w, std::uint64_t t, const MdbConfig& cfg) {
  cfg.validate();
  const double log_t = log_round(t);
  const double narrow_width = cfg.alpha * log_t;
  const double wide_width = cfg.beta * cfg.alpha * log_t;
  const std::size_t k = w.size();

  CandidateSets out;
  for (ArmId i = 0; i < k; ++i) {
    bool in_narrow = true;
    bool in_wide = true;
    for (ArmId j = 0; j < k && in_wide; ++j) {
      if (j == i) continue;
      const auto n = w.comparisons(i, j);
      if (n == 0) continue;
      if (bound(w.wins(i, j), n, wide_width) < 0.5) {
        in_wide = false;
        in_narrow = false;
      } else if (in_narrow && bound(w.wins(i, j), n, narrow_width) < 0.5) {
        in_narrow = false;
      }
    }
    if (in_narrow) out.narrow.push_back(i);
    if (in_wide) out.wide.push_back(i);
  }
  return out;
}

ArmSet mdb_select(const WinCountMatrix& w, std::uint64_t t, const MdbConfig& cfg) {
  if (t <= 1) return all_arms(w.size());
  auto sets = candidate_sets(w, t, cfg);
  if (sets.narrow.size() > 1) return std::move(sets.wide);
  if (sets.narrow.size() == 1) return std::move(sets.narrow);
  return all_arms(w.size());
}

ArmSet rucb_champions(const WinCountMatrix& w, std::span<const ArmId> members, std::uint64_t t,
                      double alpha) {
  return champions_of(w, members, alpha * log_round(t));
}

ArmSet rucb_select(const WinCountMatrix& w, std::uint64_t t, const RucbConfig& cfg, Rng& rng) {
  cfg.validate();
  const ArmSet members = all_arms(w.size());
  if (members.size() == 1) return members;
  return rucb_pair(w, members, cfg.alpha * log_round(t), rng);
}

double binary_kl(double p, double q) {
  auto term = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

double rmed_divergence(const WinCountMatrix& w, ArmId i) {
  double total = 0.0;
  for (ArmId j = 0; j < w.size(); ++j) {
    if (j == i) continue;
    const auto n = w.comparisons(i, j);
    if (n == 0) continue;
    const double p = static_cast<double>(w.wins(i, j)) / static_cast<double>(n);
    if (p <= 0.5) total += static_cast<double>(n) * binary_kl(p, 0.5);
  }
  return total;
}

ArmSet random_select(std::size_t arms, std::size_t m, Rng& rng) {
  if (m < 1 || m > arms) {
    throw std::invalid_argument("random_select: subset size " + std::to_string(m) +
                                " outside [1, " + std::to_string(arms) + "]");
  }
  ArmSet pool = all_arms(arms);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, arms - 1);
    std::swap(pool[i], pool[d(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// ---------------------------------------------------------------------------

ArmSet Policy::select(std::uint64_t t, Rng& rng) {
  round_ = t;
  last_ = do_select(t, rng);
  return last_;
}

void Policy::observe(std::span<const DuelOutcome> outcomes) {
  for (const auto& o : outcomes) {
    if (!std::binary_search(last_.begin(), last_.end(), o.winner) ||
        !std::binary_search(last_.begin(), last_.end(), o.loser)) {
      throw std::invalid_argument("observe: outcome references an arm not selected this round");
    }
  }
  wins_.record_duels(outcomes);
  after_observe(outcomes);
}

// ---------------------------------------------------------------------------

MdbPolicy::MdbPolicy(std::size_t arms, MdbConfig cfg) : Policy(arms), cfg_(cfg) {
  cfg_.validate();
}

ArmSet MdbPolicy::do_select(std::uint64_t t, Rng& /*rng*/) { return mdb_select(counts(), t, cfg_); }

// ---------------------------------------------------------------------------

RucbPolicy::RucbPolicy(std::size_t arms, RucbConfig cfg) : Policy(arms), cfg_(cfg) {
  cfg_.validate();
}

ArmSet RucbPolicy::do_select(std::uint64_t t, Rng& rng) { return rucb_select(counts(), t, cfg_, rng); }

// ---------------------------------------------------------------------------

RmedPolicy::RmedPolicy(std::size_t arms, RmedConfig cfg)
    : Policy(arms),
      cfg_(cfg),
      f_of_k_(cfg.f_of_k(arms)),
      divergence_(arms, 0.0),
      in_current_(arms, false),
      in_next_(arms, false) {
  cfg_.validate();
  current_ = all_arms(arms);
  std::fill(in_current_.begin(), in_current_.end(), true);
}

double RmedPolicy::threshold(std::uint64_t t) const { return log_round(t) + f_of_k_; }

ArmSet RmedPolicy::plausible(std::uint64_t t) const {
  const double floor = *std::min_element(divergence_.begin(), divergence_.end());
  ArmSet out;
  for (ArmId i = 0; i < arms(); ++i) {
    if (divergence_[i] - floor <= threshold(t)) out.push_back(i);
  }
  return out;
}

ArmId RmedPolicy::opponent(ArmId i) const {
  ArmId best = i;
  double lowest = 0.5;
  bool found = false;
  for (ArmId j = 0; j < arms(); ++j) {
    if (j == i) continue;
    const double p = counts().mean(i, j);
    if (p <= 0.5 && (!found || p < lowest)) {
      lowest = p;
      best = j;
      found = true;
    }
  }
  return best;
}

ArmSet RmedPolicy::do_select(std::uint64_t /*t*/, Rng& /*rng*/) {
  const std::size_t k = arms();
  if (k == 1) return {0};
  const std::size_t pairs = k * (k - 1) / 2;
  if (init_pair_ < pairs) {
    // Decode the init_pair_-th pair (i < j) in lexicographic order.
    std::size_t idx = init_pair_++;
    ArmId i = 0;
    while (idx >= k - 1 - i) {
      idx -= k - 1 - i;
      ++i;
    }
    return {i, i + 1 + idx};
  }
  if (cursor_ >= current_.size()) {
    current_.clear();
    for (ArmId j = 0; j < k; ++j) {
      in_current_[j] = in_next_[j];
      if (in_next_[j]) current_.push_back(j);
      in_next_[j] = false;
    }
    if (current_.empty()) {
      current_ = plausible(round());
      for (ArmId j : current_) in_current_[j] = true;
    }
    cursor_ = 0;
  }
  const ArmId l = current_[cursor_++];
  in_current_[l] = false;
  return as_set(l, opponent(l));
}

void RmedPolicy::after_observe(std::span<const DuelOutcome> outcomes) {
  for (const auto& o : outcomes) {
    divergence_[o.winner] = rmed_divergence(counts(), o.winner);
    divergence_[o.loser] = rmed_divergence(counts(), o.loser);
  }
  const std::size_t k = arms();
  if (init_pair_ < k * (k - 1) / 2) return;
  // Arms not waiting in the current loop join the next one if plausible.
  const double floor = *std::min_element(divergence_.begin(), divergence_.end());
  const double limit = threshold(round());
  for (ArmId j = 0; j < k; ++j) {
    if (!in_current_[j] && !in_next_[j] && divergence_[j] - floor <= limit) in_next_[j] = true;
  }
}

// ---------------------------------------------------------------------------

MergeRucbPolicy::MergeRucbPolicy(std::size_t arms, MergeRucbConfig cfg)
    : Policy(arms), cfg_(cfg) {
  cfg_.validate();
}

std::size_t MergeRucbPolicy::survivors() const {
  std::size_t n = 0;
  for (const auto& b : batches_) n += b.size();
  return n;
}

void MergeRucbPolicy::set_partition(std::span<const ArmId> order) {
  const std::size_t k = order.size();
  const std::size_t count = (k + cfg_.batch_size - 1) / cfg_.batch_size;
  batches_.assign(std::max<std::size_t>(count, 1), {});
  // Balanced sizes: consecutive runs whose lengths differ by at most one.
  std::size_t pos = 0;
  for (std::size_t b = 0; b < batches_.size(); ++b) {
    const std::size_t len = k / batches_.size() + (b < k % batches_.size() ? 1 : 0);
    batches_[b].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                       order.begin() + static_cast<std::ptrdiff_t>(pos + len));
    std::sort(batches_[b].begin(), batches_[b].end());
    pos += len;
  }
  merge_reference_ = k;
  cursor_ = 0;
  partitioned_ = true;
}

ArmSet MergeRucbPolicy::do_select(std::uint64_t t, Rng& rng) {
  if (!partitioned_) {
    ArmSet order = all_arms(arms());
    std::shuffle(order.begin(), order.end(), rng);
    set_partition(order);
  }
  if (survivors() == 1) {
    for (const auto& b : batches_) {
      if (!b.empty()) return b;
    }
  }
  // merge_if_needed guarantees some batch still has two members.
  for (std::size_t step = 0; step < batches_.size(); ++step) {
    const std::size_t b = (cursor_ + step) % batches_.size();
    if (batches_[b].size() >= 2) {
      cursor_ = (b + 1) % batches_.size();
      last_batch_ = b;
      return rucb_pair(counts(), batches_[b], cfg_.alpha * log_round(t), rng);
    }
  }
  throw std::logic_error("merge_rucb: no batch with two arms");
}

void MergeRucbPolicy::eliminate(std::size_t batch) {
  auto& members = batches_[batch];
  if (members.size() < 2 || round() < 2) return;
  const double width = cfg_.alpha * log_round(round());
  ArmSet kept;
  ArmId fallback = members.front();
  double fallback_score = -kInf;
  for (ArmId i : members) {
    double worst = kInf;
    for (ArmId j : members) {
      if (j != i) worst = std::min(worst, pair_bound(counts(), i, j, width));
    }
    if (worst >= 0.5) kept.push_back(i);
    if (worst > fallback_score) {
      fallback_score = worst;
      fallback = i;
    }
  }
  // Keep the least-beaten member if none survive.
  if (kept.empty()) kept.push_back(fallback);
  members = std::move(kept);
}

void MergeRucbPolicy::merge_if_needed() {
  auto has_pair = [&] {
    return std::any_of(batches_.begin(), batches_.end(),
                       [](const ArmSet& b) { return b.size() >= 2; });
  };
  std::erase_if(batches_, [](const ArmSet& b) { return b.empty(); });
  const std::size_t alive = survivors();
  if (alive <= 1) return;
  if (2 * alive > merge_reference_ && has_pair()) return;
  do {
    std::sort(batches_.begin(), batches_.end(),
              [](const ArmSet& a, const ArmSet& b) { return a.size() < b.size(); });
    std::vector<ArmSet> merged;
    std::size_t lo = 0;
    std::size_t hi = batches_.size();
    while (lo + 1 < hi) {
      ArmSet m = batches_[lo++];
      const ArmSet& other = batches_[--hi];
      m.insert(m.end(), other.begin(), other.end());
      std::sort(m.begin(), m.end());
      merged.push_back(std::move(m));
    }
    if (lo < hi) merged.push_back(batches_[lo]);
    batches_ = std::move(merged);
  } while (!has_pair());
  merge_reference_ = alive;
  cursor_ = 0;
}

void MergeRucbPolicy::after_observe(std::span<const DuelOutcome> outcomes) {
  if (outcomes.empty() || batches_.empty()) return;
  eliminate(last_batch_);
  merge_if_needed();
}

// ---------------------------------------------------------------------------

RandomPolicy::RandomPolicy(std::size_t arms, RandomConfig cfg) : Policy(arms), cfg_(cfg) {
  if (cfg_.subset_size > arms) {
    throw std::invalid_argument("random: subset_size exceeds arm count");
  }
}

ArmSet RandomPolicy::do_select(std::uint64_t /*t*/, Rng& rng) {
  std::size_t m = cfg_.subset_size;
  if (m == 0) {
    std::uniform_int_distribution<std::size_t> d(1, arms());
    m = d(rng);
  }
  return random_select(arms(), m, rng);
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, std::size_t arms) {
  if (arms == 0) throw std::invalid_argument("policy needs at least one arm");
  return std::visit(
      [arms](const auto& c) -> std::unique_ptr<Policy> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MdbConfig>) return std::make_unique<MdbPolicy>(arms, c);
        if constexpr (std::is_same_v<T, RucbConfig>) return std::make_unique<RucbPolicy>(arms, c);
        if constexpr (std::is_same_v<T, RmedConfig>) return std::make_unique<RmedPolicy>(arms, c);
        if constexpr (std::is_same_v<T, MergeRucbConfig>)
          return std::make_unique<MergeRucbPolicy>(arms, c);
        if constexpr (std::is_same_v<T, RandomConfig>)
          return std::make_unique<RandomPolicy>(arms, c);
      },
      cfg);
}

}  // namespace mdb
