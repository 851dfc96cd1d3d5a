#include "mdb/environments.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mdb {

namespace {

constexpr double kBest = 0.8;
constexpr double kGood = 0.7;
constexpr double kPoor = 0.2;

constexpr std::array<std::string_view, 15> kSyntheticNames = {
    "1good5poor",  "1good50poor",  "1good200poor", "2good4poor", "11good40poor",
    "41good160poor", "3good3poor", "21good30poor", "81good120poor", "arith6",
    "arith51",     "arith201",     "geom6",        "geom51",     "geom201"};

std::vector<double> groups(std::size_t good, std::size_t poor) {
  std::vector<double> u{kBest};
  u.insert(u.end(), good, kGood);
  u.insert(u.end(), poor, kPoor);
  return u;
}

std::vector<double> arithmetic(std::size_t terms) {
  std::vector<double> u{kBest};
  for (std::size_t i = 0; i < terms; ++i) {
    u.push_back(kGood - (kGood - kPoor) * static_cast<double>(i) / static_cast<double>(terms - 1));
  }
  u.back() = kPoor;
  return u;
}

std::vector<double> geometric(std::size_t terms) {
  const double ratio = std::pow(kPoor / kGood, 1.0 / static_cast<double>(terms - 1));
  std::vector<double> u{kBest};
  for (std::size_t i = 0; i < terms; ++i) u.push_back(kGood * std::pow(ratio, static_cast<double>(i)));
  u.back() = kPoor;
  return u;
}

}  // namespace

std::span<const std::string_view> synthetic_dataset_names() { return kSyntheticNames; }

std::vector<double> make_synthetic_dataset(std::string_view name) {
  if (name == "1good5poor") return groups(0, 5);
  if (name == "1good50poor") return groups(0, 50);
  if (name == "1good200poor") return groups(0, 200);
  if (name == "2good4poor") return groups(1, 4);
  if (name == "11good40poor") return groups(10, 40);
  if (name == "41good160poor") return groups(40, 160);
  if (name == "3good3poor") return groups(2, 3);
  if (name == "21good30poor") return groups(20, 30);
  if (name == "81good120poor") return groups(80, 120);
  if (name == "arith6") return arithmetic(5);
  if (name == "arith51") return arithmetic(50);
  if (name == "arith201") return arithmetic(200);
  if (name == "geom6") return geometric(5);
  if (name == "geom51") return geometric(50);
  if (name == "geom201") return geometric(200);
  throw std::invalid_argument("unknown synthetic dataset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

UtilityEnvironment::UtilityEnvironment(std::vector<double> utilities)
    : utilities_(std::move(utilities)), preferences_(PreferenceMatrix::from_utilities(utilities_)) {}

std::vector<DuelOutcome> UtilityEnvironment::round(std::span<const ArmId> set, Rng& rng) const {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> score(set.size());
  for (std::size_t a = 0; a < set.size(); ++a) score[a] = utilities_[set[a]] + noise(rng);

  std::vector<DuelOutcome> out;
  out.reserve(set.size() * (set.size() - 1) / 2);
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      bool a_wins = score[a] > score[b];
      if (score[a] == score[b]) a_wins = fair_coin(rng);
      out.push_back(a_wins ? DuelOutcome{set[a], set[b]} : DuelOutcome{set[b], set[a]});
    }
  }
  return out;
}

std::vector<DuelOutcome> MatrixEnvironment::round(std::span<const ArmId> set, Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DuelOutcome> out;
  out.reserve(set.size() * (set.size() - 1) / 2);
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      const bool a_wins = u(rng) < p_(set[a], set[b]);
      out.push_back(a_wins ? DuelOutcome{set[a], set[b]} : DuelOutcome{set[b], set[a]});
    }
  }
  return out;
}

PreferenceMatrix margin_matrix(std::size_t arms, double margin) {
  if (!(margin >= 0.0 && margin <= 0.5)) throw std::invalid_argument("margin must be in [0, 1/2]");
  std::vector<double> p(arms * arms, 0.5);
  for (std::size_t j = 1; j < arms; ++j) {
    p[j] = 0.5 + margin;
    p[j * arms] = 0.5 - margin;
  }
  return PreferenceMatrix(arms, std::move(p));
}

// ---------------------------------------------------------------------------

LtrEnvironment::LtrEnvironment(std::shared_ptr<const LtrDataset> dataset,
                               std::vector<FeatureId> rankers, ClickModel model, std::size_t depth)
    : dataset_(std::move(dataset)), rankers_(std::move(rankers)), model_(std::move(model)), depth_(depth) {
  if (!dataset_) throw std::invalid_argument("ltr environment: no dataset");
  if (rankers_.empty()) throw std::invalid_argument("ltr environment: no rankers");
  if (depth_ == 0) throw std::invalid_argument("ltr environment: depth must be >= 1");
  model_.validate();
  check_rankers(*dataset_, rankers_);
  const auto& queries = dataset_->queries();
  if (std::none_of(queries.begin(), queries.end(), [](const Query& q) { return !q.docs.empty(); })) {
    throw std::invalid_argument("ltr environment: dataset has no documents");
  }
  rankings_.reserve(queries.size() * rankers_.size());
  grades_.reserve(queries.size());
  for (const auto& q : queries) {
    for (FeatureId f : rankers_) rankings_.push_back(feature_ranker_rank(q, f));
    grades_.push_back(q.grades());
  }
}

std::size_t LtrEnvironment::sample_query(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, grades_.size() - 1);
  for (;;) {
    const std::size_t q = pick(rng);
    if (!grades_[q].empty()) return q;
    static thread_local bool warned = false;
    if (!warned) {
      std::cerr << "warning: skipping empty query '" << dataset_->queries()[q].id
                << "' and resampling\n";
      warned = true;
    }
  }
}

LtrEnvironment::Round LtrEnvironment::ltr_round(std::span<const ArmId> set, Rng& rng) const {
  Round r;
  r.query = sample_query(rng);
  std::vector<std::span<const DocId>> lists;
  lists.reserve(set.size());
  for (ArmId a : set) lists.emplace_back(ranking(r.query, a));
  if (set.size() < 2) {
    if (!lists.empty()) {
      r.shown.assign(lists[0].begin(), lists[0].begin() +
                                           static_cast<std::ptrdiff_t>(std::min(depth_, lists[0].size())));
    }
    return r;
  }
  r.shown = sosm_multileave(lists, depth_, rng);
  const auto clicks = simulate_clicks(r.shown, grades_[r.query], model_, rng);
  const auto credits = sosm_score(r.shown, clicks, lists);
  r.outcomes = infer_pairwise_wins(credits, rng);
  for (auto& o : r.outcomes) {
    o.winner = set[o.winner];
    o.loser = set[o.loser];
  }
  return r;
}

std::vector<DuelOutcome> LtrEnvironment::round(std::span<const ArmId> set, Rng& rng) const {
  return ltr_round(set, rng).outcomes;
}

// ---------------------------------------------------------------------------

double distortion_fraction(const Environment& env, std::span<const ArmId> subset, ArmId star,
                           std::size_t rounds, Rng& rng) {
  if (std::find(subset.begin(), subset.end(), star) == subset.end()) {
    throw std::invalid_argument("distortion_fraction: star is not in the subset");
  }
  if (subset.size() < 2) return 0.0;
  ArmSet sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  // Per arm: wins over star, and duels against star.
  std::vector<std::uint64_t> wins(env.arms(), 0);
  std::vector<std::uint64_t> played(env.arms(), 0);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (const auto& o : env.round(sorted, rng)) {
      if (o.loser == star) {
        ++wins[o.winner];
        ++played[o.winner];
      } else if (o.winner == star) {
        ++played[o.loser];
      }
    }
  }
  std::size_t beating = 0;
  for (ArmId j : sorted) {
    if (j != star && 2 * wins[j] > played[j]) ++beating;
  }
  return static_cast<double>(beating) / static_cast<double>(sorted.size() - 1);
}

// ---------------------------------------------------------------------------

RegretModel RegretModel::condorcet(PreferenceMatrix p) {
  RegretModel m;
  if (auto star = condorcet_winner(p)) {
    m.best_ = *star;
  } else {
    m.exact_ = false;
    double top = -1.0;
    for (ArmId i = 0; i < p.size(); ++i) {
      double row = 0.0;
      for (ArmId j = 0; j < p.size(); ++j) row += p(i, j);
      if (row > top) {
        top = row;
        m.best_ = i;
      }
    }
  }
  m.p_ = std::move(p);
  return m;
}

RegretModel RegretModel::ndcg(std::vector<double> table) {
  if (table.empty()) throw std::invalid_argument("regret model: empty NDCG table");
  RegretModel m;
  m.best_ = static_cast<ArmId>(std::max_element(table.begin(), table.end()) - table.begin());
  m.ndcg_ = std::move(table);
  return m;
}

double RegretModel::operator()(std::span<const ArmId> set) const {
  if (p_) return set_regret(*p_, best_, set);
  return ndcg_set_regret(ndcg_, set);
}

}  // namespace mdb
