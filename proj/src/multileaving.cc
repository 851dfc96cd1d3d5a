#include "mdb/multileaving.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mdb {

void ClickModel::validate() const {
  if (click.empty() || click.size() != stop.size()) {
    throw std::invalid_argument("click model '" + name +
                                "': click and stop vectors must be non-empty and equally long");
  }
  for (std::size_t g = 0; g < click.size(); ++g) {
    if (!(click[g] >= 0.0 && click[g] <= 1.0) || !(stop[g] >= 0.0 && stop[g] <= 1.0)) {
      throw std::invalid_argument("click model '" + name + "': probability outside [0,1]");
    }
    if (g > 0 && click[g] < click[g - 1]) {
      throw std::invalid_argument("click model '" + name + "': click probability decreases with grade");
    }
  }
}

ClickModel ClickModel::preset(std::string_view name, std::size_t grade_levels) {
  struct Row {
    std::string_view name;
    std::size_t levels;
    std::vector<double> click, stop;
  };
  static const std::vector<Row> table = {
      {"perfect", 2, {0.0, 1.0}, {0.0, 0.0}},
      {"navigational", 2, {0.05, 0.95}, {0.2, 0.9}},
      {"informational", 2, {0.4, 0.9}, {0.1, 0.5}},
      {"perfect", 3, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}},
      {"navigational", 3, {0.05, 0.5, 0.95}, {0.2, 0.5, 0.9}},
      {"informational", 3, {0.4, 0.7, 0.9}, {0.1, 0.3, 0.5}},
      {"perfect", 5, {0.0, 0.2, 0.4, 0.8, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0}},
      {"navigational", 5, {0.05, 0.3, 0.5, 0.7, 0.95}, {0.2, 0.3, 0.5, 0.7, 0.9}},
      {"informational", 5, {0.4, 0.6, 0.7, 0.8, 0.9}, {0.1, 0.2, 0.3, 0.4, 0.5}},
  };
  for (const auto& row : table) {
    if (row.name == name && row.levels == grade_levels) {
      return ClickModel{std::string(name), row.click, row.stop};
    }
  }
  throw std::invalid_argument("no click model preset '" + std::string(name) + "' for " +
                              std::to_string(grade_levels) + " grade levels");
}

namespace {
std::vector<std::span<const DocId>> views(std::span<const RankedList> lists) {
  return {lists.begin(), lists.end()};
}
}  // namespace

MultileavedList sosm_multileave(std::span<const RankedList> lists, std::size_t depth, Rng& rng) {
  return sosm_multileave(std::span<const std::span<const DocId>>(views(lists)), depth, rng);
}

MultileavedList sosm_multileave(std::span<const std::span<const DocId>> lists, std::size_t depth,
                                Rng& rng) {
  MultileavedList out;
  std::vector<std::size_t> next(lists.size(), 0);
  auto placed = [&out](DocId d) { return std::find(out.begin(), out.end(), d) != out.end(); };
  std::vector<std::size_t> live;
  while (out.size() < depth) {
    live.clear();
    for (std::size_t r = 0; r < lists.size(); ++r) {
      while (next[r] < lists[r].size() && placed(lists[r][next[r]])) ++next[r];
      if (next[r] < lists[r].size()) live.push_back(r);
    }
    if (live.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    const std::size_t r = live[pick(rng)];
    out.push_back(lists[r][next[r]++]);
  }
  return out;
}

std::size_t restricted_rank(std::span<const DocId> full, std::span<const DocId> sample, DocId d) {
  if (std::find(sample.begin(), sample.end(), d) == sample.end()) {
    throw std::invalid_argument("restricted_rank: document " + std::to_string(d) +
                                " is not in the sample");
  }
  auto in_sample = [&](DocId x) { return std::find(sample.begin(), sample.end(), x) != sample.end(); };
  std::size_t rank = 0;
  for (DocId x : full) {
    if (!in_sample(x)) continue;
    ++rank;
    if (x == d) return rank;
  }
  // d is absent from the ranker's list: it follows every present document.
  for (DocId x : sample) {
    if (std::find(full.begin(), full.end(), x) != full.end()) continue;
    ++rank;
    if (x == d) return rank;
  }
  return rank;  // unreachable: d is in the sample
}

CreditVector sosm_score(std::span<const DocId> sample, std::span<const std::size_t> clicks,
                        std::span<const RankedList> lists) {
  return sosm_score(sample, clicks, std::span<const std::span<const DocId>>(views(lists)));
}

CreditVector sosm_score(std::span<const DocId> sample, std::span<const std::size_t> clicks,
                        std::span<const std::span<const DocId>> lists) {
  CreditVector credits(lists.size(), 0.0);
  if (clicks.empty()) return credits;
  std::vector<std::size_t> rank(sample.size());
  for (std::size_t r = 0; r < lists.size(); ++r) {
    // Restricted ranks of every sample document for this ranker.
    std::fill(rank.begin(), rank.end(), 0);
    std::size_t next = 1;
    for (DocId x : lists[r]) {
      for (std::size_t p = 0; p < sample.size(); ++p) {
        if (sample[p] == x && rank[p] == 0) {
          rank[p] = next++;
          break;
        }
      }
      if (next > sample.size()) break;
    }
    for (std::size_t p = 0; p < sample.size(); ++p) {
      if (rank[p] == 0) rank[p] = next++;
    }
    for (std::size_t pos : clicks) credits[r] += 1.0 / static_cast<double>(rank[pos]);
  }
  return credits;
}

std::vector<DuelOutcome> infer_pairwise_wins(std::span<const double> credits, Rng& rng) {
  std::vector<DuelOutcome> out;
  out.reserve(credits.size() * (credits.size() - (credits.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < credits.size(); ++i) {
    for (std::size_t j = i + 1; j < credits.size(); ++j) {
      bool i_wins = credits[i] > credits[j];
      if (credits[i] == credits[j]) i_wins = fair_coin(rng);
      out.push_back(i_wins ? DuelOutcome{i, j} : DuelOutcome{j, i});
    }
  }
  return out;
}

ClickVector simulate_clicks(std::span<const DocId> sample, std::span<const int> grades,
                            const ClickModel& model, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int top = static_cast<int>(model.grade_levels()) - 1;
  ClickVector clicks;
  for (std::size_t pos = 0; pos < sample.size(); ++pos) {
    const DocId d = sample[pos];
    const int g = std::clamp(d < grades.size() ? grades[d] : 0, 0, top);
    if (u(rng) < model.click[static_cast<std::size_t>(g)]) {
      clicks.push_back(pos);
      if (u(rng) < model.stop[static_cast<std::size_t>(g)]) break;
    }
  }
  return clicks;
}

namespace {
double dcg(std::span<const int> grades, std::size_t k) {
  double sum = 0.0;
  const std::size_t n = std::min(k, grades.size());
  for (std::size_t i = 0; i < n; ++i) {
    sum += (std::exp2(static_cast<double>(grades[i])) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}
}  // namespace

double ndcg_at_k(std::span<const int> ranking_grades, std::span<const int> all_grades,
                 std::size_t k) {
  if (k == 0) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
  std::vector<int> ideal(all_grades.begin(), all_grades.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal, k);
  if (idcg <= 0.0) return 0.0;
  return dcg(ranking_grades, k) / idcg;
}

}  // namespace mdb
