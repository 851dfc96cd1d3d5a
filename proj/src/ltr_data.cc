#include "mdb/ltr_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include "mdb/environments.h"

namespace mdb {

double Document::feature(FeatureId f) const {
  auto it = std::lower_bound(features.begin(), features.end(), f,
                             [](const auto& entry, FeatureId id) { return entry.first < id; });
  return (it != features.end() && it->first == f) ? it->second : 0.0;
}

std::vector<int> Query::grades() const {
  std::vector<int> g;
  g.reserve(docs.size());
  for (const auto& d : docs) g.push_back(d.grade);
  return g;
}

Document& LtrDataset::add(std::string_view query_id, Document doc) {
  std::string key(query_id);
  auto [it, inserted] = index_.try_emplace(key, queries_.size());
  if (inserted) queries_.push_back(Query{key, {}});
  auto& docs = queries_[it->second].docs;
  docs.push_back(std::move(doc));
  return docs.back();
}

std::size_t LtrDataset::document_count() const {
  std::size_t n = 0;
  for (const auto& q : queries_) n += q.docs.size();
  return n;
}

const Query* LtrDataset::find(std::string_view query_id) const {
  auto it = index_.find(std::string(query_id));
  return it == index_.end() ? nullptr : &queries_[it->second];
}

std::size_t LtrDataset::grade_levels() const {
  int top = 1;
  for (const auto& q : queries_) {
    for (const auto& d : q.docs) top = std::max(top, d.grade);
  }
  return static_cast<std::size_t>(top) + 1;
}

bool LtrDataset::has_feature(FeatureId f) const {
  for (const auto& q : queries_) {
    for (const auto& d : q.docs) {
      auto it = std::lower_bound(d.features.begin(), d.features.end(), f,
                                 [](const auto& e, FeatureId id) { return e.first < id; });
      if (it != d.features.end() && it->first == f) return true;
    }
  }
  return false;
}

std::vector<FeatureId> LtrDataset::feature_ids() const {
  std::set<FeatureId> ids;
  for (const auto& q : queries_) {
    for (const auto& d : q.docs) {
      for (const auto& [f, v] : d.features) ids.insert(f);
    }
  }
  return {ids.begin(), ids.end()};
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

LtrDataset parse_letor(std::istream& in) {
  LtrDataset ds;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    Document doc;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      doc.comment = std::string(line.substr(hash + 1));
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;  // blank or comment-only

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      auto stop = line.find_first_of(" \t", start);
      if (stop == std::string_view::npos) stop = line.size();
      tokens.push_back(line.substr(start, stop - start));
      pos = stop;
    }

    if (!parse_number(tokens[0], doc.grade) || doc.grade < 0) {
      throw ParseError(line_no, "malformed relevance grade '" + std::string(tokens[0]) + "'");
    }
    if (tokens.size() < 2 || tokens[1].substr(0, 4) != "qid:" || tokens[1].size() == 4) {
      throw ParseError(line_no, "expected 'qid:<id>' after the grade");
    }
    const std::string_view qid = tokens[1].substr(4);
    for (std::size_t t = 2; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      FeatureId fid = 0;
      double value = 0.0;
      if (colon == std::string_view::npos || !parse_number(tokens[t].substr(0, colon), fid) ||
          !parse_number(tokens[t].substr(colon + 1), value)) {
        throw ParseError(line_no, "malformed feature '" + std::string(tokens[t]) + "'");
      }
      doc.features.emplace_back(fid, value);
    }
    std::sort(doc.features.begin(), doc.features.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t f = 1; f < doc.features.size(); ++f) {
      if (doc.features[f].first == doc.features[f - 1].first) {
        throw ParseError(line_no, "duplicate feature id " + std::to_string(doc.features[f].first));
      }
    }
    ds.add(qid, std::move(doc));
  }
  return ds;
}

LtrDataset load_letor(const std::string& path) {
  if (path == "-") return parse_letor(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LETOR file '" + path + "'");
  return parse_letor(in);
}

void write_letor(std::ostream& out, const LtrDataset& ds) {
  for (const auto& q : ds.queries()) {
    for (const auto& d : q.docs) {
      out << d.grade << " qid:" << q.id;
      for (const auto& [f, v] : d.features) out << ' ' << f << ':' << format_double(v);
      if (!d.comment.empty()) out << " #" << d.comment;
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

RankedList feature_ranker_rank(const Query& q, FeatureId f) {
  std::vector<double> value(q.docs.size());
  for (std::size_t d = 0; d < q.docs.size(); ++d) value[d] = q.docs[d].feature(f);
  RankedList order(q.docs.size());
  std::iota(order.begin(), order.end(), DocId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](DocId a, DocId b) { return value[a] > value[b]; });
  return order;
}

RankedList feature_ranker_rank(const LtrDataset& ds, std::string_view query_id, FeatureId f) {
  const Query* q = ds.find(query_id);
  if (!q) throw std::out_of_range("unknown query '" + std::string(query_id) + "'");
  return feature_ranker_rank(*q, f);
}

void check_rankers(const LtrDataset& ds, std::span<const FeatureId> rankers) {
  const auto ids = ds.feature_ids();
  for (FeatureId f : rankers) {
    if (!std::binary_search(ids.begin(), ids.end(), f)) {
      throw std::invalid_argument("feature " + std::to_string(f) + " does not occur in the dataset");
    }
  }
}

std::vector<double> ndcg_table(const LtrDataset& ds, std::span<const FeatureId> rankers,
                               std::size_t depth) {
  std::vector<double> table(rankers.size(), 0.0);
  if (ds.query_count() == 0) return table;
  std::vector<int> ranked;
  for (const auto& q : ds.queries()) {
    const auto all = q.grades();
    for (std::size_t r = 0; r < rankers.size(); ++r) {
      ranked.clear();
      for (DocId d : feature_ranker_rank(q, rankers[r])) ranked.push_back(all[d]);
      table[r] += ndcg_at_k(ranked, all, depth);
    }
  }
  for (double& v : table) v /= static_cast<double>(ds.query_count());
  return table;
}

namespace {
std::shared_ptr<const LtrDataset> borrow(const LtrDataset& ds) {
  return std::shared_ptr<const LtrDataset>(&ds, [](const LtrDataset*) {});
}
}  // namespace

GroundTruth estimate_ground_truth(const LtrDataset& ds, std::span<const FeatureId> rankers,
                                  const ClickModel& model, std::size_t samples, Rng& rng) {
  GroundTruth truth;
  truth.ndcg = ndcg_table(ds, rankers);
  if (samples == 0) return truth;

  const LtrEnvironment env(borrow(ds), {rankers.begin(), rankers.end()}, model);
  const std::size_t k = rankers.size();
  const std::uint64_t base = rng();
  std::vector<double> p(k * k, 0.5);
  std::size_t pair = 0;
  for (ArmId i = 0; i < k; ++i) {
    for (ArmId j = i + 1; j < k; ++j, ++pair) {
      // Each pair has its own stream so results do not depend on pair order.
      Rng pair_rng(stream_seed(base, pair));
      const ArmSet set{i, j};
      std::size_t i_wins = 0;
      for (std::size_t s = 0; s < samples; ++s) {
        const auto outcomes = env.round(set, pair_rng);
        if (!outcomes.empty() && outcomes.front().winner == i) ++i_wins;
      }
      const double pij = static_cast<double>(i_wins) / static_cast<double>(samples);
      p[i * k + j] = pij;
      p[j * k + i] = 1.0 - pij;
    }
  }
  truth.preferences = PreferenceMatrix(k, std::move(p));
  return truth;
}

double distortion_fraction(const LtrDataset& ds, std::span<const FeatureId> rankers, ArmId star,
                           const ClickModel& model, std::size_t rounds, Rng& rng) {
  const LtrEnvironment env(borrow(ds), {rankers.begin(), rankers.end()}, model);
  ArmSet all(rankers.size());
  std::iota(all.begin(), all.end(), ArmId{0});
  return distortion_fraction(env, all, star, rounds, rng);
}

LtrDataset generate_fixture(const FixtureSpec& spec, Rng& rng) {
  if (spec.grade_levels < 2) throw std::invalid_argument("fixture: need at least 2 grade levels");
  if (spec.features == 0) throw std::invalid_argument("fixture: need at least one feature");
  if (spec.dominant_feature < 1 || spec.dominant_feature > spec.features) {
    throw std::invalid_argument("fixture: dominant feature must be in [1, features]");
  }
  // Grade g drawn with weight 2^-g.
  std::vector<double> weights;
  for (std::size_t g = 0; g < spec.grade_levels; ++g) weights.push_back(std::ldexp(1.0, -static_cast<int>(g)));
  std::discrete_distribution<int> grade_dist(weights.begin(), weights.end());
  std::normal_distribution<double> noise(0.0, 1.0);

  // Weaker features get progressively less signal.
  std::vector<double> quality(spec.features + 1, 0.0);
  std::size_t rank = 0;
  for (FeatureId f = 1; f <= spec.features; ++f) {
    if (f == spec.dominant_feature) continue;
    quality[f] = 0.5 * (1.0 - static_cast<double>(rank++) / static_cast<double>(spec.features));
  }

  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  LtrDataset ds;
  for (std::size_t q = 1; q <= spec.queries; ++q) {
    const std::string qid = std::to_string(q);
    for (std::size_t d = 0; d < spec.docs_per_query; ++d) {
      Document doc;
      doc.grade = grade_dist(rng);
      for (FeatureId f = 1; f <= spec.features; ++f) {
        const double value = f == spec.dominant_feature
                                 ? doc.grade + 0.35 * noise(rng)
                                 : quality[f] * doc.grade + noise(rng);
        doc.features.emplace_back(f, round4(value));
      }
      doc.comment = "docid=" + qid + "-" + std::to_string(d);
      ds.add(qid, std::move(doc));
    }
  }
  return ds;
}

}  // namespace mdb
