#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdb/core.h"
#include "mdb/multileaving.h"
#include "mdb/rng.h"

namespace mdb {

using FeatureId = std::uint32_t;

struct Document {
  int grade = 0;
  /// Sorted by feature id, unique ids.
  std::vector<std::pair<FeatureId, double>> features;
  /// Text after '#', without the marker; empty if none.
  std::string comment;

  /// Missing features read as 0.
  double feature(FeatureId f) const;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Query {
  std::string id;
  std::vector<Document> docs;

  std::vector<int> grades() const;
  friend bool operator==(const Query&, const Query&) = default;
};

/// Queries in order of first appearance; documents in file order, which is
/// also the tie-break order for feature rankers.
class LtrDataset {
 public:
  Document& add(std::string_view query_id, Document doc);

  const std::vector<Query>& queries() const { return queries_; }
  std::size_t query_count() const { return queries_.size(); }
  std::size_t document_count() const;
  const Query* find(std::string_view query_id) const;
  /// Number of relevance levels, max grade + 1 (at least 2).
  std::size_t grade_levels() const;
  bool has_feature(FeatureId f) const;
  std::vector<FeatureId> feature_ids() const;

  friend bool operator==(const LtrDataset& a, const LtrDataset& b) { return a.queries_ == b.queries_; }

 private:
  std::vector<Query> queries_;
  std::unordered_map<std::string, std::size_t> index_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads "grade qid:Q fid:value ... [# comment]" lines. Blank lines are skipped.
/// Throws ParseError with the 1-based line number on malformed input.
LtrDataset parse_letor(std::istream& in);
/// Path "-" reads standard input. Throws std::runtime_error if unreadable.
LtrDataset load_letor(const std::string& path);
void write_letor(std::ostream& out, const LtrDataset& ds);

/// Documents of the query sorted by feature value, descending; ties keep
/// document order. Throws std::out_of_range for an unknown query.
RankedList feature_ranker_rank(const LtrDataset& ds, std::string_view query_id, FeatureId f);
RankedList feature_ranker_rank(const Query& q, FeatureId f);

/// Throws std::invalid_argument if a feature never occurs in the dataset.
void check_rankers(const LtrDataset& ds, std::span<const FeatureId> rankers);

/// Mean NDCG@depth per ranker over all queries (zero-IDCG queries contribute 0).
std::vector<double> ndcg_table(const LtrDataset& ds, std::span<const FeatureId> rankers,
                               std::size_t depth = kDefaultDepth);

struct GroundTruth {
  std::optional<PreferenceMatrix> preferences;
  std::vector<double> ndcg;
};

/// Offline estimate: p_hat(i, j) from `samples` two-ranker SOSM comparisons per
/// pair under `model` (skipped when samples == 0), plus the NDCG@10 table.
GroundTruth estimate_ground_truth(const LtrDataset& ds, std::span<const FeatureId> rankers,
                                  const ClickModel& model, std::size_t samples, Rng& rng);

/// Fraction of the other rankers whose empirical win rate against `star`
/// exceeds 1/2 after `rounds` multileaved comparisons of all `rankers`.
/// `star` indexes into `rankers`.
double distortion_fraction(const LtrDataset& ds, std::span<const FeatureId> rankers, ArmId star,
                           const ClickModel& model, std::size_t rounds, Rng& rng);

/// Synthetic LETOR data: `dominant_feature` tracks the grade closely, the
/// others are progressively noisier.
struct FixtureSpec {
  std::size_t queries = 50;
  std::size_t features = 20;
  std::size_t docs_per_query = 20;
  std::size_t grade_levels = 3;
  FeatureId dominant_feature = 1;
};
LtrDataset generate_fixture(const FixtureSpec& spec, Rng& rng);

}  // namespace mdb
