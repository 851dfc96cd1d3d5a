#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdb/core.h"
#include "mdb/rng.h"

namespace mdb {

/// Document index within one query.
using DocId = std::uint32_t;
/// One ranker's ordering of a query's documents, best first, no duplicates.
using RankedList = std::vector<DocId>;
/// Merged list shown to the user (at most `depth` documents).
using MultileavedList = std::vector<DocId>;
/// Clicked positions in a MultileavedList, ascending.
using ClickVector = std::vector<std::size_t>;
/// Per-ranker credit for one round, aligned with the input lists.
using CreditVector = std::vector<double>;

inline constexpr std::size_t kDefaultDepth = 10;

/// Cascade-style user: scans top-down, clicks with click[grade], and after a
/// click abandons with stop[grade].
struct ClickModel {
  std::string name;
  std::vector<double> click;
  std::vector<double> stop;

  std::size_t grade_levels() const { return click.size(); }
  /// Throws std::invalid_argument if probabilities leave [0,1], the vectors
  /// differ in length, or click is decreasing in grade.
  void validate() const;

  /// Named parameterisation ("perfect", "navigational", "informational") for
  /// a 2-, 3- or 5-level grade scale.
  static ClickModel preset(std::string_view name, std::size_t grade_levels);
};

/// SOSM list construction: each slot is filled by a uniformly chosen ranker
/// that still has unplaced documents, taking its best unplaced document.
MultileavedList sosm_multileave(std::span<const RankedList> lists, std::size_t depth, Rng& rng);
MultileavedList sosm_multileave(std::span<const std::span<const DocId>> lists, std::size_t depth,
                                Rng& rng);

/// 1-based rank of `d` in `full` restricted to the documents of `sample`.
/// Sample documents missing from `full` follow the present ones in sample
/// order. Throws std::invalid_argument if d is not in the sample.
std::size_t restricted_rank(std::span<const DocId> full, std::span<const DocId> sample, DocId d);

/// credit_r = sum over clicked documents of 1 / restricted_rank(list_r, sample, d).
CreditVector sosm_score(std::span<const DocId> sample, std::span<const std::size_t> clicks,
                        std::span<const RankedList> lists);
CreditVector sosm_score(std::span<const DocId> sample, std::span<const std::size_t> clicks,
                        std::span<const std::span<const DocId>> lists);

/// All pairwise outcomes between list indices; higher credit wins, ties by coin.
std::vector<DuelOutcome> infer_pairwise_wins(std::span<const double> credits, Rng& rng);

/// Grades are indexed by DocId; documents beyond the span count as grade 0 and
/// grades above the model's scale are clamped to its top level.
ClickVector simulate_clicks(std::span<const DocId> sample, std::span<const int> grades,
                            const ClickModel& model, Rng& rng);

/// NDCG@k with gain 2^g - 1 and discount log2(i + 1). Zero when the ideal DCG is zero.
double ndcg_at_k(std::span<const int> ranking_grades, std::span<const int> all_grades,
                 std::size_t k);

}  // namespace mdb
