#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdb/ltr_data.h"

using namespace mdb;

namespace {

LtrDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_letor(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

// Ten queries of eight documents; feature 1 is the grade, feature 2 its negation.
LtrDataset graded_fixture() {
  LtrDataset ds;
  Rng rng(1);
  std::uniform_int_distribution<int> grade(0, 2);
  for (int q = 0; q < 10; ++q) {
    for (int d = 0; d < 8; ++d) {
      const int g = d == 0 ? 2 : grade(rng);
      ds.add(std::to_string(q), Document{g, {{1, double(g) + 0.01 * d}, {2, -double(g) - 0.01 * d}}, ""});
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("parse_letor examples") {
  const auto one = parse("2 qid:10 1:0.5 2:0.3 #doc=a\n");
  REQUIRE(one.query_count() == 1);
  const auto& q = one.queries()[0];
  CHECK(q.id == "10");
  REQUIRE(q.docs.size() == 1);
  CHECK(q.docs[0].grade == 2);
  CHECK(q.docs[0].features == std::vector<std::pair<FeatureId, double>>{{1, 0.5}, {2, 0.3}});
  CHECK(q.docs[0].comment == "doc=a");

  const auto two = parse("1 qid:10 1:0.5\n0 qid:10 1:0.1\n");
  CHECK(two.query_count() == 1);
  CHECK(two.document_count() == 2);

  CHECK(error_line("x qid:1 1:0.1\n") == 1);
  CHECK_THROWS_AS(parse("x qid:1 1:0.1\n"), ParseError);
  CHECK(parse("").query_count() == 0);
}

TEST_CASE("parse_letor rejects malformed lines with their line number") {
  CHECK(error_line("1 qid:1 1:0.1\n\n1 1:0.2\n") == 3);
  CHECK(error_line("1 qid:1 1:abc\n") == 1);
  CHECK(error_line("1 qid:1 1:0.1 1:0.2\n") == 1);
  CHECK(error_line("1 qid: 1:0.1\n") == 1);
  CHECK(error_line("-1 qid:1 1:0.1\n") == 1);
  CHECK(error_line("1 qid:1 0.1\n") == 1);
  CHECK(error_line("# header\n1 qid:1 7:1e-3 3:2\n   \n") == 0);
}

TEST_CASE("parse_letor keeps query order and sorts features") {
  const auto ds = parse("0 qid:b 3:1 1:2\n1 qid:a 2:5\n2 qid:b 1:0.25\n");
  REQUIRE(ds.query_count() == 2);
  CHECK(ds.queries()[0].id == "b");
  CHECK(ds.queries()[1].id == "a");
  CHECK(ds.queries()[0].docs[0].features.front().first == 1);
  CHECK(ds.queries()[0].docs[0].feature(3) == 1.0);
  CHECK(ds.queries()[0].docs[0].feature(2) == 0.0);
  CHECK(ds.grade_levels() == 3);
  CHECK(ds.feature_ids() == std::vector<FeatureId>{1, 2, 3});
  CHECK(ds.has_feature(2));
  CHECK_FALSE(ds.has_feature(4));
  CHECK(ds.find("a") != nullptr);
  CHECK(ds.find("zz") == nullptr);
}

TEST_CASE("write then parse is a fixed point") {
  Rng rng(2);
  FixtureSpec spec;
  spec.queries = 6;
  spec.features = 7;
  spec.docs_per_query = 9;
  const auto ds = generate_fixture(spec, rng);
  std::ostringstream first;
  write_letor(first, ds);
  const auto back = parse(first.str());
  CHECK(back == ds);
  std::ostringstream second;
  write_letor(second, back);
  CHECK(second.str() == first.str());

  const auto odd = parse("3 qid:7 10:0.1 2:1e-7 5:-3.25 # note\n0 qid:8\n");
  std::ostringstream out;
  write_letor(out, odd);
  CHECK(parse(out.str()) == odd);
}

TEST_CASE("feature_ranker_rank examples") {
  const auto ds = parse("0 qid:1 1:0.9\n0 qid:1 1:0.1\n");
  CHECK(feature_ranker_rank(ds, "1", 1) == RankedList{0, 1});
  const auto ties = parse("0 qid:1 1:0.5\n0 qid:1 1:0.5\n0 qid:1 1:0.5\n");
  CHECK(feature_ranker_rank(ties, "1", 1) == RankedList{0, 1, 2});
  const auto three = parse("0 qid:1 1:0.2\n0 qid:1 1:0.8\n0 qid:1 1:0.5\n");
  CHECK(feature_ranker_rank(three, "1", 1) == RankedList{1, 2, 0});
  CHECK(feature_ranker_rank(three, "1", 9) == RankedList{0, 1, 2});
  CHECK_THROWS_AS(feature_ranker_rank(three, "2", 1), std::out_of_range);
}

TEST_CASE("feature_ranker_rank is a deterministic permutation") {
  Rng rng(3);
  const auto ds = generate_fixture(FixtureSpec{5, 6, 25, 3, 2}, rng);
  for (const auto& q : ds.queries()) {
    for (FeatureId f = 1; f <= 6; ++f) {
      const auto order = feature_ranker_rank(q, f);
      CHECK(order == feature_ranker_rank(ds, q.id, f));
      RankedList sorted = order;
      std::sort(sorted.begin(), sorted.end());
      RankedList expect(q.docs.size());
      std::iota(expect.begin(), expect.end(), DocId{0});
      CHECK(sorted == expect);
      for (std::size_t i = 1; i < order.size(); ++i) {
        CHECK(q.docs[order[i - 1]].feature(f) >= q.docs[order[i]].feature(f));
      }
    }
  }
}

TEST_CASE("check_rankers and ndcg_table") {
  const auto ds = graded_fixture();
  CHECK_NOTHROW(check_rankers(ds, std::vector<FeatureId>{1, 2}));
  CHECK_THROWS_AS(check_rankers(ds, std::vector<FeatureId>{1, 5}), std::invalid_argument);
  const auto table = ndcg_table(ds, std::vector<FeatureId>{1, 2});
  CHECK(table[0] == doctest::Approx(1.0));
  CHECK(table[1] < 0.9);
  for (const auto& q : ds.queries()) {
    std::vector<int> ranked;
    for (DocId d : feature_ranker_rank(q, 1)) ranked.push_back(q.docs[d].grade);
    CHECK(ndcg_at_k(ranked, q.grades(), 10) == doctest::Approx(1.0));
  }
}

TEST_CASE("estimate_ground_truth") {
  const auto ds = graded_fixture();
  Rng rng(4);
  SUBCASE("identical rankers split evenly") {
    const std::size_t m = 4000;
    const auto truth = estimate_ground_truth(ds, std::vector<FeatureId>{1, 1}, ClickModel::preset("navigational", 3), m, rng);
    REQUIRE(truth.preferences.has_value());
    const double sigma = std::sqrt(0.25 / m);
    CHECK(std::abs((*truth.preferences)(0, 1) - 0.5) < 3.0 * sigma);
  }
  SUBCASE("grade order beats the reverse order under the perfect model") {
    const auto truth = estimate_ground_truth(ds, std::vector<FeatureId>{1, 2}, ClickModel::preset("perfect", 3), 5000, rng);
    const auto& p = *truth.preferences;
    CHECK(p(0, 1) >= 0.95);
    CHECK(p(0, 1) + p(1, 0) == 1.0);
    CHECK(p(0, 0) == 0.5);
    CHECK(truth.ndcg[0] == doctest::Approx(1.0));
  }
  SUBCASE("zero samples skips the matrix") {
    const auto truth = estimate_ground_truth(ds, std::vector<FeatureId>{1, 2}, ClickModel::preset("perfect", 3), 0, rng);
    CHECK_FALSE(truth.preferences.has_value());
    CHECK(truth.ndcg.size() == 2);
  }
}

TEST_CASE("distortion_fraction on two rankers") {
  const auto ds = graded_fixture();
  Rng rng(5);
  const std::vector<FeatureId> rankers{1, 2};
  CHECK(distortion_fraction(ds, rankers, 0, ClickModel::preset("perfect", 3), 3000, rng) == 0.0);
  CHECK(distortion_fraction(ds, rankers, 1, ClickModel::preset("perfect", 3), 3000, rng) == 1.0);
}

TEST_CASE("generate_fixture") {
  Rng rng(6);
  const auto ds = generate_fixture(FixtureSpec{}, rng);
  CHECK(ds.query_count() == 50);
  CHECK(ds.document_count() == 1000);
  CHECK(ds.feature_ids().size() == 20);
  CHECK(ds.grade_levels() == 3);
  CHECK(ds.queries()[0].docs[3].comment == "docid=1-3");
  const std::vector<FeatureId> all = ds.feature_ids();
  const auto table = ndcg_table(ds, all);
  CHECK(std::max_element(table.begin(), table.end()) - table.begin() == 0);

  Rng again(6);
  CHECK(generate_fixture(FixtureSpec{}, again) == ds);
  CHECK_THROWS_AS(generate_fixture(FixtureSpec{5, 3, 5, 3, 4}, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_fixture(FixtureSpec{5, 3, 5, 1, 1}, rng), std::invalid_argument);
}
