// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mdb/harness.h"

using namespace mdb;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ExperimentConfig regret_config(std::uint64_t horizon, std::size_t replicates, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.policies = default_policies();
  cfg.horizon = horizon;
  cfg.replicates = replicates;
  cfg.seed = seed;
  return cfg;
}

std::vector<PolicySpec> only(std::initializer_list<std::string> labels) {
  std::vector<PolicySpec> out;
  for (const auto& p : default_policies()) {
    if (std::find(labels.begin(), labels.end(), p.label) != labels.end()) out.push_back(p);
  }
  return out;
}

Verdict synthetic_ordering() {
  Stopwatch clock;
  Verdict v{true, ""};
  for (const std::string name : {"1good5poor", "2good4poor"}) {
    auto cfg = regret_config(200'000, 10, 1001);
    cfg.environment.name = name;
    const auto run = run_experiment(cfg);
    const double mdb = run.of("mdb").mean_final;
    v.detail += name + ": mdb=" + fmt(mdb);
    for (const auto& s : run.summary) {
      if (s.policy == "mdb") continue;
      v.detail += " " + s.policy + "=" + fmt(s.mean_final);
      if (!(mdb < s.mean_final)) v.pass = false;
    }
    v.detail += "; ";
  }
  const double secs = clock.seconds();
  v.detail += "runtime " + fmt(secs, 4) + "s (limit 300s)";
  if (secs > 300.0) v.pass = false;
  return v;
}

Verdict scaling_advantage() {
  Stopwatch clock;
  auto cfg = regret_config(500'000, 10, 2002);
  cfg.environment.name = "1good50poor";
  cfg.policies = only({"mdb", "rmed1"});
  const auto run = run_experiment(cfg);
  const double mdb = run.of("mdb").mean_final;
  const double rmed = run.of("rmed1").mean_final;
  const double secs = clock.seconds();
  return {mdb <= rmed / 5.0 && secs <= 1800.0,
          "mdb=" + fmt(mdb) + " rmed1=" + fmt(rmed) + " ratio=" + fmt(rmed / mdb, 4) +
              " (need >= 5); runtime " + fmt(secs, 4) + "s (limit 1800s)"};
}

Verdict convergence() {
  auto cfg = regret_config(200'000, 10, 3003);
  cfg.environment.kind = EnvironmentKind::kMatrix;
  cfg.environment.matrix = PreferenceMatrix::from_utilities(make_synthetic_dataset("1good5poor")).rows();
  cfg.policies = only({"mdb"});
  cfg.tail_fraction = 0.1;
  const auto run = run_experiment(cfg);
  const double rate = run.of("mdb").mean_tail_best_rate;
  return {run.best_arm == 0 && rate >= 0.99, "singleton-winner share of final 10% = " + fmt(rate, 8)};
}

Verdict candidate_containment() {
  Rng rng(4004);
  std::uniform_int_distribution<std::size_t> arms(1, 20);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::uniform_int_distribution<std::uint64_t> round(2, 1'000'000);
  std::uniform_real_distribution<double> beta(1.0, 4.0);
  std::uniform_real_distribution<double> alpha(0.05, 2.0);
  std::size_t violations = 0, unequal_at_one = 0, strict = 0;
  for (int trial = 0; trial < 10'000; ++trial) {
    const std::size_t k = arms(rng);
    std::vector<std::uint64_t> w(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) w[i * k + j] = count(rng);
      }
    }
    const auto counts = WinCountMatrix::from_counts(k, std::move(w));
    const std::uint64_t t = round(rng);
    const double a = alpha(rng);
    const auto sets = candidate_sets(counts, t, MdbConfig{a, beta(rng)});
    if (!std::includes(sets.wide.begin(), sets.wide.end(), sets.narrow.begin(), sets.narrow.end())) {
      ++violations;
    }
    if (sets.wide.size() > sets.narrow.size()) ++strict;
    const auto flat = candidate_sets(counts, t, MdbConfig{a, 1.0});
    if (flat.narrow != flat.wide) ++unequal_at_one;
  }
  return {violations == 0 && unequal_at_one == 0,
          "E not in F: " + std::to_string(violations) + "/10000; E != F at beta=1: " +
              std::to_string(unequal_at_one) + "/10000; instances with E strictly inside F: " +
              std::to_string(strict)};
}

Big big_kl_half(const Big& p) {
  using boost::multiprecision::log;
  const Big half("0.5");
  Big out = 0;
  if (p > 0) out += p * log(p / half);
  if (p < 1) out += (1 - p) * log((1 - p) / half);
  return out;
}

Verdict formula_oracles() {
  Rng rng(5005);
  double worst_ucb = 0.0, worst_rmed = 0.0;
  {
    std::uniform_int_distribution<std::uint64_t> comparisons(1, 100'000);
    std::uniform_int_distribution<std::uint64_t> round(1, 10'000'000);
    std::uniform_real_distribution<double> width(1e-3, 4.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::uint64_t n = comparisons(rng);
      const std::uint64_t w = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
      const std::uint64_t t = round(rng);
      const double c = width(rng);
      const Big exact = Big(w) / Big(n) + boost::multiprecision::sqrt(Big(c) * boost::multiprecision::log(Big(t)) / Big(n));
      worst_ucb = std::max(worst_ucb, std::abs(ucb(w, n, t, c) - exact.convert_to<double>()));
    }
  }
  {
    std::uniform_int_distribution<std::size_t> arms(2, 6);
    std::uniform_int_distribution<std::uint64_t> count(0, 100);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t k = arms(rng);
      std::vector<std::uint64_t> cells(k * k, 0);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          if (i != j) cells[i * k + j] = count(rng);
        }
      }
      const auto w = WinCountMatrix::from_counts(k, cells);
      const ArmId i = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
      Big exact = 0;
      for (ArmId j = 0; j < k; ++j) {
        const std::uint64_t n = w.comparisons(i, j);
        if (j == i || n == 0) continue;
        const Big p = Big(w.wins(i, j)) / Big(n);
        if (p <= Big("0.5")) exact += Big(n) * big_kl_half(p);
      }
      worst_rmed = std::max(worst_rmed, std::abs(rmed_divergence(w, i) - exact.convert_to<double>()));
    }
  }
  double worst_mc = 0.0;
  {
    std::uniform_real_distribution<double> utility(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int pair = 0; pair < 20; ++pair) {
      const double ui = utility(rng), uj = utility(rng);
      const int samples = 1'000'000;
      int wins = 0;
      for (int s = 0; s < samples; ++s) wins += (ui + noise(rng) > uj + noise(rng)) ? 1 : 0;
      worst_mc = std::max(worst_mc, std::abs(static_cast<double>(wins) / samples - closed_form_win_prob(ui, uj)));
    }
  }
  return {worst_ucb <= 1e-12 && worst_rmed <= 1e-12 && worst_mc <= 0.005,
          "max |ucb - oracle| = " + fmt(worst_ucb, 3) + ", max |rmed - oracle| = " + fmt(worst_rmed, 3) +
              ", max |closed form - Monte Carlo| = " + fmt(worst_mc, 3)};
}

Verdict regret_oracle() {
  Rng rng(6006);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::size_t mismatches = 0, checked = 0;
  for (int m = 0; m < 100; ++m) {
    std::vector<std::vector<double>> upper(8, std::vector<double>(8, 0.5));
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = i + 1; j < 8; ++j) upper[i][j] = prob(rng);
    }
    const auto p = PreferenceMatrix::from_upper(8, upper);
    const ArmId star = std::uniform_int_distribution<std::size_t>(0, 7)(rng);
    for (unsigned mask = 1; mask < 256; ++mask) {
      ArmSet set;
      double sum = 0.0;
      for (ArmId j = 0; j < 8; ++j) {
        if (mask & (1u << j)) {
          set.push_back(j);
          sum += p(star, j);
        }
      }
      const double brute = sum / static_cast<double>(set.size()) - 0.5;
      ++checked;
      if (set_regret(p, star, set) != brute) ++mismatches;
    }
  }
  return {mismatches == 0 && checked == 25'500,
          std::to_string(mismatches) + " mismatches over " + std::to_string(checked) + " subsets"};
}

Verdict two_arm_sanity() {
  auto cfg = regret_config(50'000, 10, 7007);
  cfg.environment.kind = EnvironmentKind::kMatrix;
  cfg.environment.matrix = {{0.5, 0.9}, {0.1, 0.5}};
  const auto run = run_experiment(cfg);
  Verdict v{true, ""};
  for (const auto& s : run.summary) {
    double lowest = 1.0;
    for (const auto& r : run.runs) {
      if (r.policy == s.policy) lowest = std::min(lowest, r.tail_best_rate);
    }
    v.detail += s.policy + " mean=" + fmt(s.mean_tail_best_rate, 5) + " min=" + fmt(lowest, 5);
    if (s.policy == "random") {
      v.detail += " (not a learner, excluded); ";
      continue;
    }
    v.detail += "; ";
    if (lowest < 0.95) v.pass = false;
  }
  return v;
}

Verdict distortion_baseline() {
  ExperimentConfig cfg;
  cfg.policies = default_policies();
  cfg.seed = 8008;
  cfg.environment.kind = EnvironmentKind::kSurrogate;
  cfg.environment.margin = 0.2;
  cfg.distortion.sizes = {3, 10};
  cfg.distortion.rounds = 3000;
  cfg.distortion.draws = 30;
  const auto cells = distortion_report(cfg);
  Verdict v{cells.size() == 2, ""};
  for (const auto& c : cells) {
    v.detail += "size " + std::to_string(c.subset_size) + ": " + fmt(100.0 * c.mean_fraction, 4) + "%; ";
    if (c.mean_fraction > 0.05) v.pass = false;
  }
  return v;
}

Verdict click_fidelity() {
  Rng rng(9009);
  std::size_t perfect_errors = 0;
  const auto perfect = ClickModel::preset("perfect", 2);
  std::bernoulli_distribution relevant(0.4);
  for (int trial = 0; trial < 10'000; ++trial) {
    std::vector<int> grades(10);
    for (auto& g : grades) g = relevant(rng) ? 1 : 0;
    MultileavedList shown(10);
    for (DocId d = 0; d < 10; ++d) shown[d] = d;
    std::shuffle(shown.begin(), shown.end(), rng);
    ClickVector want;
    for (std::size_t p = 0; p < shown.size(); ++p) {
      if (grades[shown[p]] == 1) want.push_back(p);
    }
    if (simulate_clicks(shown, grades, perfect, rng) != want) ++perfect_errors;
  }
  double worst = 0.0;
  for (std::size_t levels : {2, 3, 5}) {
    const auto nav = ClickModel::preset("navigational", levels);
    for (std::size_t g = 0; g < levels; ++g) {
      const std::vector<int> grade{static_cast<int>(g)};
      const int trials = 100'000;
      int clicked = 0;
      for (int s = 0; s < trials; ++s) clicked += simulate_clicks(MultileavedList{0}, grade, nav, rng).empty() ? 0 : 1;
      worst = std::max(worst, std::abs(static_cast<double>(clicked) / trials - nav.click[g]));
    }
  }
  return {perfect_errors == 0 && worst <= 0.02,
          "perfect-model mismatches: " + std::to_string(perfect_errors) +
              "/10000; max navigational click-rate error = " + fmt(worst, 4)};
}

Verdict ndcg_oracle() {
  struct Fixture {
    std::vector<int> ranking, all;
    std::size_t k;
    double want;
  };
  const std::vector<Fixture> fixtures = {
      {{2, 0, 1}, {2, 1, 0}, 3, 0.96394043331665334},
      {{0, 0, 0, 1}, {1, 0, 0, 0}, 4, 0.43067655807339305},
      {{0, 0, 1}, {1, 0, 0}, 3, 0.5},
      {{3, 2, 3, 0, 1, 2}, {3, 3, 2, 2, 1, 0}, 6, 0.94881074856789842},
      {{4, 0, 0}, {4, 4, 0}, 3, 0.61314719276545841},
      {{0, 2, 1, 2}, {2, 2, 1, 0}, 2, 0.38685280723454159},
      {{1, 1, 0, 0, 1}, {1, 1, 1, 0, 0}, 5, 0.94690242952597442},
      {{0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 2}, {2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 10, 0.053602099459676643},
      {{1, 2, 0, 2, 1, 0, 0, 1}, {2, 2, 1, 1, 1, 0, 0, 0}, 10, 0.78693814492494408},
      {{2, 1}, {2, 1, 2, 0}, 2, 0.74209812851030561},
  };
  double worst = 0.0;
  for (const auto& f : fixtures) worst = std::max(worst, std::abs(ndcg_at_k(f.ranking, f.all, f.k) - f.want));

  Rng rng(10010);
  std::uniform_int_distribution<int> grade(0, 4);
  std::uniform_int_distribution<std::size_t> length(1, 30);
  double ideal_worst = 0.0;
  std::size_t zero_errors = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> all(length(rng));
    for (auto& g : all) g = grade(rng);
    std::vector<int> ideal = all;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    if (ideal.front() > 0) ideal_worst = std::max(ideal_worst, std::abs(ndcg_at_k(ideal, all, 10) - 1.0));
    const std::vector<int> zeros(all.size(), 0);
    if (ndcg_at_k(zeros, zeros, 10) != 0.0) ++zero_errors;
  }
  return {worst <= 1e-5 && ideal_worst <= 1e-12 && zero_errors == 0,
          "max fixture error = " + fmt(worst, 3) + ", max |ideal - 1| = " + fmt(ideal_worst, 3) +
              ", zero-IDCG failures = " + std::to_string(zero_errors)};
}

Verdict ltr_end_to_end() {
  Stopwatch clock;
  const auto path = std::filesystem::temp_directory_path() / "mdb-acceptance-fixture.txt";
  {
    Rng rng(11011);
    std::ofstream out(path);
    write_letor(out, generate_fixture(FixtureSpec{}, rng));
  }
  ExperimentConfig cfg;
  cfg.environment.kind = EnvironmentKind::kLtr;
  cfg.environment.path = path.string();
  cfg.environment.click_model = "navigational";
  cfg.regret = RegretMode::kNdcg;
  cfg.policies = only({"mdb", "rucb", "random"});
  cfg.horizon = 100'000;
  cfg.replicates = 5;
  cfg.seed = 11011;
  const auto run = run_experiment(cfg);
  std::filesystem::remove(path);
  const double mdb = run.of("mdb").mean_final;
  const double rucb = run.of("rucb").mean_final;
  const double random = run.of("random").mean_final;
  const double secs = clock.seconds();
  return {mdb < rucb && mdb < random && secs <= 1200.0,
          "ndcg regret mdb=" + fmt(mdb) + " rucb=" + fmt(rucb) + " random=" + fmt(random) + "; runtime " +
              fmt(secs, 4) + "s (limit 1200s)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"synthetic ordering", synthetic_ordering},
      {"scaling advantage", scaling_advantage},
      {"convergence to the winner", convergence},
      {"narrow set inside wide set", candidate_containment},
      {"formula oracles", formula_oracles},
      {"set regret oracle", regret_oracle},
      {"two-arm sanity", two_arm_sanity},
      {"distortion baseline", distortion_baseline},
      {"click model fidelity", click_fidelity},
      {"ndcg oracle", ndcg_oracle},
      {"ltr end to end", ltr_end_to_end},
  };
  std::set<std::size_t> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::strtoul(argv[a], nullptr, 10));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!wanted.empty() && !wanted.count(i + 1)) continue;
    Stopwatch clock;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "] " << (v.pass ? "PASS" : "FAIL")
              << " (" << fmt(clock.seconds(), 4) << "s) " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
