// Command-line front end: run, sweep, distortion, fixture-gen.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mdb/harness.h"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> horizon;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--out", c.out, "output CSV (default: stdout)");
  cmd->add_option("--replicates", c.replicates, "replicates per policy")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", c.horizon, "rounds per replicate")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

mdb::ExperimentConfig resolve(const Common& c) {
  mdb::ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = mdb::load_config(c.config);
  } else {
    cfg.policies = mdb::default_policies();
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.replicates) cfg.replicates = *c.replicates;
  if (c.horizon) cfg.horizon = *c.horizon;
  if (c.threads) cfg.threads = *c.threads;
  if (!c.out.empty()) cfg.output = c.out;
  return cfg;
}

template <typename Write>
void emit(const std::string& path, Write write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out);
  if (!out.flush()) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-dueling bandit experiments"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, distortion_opts;
  std::string summary_path;
  auto* run = app.add_subcommand("run", "run every configured policy and log regret curves");
  add_common(run, run_opts);
  run->add_option("--summary", summary_path, "also write per-policy summary CSV here");

  auto* sweep = app.add_subcommand("sweep", "grid search over MDB's alpha and beta");
  add_common(sweep, sweep_opts);

  auto* distortion = app.add_subcommand("distortion", "measure multileaving distortion");
  add_common(distortion, distortion_opts);

  mdb::FixtureSpec spec;
  std::uint64_t fixture_seed = 1;
  std::string fixture_out;
  auto* fixture = app.add_subcommand("fixture-gen", "write a synthetic LETOR dataset");
  fixture->add_option("--seed", fixture_seed, "generator seed");
  fixture->add_option("--out", fixture_out, "output file (default: stdout)");
  fixture->add_option("--queries", spec.queries)->capture_default_str();
  fixture->add_option("--features", spec.features)->capture_default_str();
  fixture->add_option("--docs", spec.docs_per_query, "documents per query")->capture_default_str();
  fixture->add_option("--grades", spec.grade_levels, "relevance grade levels")->capture_default_str();
  fixture->add_option("--dominant", spec.dominant_feature, "feature that tracks the grade")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = resolve(run_opts);
      const auto result = mdb::run_experiment(cfg);
      emit(cfg.output, [&](std::ostream& o) { mdb::write_csv(o, result); });
      if (!summary_path.empty()) {
        emit(summary_path, [&](std::ostream& o) { mdb::write_summary_csv(o, result); });
      } else {
        mdb::write_summary_csv(std::cerr, result);
      }
    } else if (*sweep) {
      const auto cfg = resolve(sweep_opts);
      const auto result = mdb::sweep(cfg);
      emit(cfg.output, [&](std::ostream& o) { mdb::write_sweep_csv(o, result); });
      const auto& best = result.rows[result.best];
      std::cerr << "best: alpha=" << best.alpha << " beta=" << best.beta
                << " mean regret=" << best.summary.mean_final << '\n';
    } else if (*distortion) {
      const auto cfg = resolve(distortion_opts);
      const auto cells = mdb::distortion_report(cfg);
      emit(cfg.output, [&](std::ostream& o) { mdb::write_distortion_csv(o, cells); });
    } else if (*fixture) {
      mdb::Rng rng(fixture_seed);
      const auto ds = mdb::generate_fixture(spec, rng);
      emit(fixture_out, [&](std::ostream& o) { mdb::write_letor(o, ds); });
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
