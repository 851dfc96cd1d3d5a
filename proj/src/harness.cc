#include "mdb/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mdb {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

std::string kind_name(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::kSynthetic: return "synthetic";
    case EnvironmentKind::kMatrix: return "matrix";
    case EnvironmentKind::kSurrogate: return "surrogate";
    case EnvironmentKind::kLtr: return "ltr";
  }
  return "synthetic";
}

EnvironmentKind parse_kind(const std::string& s) {
  if (s == "synthetic") return EnvironmentKind::kSynthetic;
  if (s == "matrix") return EnvironmentKind::kMatrix;
  if (s == "surrogate") return EnvironmentKind::kSurrogate;
  if (s == "ltr") return EnvironmentKind::kLtr;
  throw std::invalid_argument("unknown environment type '" + s + "'");
}

json policy_to_json(const PolicySpec& p) {
  json j = std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MdbConfig>) return {{"type", "mdb"}, {"alpha", c.alpha}, {"beta", c.beta}};
        if constexpr (std::is_same_v<T, RucbConfig>) return {{"type", "rucb"}, {"alpha", c.alpha}};
        if constexpr (std::is_same_v<T, RmedConfig>)
          return {{"type", "rmed1"}, {"coefficient", c.coefficient}, {"exponent", c.exponent}};
        if constexpr (std::is_same_v<T, MergeRucbConfig>)
          return {{"type", "merge_rucb"}, {"alpha", c.alpha}, {"batch_size", c.batch_size}};
        if constexpr (std::is_same_v<T, RandomConfig>) return {{"type", "random"}, {"subset_size", c.subset_size}};
      },
      p.config);
  j["label"] = p.label;
  return j;
}

PolicySpec policy_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  PolicySpec p;
  p.label = j.value("label", type);
  if (type == "mdb") {
    reject_unknown(j, {"type", "label", "alpha", "beta"}, "mdb policy");
    MdbConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    p.config = c;
  } else if (type == "rucb") {
    reject_unknown(j, {"type", "label", "alpha"}, "rucb policy");
    RucbConfig c;
    c.alpha = j.value("alpha", c.alpha);
    p.config = c;
  } else if (type == "rmed1") {
    reject_unknown(j, {"type", "label", "coefficient", "exponent"}, "rmed1 policy");
    RmedConfig c;
    c.coefficient = j.value("coefficient", c.coefficient);
    c.exponent = j.value("exponent", c.exponent);
    p.config = c;
  } else if (type == "merge_rucb") {
    reject_unknown(j, {"type", "label", "alpha", "batch_size"}, "merge_rucb policy");
    MergeRucbConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.batch_size = j.value("batch_size", c.batch_size);
    p.config = c;
  } else if (type == "random") {
    reject_unknown(j, {"type", "label", "subset_size"}, "random policy");
    RandomConfig c;
    c.subset_size = j.value("subset_size", c.subset_size);
    p.config = c;
  } else {
    throw std::invalid_argument("unknown policy type '" + type + "'");
  }
  return p;
}

PreferenceMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw std::invalid_argument("preference matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PreferenceMatrix(rows.size(), std::move(flat));
}

ClickModel click_model_for(const std::string& name, const LtrDataset& ds) {
  return ClickModel::preset(name, ds.grade_levels());
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("tail_fraction must be in (0, 1]");
  }
  if (checkpoints.interval == 0 && !(checkpoints.ratio > 1.0)) {
    throw std::invalid_argument("checkpoint ratio must be > 1");
  }
  std::set<std::string> labels;
  for (const auto& p : policies) {
    if (!labels.insert(p.label).second) {
      throw std::invalid_argument("duplicate policy label '" + p.label + "'");
    }
    std::visit([](const auto& c) { c.validate(); }, p.config);
  }
  const auto& env = environment;
  switch (env.kind) {
    case EnvironmentKind::kSynthetic:
      make_synthetic_dataset(env.name);
      break;
    case EnvironmentKind::kMatrix:
      if (env.matrix.empty() && env.path.empty()) {
        throw std::invalid_argument("matrix environment needs 'matrix' or 'path'");
      }
      break;
    case EnvironmentKind::kSurrogate:
      if (env.arms < 1) throw std::invalid_argument("surrogate needs at least one arm");
      if (!(env.margin > 0.0 && env.margin <= 0.5)) throw std::invalid_argument("surrogate margin must be in (0, 1/2]");
      break;
    case EnvironmentKind::kLtr:
      if (env.path.empty()) throw std::invalid_argument("ltr environment needs 'path'");
      break;
  }
  if (regret == RegretMode::kNdcg && env.kind != EnvironmentKind::kLtr) {
    throw std::invalid_argument("ndcg regret requires an ltr environment");
  }
  for (const auto& p : policies) {
    if (const auto* r = std::get_if<RandomConfig>(&p.config);
        r && env.kind == EnvironmentKind::kSynthetic &&
        r->subset_size > make_synthetic_dataset(env.name).size()) {
      throw std::invalid_argument("random subset_size exceeds the arm count");
    }
  }
}

void to_json(json& j, const ExperimentConfig& cfg) {
  const auto& e = cfg.environment;
  json env = {{"type", kind_name(e.kind)},
              {"name", e.name},
              {"path", e.path},
              {"matrix", e.matrix},
              {"arms", e.arms},
              {"margin", e.margin},
              {"click_model", e.click_model},
              {"rankers", e.rankers},
              {"ground_truth_samples", e.ground_truth_samples}};
  json policies = json::array();
  for (const auto& p : cfg.policies) policies.push_back(policy_to_json(p));
  j = json{{"environment", env},
           {"policies", policies},
           {"horizon", cfg.horizon},
           {"replicates", cfg.replicates},
           {"seed", cfg.seed},
           {"output", cfg.output},
           {"regret", cfg.regret == RegretMode::kNdcg ? "ndcg" : "condorcet"},
           {"checkpoints", {{"ratio", cfg.checkpoints.ratio}, {"interval", cfg.checkpoints.interval}}},
           {"tail_fraction", cfg.tail_fraction},
           {"threads", cfg.threads},
           {"distortion",
            {{"sizes", cfg.distortion.sizes},
             {"rounds", cfg.distortion.rounds},
             {"draws", cfg.distortion.draws},
             {"click_models", cfg.distortion.click_models}}},
           {"sweep", {{"alphas", cfg.sweep.alphas}, {"betas", cfg.sweep.betas}}}};
}

void from_json(const json& j, ExperimentConfig& cfg) {
  reject_unknown(j,
                 {"environment", "policies", "horizon", "replicates", "seed", "output", "regret",
                  "checkpoints", "tail_fraction", "threads", "distortion", "sweep"},
                 "config");
  cfg = ExperimentConfig{};
  if (j.contains("environment")) {
    const auto& e = j.at("environment");
    reject_unknown(e,
                   {"type", "name", "path", "matrix", "arms", "margin", "click_model", "rankers",
                    "ground_truth_samples"},
                   "environment");
    auto& env = cfg.environment;
    env.kind = parse_kind(e.value("type", std::string("synthetic")));
    env.name = e.value("name", env.name);
    env.path = e.value("path", env.path);
    env.matrix = e.value("matrix", env.matrix);
    env.arms = e.value("arms", env.arms);
    env.margin = e.value("margin", env.margin);
    env.click_model = e.value("click_model", env.click_model);
    env.rankers = e.value("rankers", env.rankers);
    env.ground_truth_samples = e.value("ground_truth_samples", env.ground_truth_samples);
  }
  if (j.contains("policies")) {
    for (const auto& p : j.at("policies")) cfg.policies.push_back(policy_from_json(p));
  } else {
    cfg.policies = default_policies();
  }
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.replicates = j.value("replicates", cfg.replicates);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output = j.value("output", cfg.output);
  const std::string regret = j.value("regret", std::string("condorcet"));
  if (regret == "condorcet") {
    cfg.regret = RegretMode::kCondorcet;
  } else if (regret == "ndcg") {
    cfg.regret = RegretMode::kNdcg;
  } else {
    throw std::invalid_argument("regret must be 'condorcet' or 'ndcg'");
  }
  if (j.contains("checkpoints")) {
    const auto& c = j.at("checkpoints");
    reject_unknown(c, {"ratio", "interval"}, "checkpoints");
    cfg.checkpoints.ratio = c.value("ratio", cfg.checkpoints.ratio);
    cfg.checkpoints.interval = c.value("interval", cfg.checkpoints.interval);
  }
  cfg.tail_fraction = j.value("tail_fraction", cfg.tail_fraction);
  cfg.threads = j.value("threads", cfg.threads);
  if (j.contains("distortion")) {
    const auto& d = j.at("distortion");
    reject_unknown(d, {"sizes", "rounds", "draws", "click_models"}, "distortion");
    cfg.distortion.sizes = d.value("sizes", cfg.distortion.sizes);
    cfg.distortion.rounds = d.value("rounds", cfg.distortion.rounds);
    cfg.distortion.draws = d.value("draws", cfg.distortion.draws);
    cfg.distortion.click_models = d.value("click_models", cfg.distortion.click_models);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    reject_unknown(s, {"alphas", "betas"}, "sweep");
    cfg.sweep.alphas = s.value("alphas", cfg.sweep.alphas);
    cfg.sweep.betas = s.value("betas", cfg.sweep.betas);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path.string() + "': " + e.what());
  }
  return j.get<ExperimentConfig>();
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config '" + path.string() + "'");
  out << json(cfg).dump(2) << '\n';
}

std::vector<PolicySpec> default_policies() {
  return {{"mdb", MdbConfig{}},
          {"rucb", RucbConfig{}},
          {"rmed1", RmedConfig{}},
          {"merge_rucb", MergeRucbConfig{}},
          {"random", RandomConfig{}}};
}

// ---------------------------------------------------------------------------

Problem build_problem(const ExperimentConfig& cfg) {
  const auto& e = cfg.environment;
  Problem pb;
  switch (e.kind) {
    case EnvironmentKind::kSynthetic: {
      auto env = std::make_shared<UtilityEnvironment>(make_synthetic_dataset(e.name));
      pb.regret = RegretModel::condorcet(env->preferences());
      pb.environment = std::move(env);
      pb.description = "synthetic:" + e.name;
      break;
    }
    case EnvironmentKind::kMatrix: {
      std::vector<std::vector<double>> rows = e.matrix;
      if (rows.empty()) {
        std::ifstream in(e.path);
        if (!in) throw std::runtime_error("cannot open matrix file '" + e.path + "'");
        json j;
        in >> j;
        rows = (j.is_object() ? j.at("matrix") : j).get<std::vector<std::vector<double>>>();
      }
      auto env = std::make_shared<MatrixEnvironment>(matrix_from_rows(rows));
      pb.regret = RegretModel::condorcet(env->preferences());
      pb.environment = std::move(env);
      pb.description = "matrix";
      break;
    }
    case EnvironmentKind::kSurrogate: {
      auto env = std::make_shared<MatrixEnvironment>(margin_matrix(e.arms, e.margin));
      pb.regret = RegretModel::condorcet(env->preferences());
      pb.environment = std::move(env);
      pb.description = "surrogate";
      break;
    }
    case EnvironmentKind::kLtr: {
      auto ds = std::make_shared<const LtrDataset>(load_letor(e.path));
      std::vector<FeatureId> rankers = e.rankers.empty() ? ds->feature_ids() : e.rankers;
      const ClickModel model = click_model_for(e.click_model, *ds);
      if (cfg.regret == RegretMode::kNdcg) {
        pb.regret = RegretModel::ndcg(ndcg_table(*ds, rankers));
      } else {
        Rng rng(stream_seed(cfg.seed, fnv1a("ground-truth")));
        auto truth = estimate_ground_truth(*ds, rankers, model, e.ground_truth_samples, rng);
        pb.regret = RegretModel::condorcet(std::move(*truth.preferences));
      }
      pb.environment = std::make_shared<LtrEnvironment>(ds, std::move(rankers), model);
      pb.description = "ltr:" + e.path;
      break;
    }
  }
  if (!pb.regret.exact()) {
    std::cerr << "warning: no Condorcet winner; regret is measured against arm "
              << pb.regret.best() << " and may be negative\n";
  }
  return pb;
}

std::vector<std::uint64_t> checkpoint_rounds(std::uint64_t horizon, const CheckpointSpec& spec) {
  std::vector<std::uint64_t> out;
  if (spec.interval > 0) {
    for (std::uint64_t t = spec.interval; t < horizon; t += spec.interval) out.push_back(t);
  } else {
    double next = 1.0;
    std::uint64_t t = 1;
    while (t < horizon) {
      out.push_back(t);
      next *= spec.ratio;
      t = std::max(t + 1, static_cast<std::uint64_t>(std::ceil(next)));
    }
  }
  out.push_back(horizon);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

ReplicateResult run_cell(const ExperimentConfig& cfg, const Problem& pb, const PolicySpec& spec,
                         std::size_t replicate, const std::vector<std::uint64_t>& checkpoints) {
  ReplicateResult res;
  res.policy = spec.label;
  res.replicate = replicate;
  const std::uint64_t rep_seed = cfg.seed ^ static_cast<std::uint64_t>(replicate);
  const std::uint64_t tag = fnv1a(spec.label);
  Rng env_rng(stream_seed(rep_seed, tag, 0));
  Rng policy_rng(stream_seed(rep_seed, tag, 1));

  const Environment& env = *pb.environment;
  const ArmId best = pb.regret.best();
  const auto tail_len = static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(cfg.horizon) * cfg.tail_fraction));
  const std::uint64_t tail_start = cfg.horizon - tail_len + 1;
  std::uint64_t tail_hits = 0;

  RegretTrace trace;
  std::size_t next = 0;
  try {
    auto policy = make_policy(spec.config, env.arms());
    for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
      const ArmSet set = policy->select(t, policy_rng);
      const auto outcomes = env.round(set, env_rng);
      policy->observe(outcomes);
      const bool keep = next < checkpoints.size() && checkpoints[next] == t;
      if (keep) ++next;
      trace.add(t, pb.regret(set), keep);
      if (t >= tail_start && set.size() == 1 && set[0] == best) ++tail_hits;
    }
  } catch (const std::exception& e) {
    res.valid = false;
    res.error = e.what();
  }
  res.trace = trace.points();
  res.final_regret = trace.cumulative();
  res.tail_best_rate = static_cast<double>(tail_hits) / static_cast<double>(tail_len);
  return res;
}

}  // namespace

const PolicySummary& RunResult::of(const std::string& policy) const {
  for (const auto& s : summary) {
    if (s.policy == policy) return s;
  }
  throw std::out_of_range("no policy '" + policy + "' in result");
}

std::vector<PolicySummary> summarize(const std::vector<ReplicateResult>& runs,
                                     const std::vector<PolicySpec>& order) {
  std::vector<PolicySummary> out;
  for (const auto& p : order) {
    PolicySummary s;
    s.policy = p.label;
    std::vector<double> finals;
    double tail = 0.0;
    for (const auto& r : runs) {
      if (r.policy != p.label || !r.valid) continue;
      finals.push_back(r.final_regret);
      tail += r.tail_best_rate;
    }
    s.replicates = finals.size();
    if (!finals.empty()) {
      const double n = static_cast<double>(finals.size());
      s.mean_final = std::accumulate(finals.begin(), finals.end(), 0.0) / n;
      s.mean_tail_best_rate = tail / n;
      if (finals.size() > 1) {
        double ss = 0.0;
        for (double f : finals) ss += (f - s.mean_final) * (f - s.mean_final);
        s.std_final = std::sqrt(ss / (n - 1.0));
      }
    }
    out.push_back(s);
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, build_problem(cfg));
}

RunResult run_experiment(const ExperimentConfig& cfg, const Problem& problem) {
  cfg.validate();
  const auto checkpoints = checkpoint_rounds(cfg.horizon, cfg.checkpoints);
  const std::size_t cells = cfg.policies.size() * cfg.replicates;

  RunResult result;
  result.best_arm = problem.regret.best();
  result.exact_regret = problem.regret.exact();
  result.runs.resize(cells);

  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      const auto& spec = cfg.policies[c / cfg.replicates];
      result.runs[c] = run_cell(cfg, problem, spec, c % cfg.replicates, checkpoints);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& r : result.runs) {
    if (!r.valid) {
      std::cerr << "warning: " << r.policy << " replicate " << r.replicate
                << " aborted (" << r.error << "); partial results flagged invalid\n";
    }
  }
  result.summary = summarize(result.runs, cfg.policies);
  return result;
}

// ---------------------------------------------------------------------------

SweepResult sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep.alphas.empty() || cfg.sweep.betas.empty()) {
    throw std::invalid_argument("sweep grid is empty");
  }
  ExperimentConfig point = cfg;
  point.policies.clear();
  for (double a : cfg.sweep.alphas) {
    for (double b : cfg.sweep.betas) {
      point.policies.push_back({"mdb(alpha=" + fmt_double(a) + ";beta=" + fmt_double(b) + ")",
                                MdbConfig{a, b}});
    }
  }
  point.validate();
  const RunResult run = run_experiment(point);
  SweepResult out;
  for (std::size_t i = 0; i < point.policies.size(); ++i) {
    const auto& c = std::get<MdbConfig>(point.policies[i].config);
    out.rows.push_back({c.alpha, c.beta, run.summary[i]});
    if (run.summary[i].mean_final < out.rows[out.best].summary.mean_final) out.best = i;
  }
  return out;
}

std::vector<DistortionCell> distortion_report(const ExperimentConfig& cfg) {
  const auto& e = cfg.environment;
  struct Row {
    std::string label;
    std::shared_ptr<const Environment> env;
  };
  std::vector<Row> rows;
  PreferenceMatrix truth;
  std::size_t arms = 0;

  if (e.kind == EnvironmentKind::kLtr) {
    auto ds = std::make_shared<const LtrDataset>(load_letor(e.path));
    const std::vector<FeatureId> rankers = e.rankers.empty() ? ds->feature_ids() : e.rankers;
    arms = rankers.size();
    for (std::size_t s : cfg.distortion.sizes) {
      if (s > arms) throw std::invalid_argument("distortion subset size exceeds ranker count");
    }
    Rng rng(stream_seed(cfg.seed, fnv1a("ground-truth")));
    truth = *estimate_ground_truth(*ds, rankers, click_model_for(e.click_model, *ds),
                                   std::max<std::size_t>(e.ground_truth_samples, 1), rng)
                 .preferences;
    for (const auto& m : cfg.distortion.click_models) {
      rows.push_back({m, std::make_shared<LtrEnvironment>(ds, rankers, click_model_for(m, *ds))});
    }
  } else {
    ExperimentConfig plain = cfg;
    plain.regret = RegretMode::kCondorcet;
    Problem pb = build_problem(plain);
    arms = pb.environment->arms();
    for (std::size_t s : cfg.distortion.sizes) {
      if (s > arms) throw std::invalid_argument("distortion subset size exceeds arm count");
    }
    if (const auto* m = dynamic_cast<const MatrixEnvironment*>(pb.environment.get())) {
      truth = m->preferences();
    } else {
      truth = dynamic_cast<const UtilityEnvironment&>(*pb.environment).preferences();
    }
    rows.push_back({"none", pb.environment});
  }

  std::vector<DistortionCell> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t size : cfg.distortion.sizes) {
      DistortionCell cell;
      cell.click_model = rows[r].label;
      cell.subset_size = size;
      for (std::size_t d = 0; d < cfg.distortion.draws; ++d) {
        Rng rng(stream_seed(cfg.seed, fnv1a(rows[r].label) ^ size, d));
        ArmSet subset;
        std::optional<ArmId> local;
        for (int attempt = 0; attempt < 1000 && !local; ++attempt) {
          subset = random_select(arms, size, rng);
          local = condorcet_winner(truth.restricted_to(subset));
        }
        if (!local) {
          throw std::runtime_error("no subset of size " + std::to_string(size) +
                                   " with a Condorcet winner found");
        }
        cell.fractions.push_back(
            distortion_fraction(*rows[r].env, subset, subset[*local], cfg.distortion.rounds, rng));
      }
      if (!cell.fractions.empty()) {
        cell.mean_fraction = std::accumulate(cell.fractions.begin(), cell.fractions.end(), 0.0) /
                             static_cast<double>(cell.fractions.size());
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const RunResult& result) {
  out << "policy,replicate,checkpoint_t,instantaneous_regret,cumulative_regret\n";
  for (const auto& r : result.runs) {
    for (const auto& p : r.trace) {
      out << r.policy << ',' << r.replicate << ',' << p.t << ',' << fmt_double(p.instantaneous)
          << ',' << fmt_double(p.cumulative) << '\n';
    }
  }
}

void emit_csv(const RunResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(out, result);
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

void write_summary_csv(std::ostream& out, const RunResult& result) {
  out << "policy,replicates,mean_final_regret,std_final_regret,tail_best_rate\n";
  for (const auto& s : result.summary) {
    out << s.policy << ',' << s.replicates << ',' << fmt_double(s.mean_final) << ','
        << fmt_double(s.std_final) << ',' << fmt_double(s.mean_tail_best_rate) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "alpha,beta,replicates,mean_final_regret,std_final_regret,best\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    out << fmt_double(r.alpha) << ',' << fmt_double(r.beta) << ',' << r.summary.replicates << ','
        << fmt_double(r.summary.mean_final) << ',' << fmt_double(r.summary.std_final) << ','
        << (i == result.best ? 1 : 0) << '\n';
  }
}

void write_distortion_csv(std::ostream& out, const std::vector<DistortionCell>& cells) {
  out << "click_model,subset_size,draws,mean_distortion\n";
  for (const auto& c : cells) {
    out << c.click_model << ',' << c.subset_size << ',' << c.fractions.size() << ','
        << fmt_double(c.mean_fraction) << '\n';
  }
}

}  // namespace mdb
