// Copyright 2026 The FairSim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fairsim: command-line front end for the simulation library.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairsim/fairsim.hpp"

namespace {

using fairsim::Error;
using fairsim::ErrorKind;
namespace fs = std::filesystem;

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  fairsim::Require(in.good(), ErrorKind::kIo, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kIo, path + ": " + e.what());
  }
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  fairsim::Require(in.good(), ErrorKind::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteJsonFile(const fs::path& path, const nlohmann::json& j) {
  fairsim::csv::WriteFile(path.string(), j.dump(2) + "\n");
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// Applies "a.b=value" to a JSON object; value is parsed as JSON when it
// can be, otherwise taken as a string.
void ApplyOverride(nlohmann::json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::kInvalidConfig, "override must look like key=value: '" + assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    value = text;
  }
  nlohmann::json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<double> p_bias;
  std::optional<double> eta;
  std::optional<double> lambda;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config JSON (missing fields take defaults)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "Override a config field, e.g. --set online_rounds=500");
    cmd->add_option("--seed", seed, "Replace the seed list with a single seed");
    cmd->add_option("--p-bias", p_bias, "Replace the p_bias grid with a single value");
    cmd->add_option("--eta", eta, "Replace the learning-rate grid (and sweep eta) with a single value");
    cmd->add_option("--lambda", lambda, "Replace the lambda grid with a single value");
  }

  fairsim::ExperimentConfig Resolve() const {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : ReadJsonFile(config_path);
    if (!j.is_object()) throw Error(ErrorKind::kInvalidConfig, "config must be a JSON object");
    for (const auto& o : overrides) ApplyOverride(j, o);
    if (seed) j["seeds"] = {*seed};
    if (p_bias) j["p_bias_grid"] = {*p_bias};
    if (eta) {
      j["eta_grid"] = {*eta};
      j["sweep_eta"] = *eta;
    }
    if (lambda) j["lambda_grid"] = {*lambda};
    return fairsim::ConfigFromJson(j);
  }
};

fs::path ResolveOut(const std::string& flag, const std::string& default_name) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FAIRSIM_OUT_DIR"); env != nullptr && *env != '\0') {
    return default_name.empty() ? fs::path(env) : fs::path(env) / default_name;
  }
  throw Error(ErrorKind::kInvalidConfig, "no output given: pass --out or set FAIRSIM_OUT_DIR");
}

int RunHarness(fairsim::Experiment experiment, const ConfigOptions& opts, const std::string& out,
               std::size_t jobs) {
  const auto cfg = opts.Resolve();
  const auto results = fairsim::RunExperiment(experiment, cfg, jobs);
  const auto files = fairsim::WriteResults(ResolveOut(out, ""), experiment, cfg, results);
  std::cout << "wrote " << files.metrics.string() << " (" << results.size() << " cells, "
            << files.failed_cells << " failed)\n";
  if (files.failed_cells > 0) {
    std::cerr << "fairsim: warning: " << files.failed_cells << " cells failed; see "
              << files.failures.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairsim: bias absorption in online personalization, and fair regularization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(FAIRSIM_VERSION));

  // generate
  ConfigOptions gen_opts;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  std::optional<std::size_t> gen_n;
  auto* generate = app.add_subcommand("generate", "Write a synthetic candidate pool as CSV");
  generate->add_option("--config", gen_opts.config_path, "Config JSON; its 'gen' block is used")
      ->check(CLI::ExistingFile);
  generate->add_option("--set", gen_opts.overrides, "Override a config field, e.g. --set gen.p_group=0.3");
  generate->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  generate->add_option("--n", gen_n, "Pool size");
  generate->add_option("--out", gen_out, "Output CSV (default $FAIRSIM_OUT_DIR/pool.csv)");

  // label
  ConfigOptions label_opts;
  std::string label_pool, label_out, label_baseline_out;
  double label_p_bias = 0.0;
  std::uint64_t label_seed = 0;
  auto* label = app.add_subcommand("label", "Label a pool as a (possibly biased) user would");
  label->add_option("--pool", label_pool, "Pool CSV from 'generate'")->required()->check(CLI::ExistingFile);
  label->add_option("--config", label_opts.config_path, "Config JSON supplying user_weights")
      ->check(CLI::ExistingFile);
  label->add_option("--p-bias", label_p_bias, "Probability of labeling by protected attribute")
      ->capture_default_str();
  label->add_option("--seed", label_seed, "Bias-coin seed")->capture_default_str();
  label->add_option("--out", label_out, "Output CSV (default $FAIRSIM_OUT_DIR/labeled.csv)");
  label->add_option("--baseline-out", label_baseline_out, "Also write the qualified-pool baseline JSON");

  // warm
  ConfigOptions warm_opts;
  std::string warm_pool, warm_out, warm_reg_out;
  std::optional<std::size_t> warm_sample, warm_rounds;
  std::optional<double> warm_eta, warm_alpha;
  std::uint64_t warm_seed = 0;
  auto* warm = app.add_subcommand("warm", "Train the warm-start perceptron on a fair-labeled pool");
  warm->add_option("--pool", warm_pool, "Fair-labeled pool CSV from 'label'")->required()->check(CLI::ExistingFile);
  warm->add_option("--config", warm_opts.config_path, "Config JSON supplying warm-start defaults")
      ->check(CLI::ExistingFile);
  warm->add_option("--sample-size", warm_sample, "Subsample size (default 1000)");
  warm->add_option("--rounds", warm_rounds, "Perceptron rounds (default 1000)");
  warm->add_option("--eta", warm_eta, "Warm-start learning rate (default 0.5)");
  warm->add_option("--seed", warm_seed, "Sampling seed")->capture_default_str();
  warm->add_option("--out", warm_out, "Model JSON (default $FAIRSIM_OUT_DIR/warm.json)");
  warm->add_option("--regularizer-out", warm_reg_out, "Also fit the fairness regularizer on this pool");
  warm->add_option("--alpha-a", warm_alpha, "Ridge strength of the auxiliary fit (default 1e-3)");

  // online
  std::string online_model, online_pool, online_reg, online_out;
  std::size_t online_rounds = 1000, online_interval = 25;
  double online_eta = 0.01;
  std::optional<double> online_lambda;
  auto* online = app.add_subcommand("online", "Run the greedy online personalization loop");
  online->add_option("--model", online_model, "Initial model JSON")->required()->check(CLI::ExistingFile);
  online->add_option("--pool", online_pool, "Labeled pool CSV")->required()->check(CLI::ExistingFile);
  online->add_option("--rounds", online_rounds, "Online rounds")->capture_default_str();
  online->add_option("--eta", online_eta, "Learning rate")->capture_default_str();
  online->add_option("--lambda", online_lambda, "Fairness penalty strength (needs --regularizer)");
  online->add_option("--regularizer", online_reg, "Regularizer JSON from 'warm --regularizer-out'")
      ->check(CLI::ExistingFile);
  online->add_option("--snapshot-interval", online_interval, "Rounds between snapshots (0 = none)")
      ->capture_default_str();
  online->add_option("--out", online_out, "Output directory (default $FAIRSIM_OUT_DIR)");

  // eval / evolve / sweep
  struct HarnessCmd {
    ConfigOptions opts;
    std::string out;
    std::size_t jobs = 1;
  };
  HarnessCmd eval_cmd, evolve_cmd, sweep_cmd;
  auto add_harness = [&app](const char* name, const char* help, HarnessCmd& h) {
    auto* cmd = app.add_subcommand(name, help);
    h.opts.Attach(cmd);
    cmd->add_option("--out", h.out, "Output root (default $FAIRSIM_OUT_DIR)");
    cmd->add_option("--jobs", h.jobs, "Parallel cells")->capture_default_str()->check(CLI::PositiveNumber);
    return cmd;
  };
  auto* eval = add_harness("eval", "Final-model evaluation over the p_bias x eta grid", eval_cmd);
  auto* evolve = add_harness("evolve", "Skew evolution on the shown list every snapshot", evolve_cmd);
  auto* sweep = add_harness("sweep", "Fair-regularization sweep over the p_bias x lambda grid", sweep_cmd);

  // metrics
  std::string metrics_ranking, metrics_baseline, metrics_baseline_pool;
  ConfigOptions metrics_opts;
  std::vector<std::size_t> metrics_k;
  std::optional<std::size_t> metrics_k_max;
  int metrics_group = 1;
  auto* metrics = app.add_subcommand("metrics", "Recompute Skew@k, Precision@k and NDCS for a stored ranking");
  metrics->add_option("--ranking", metrics_ranking, "CSV in rank order with a 'protected' column")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--baseline", metrics_baseline, "Baseline JSON from 'label --baseline-out'")
      ->check(CLI::ExistingFile);
  metrics->add_option("--baseline-pool", metrics_baseline_pool, "Compute the baseline from this pool CSV")
      ->check(CLI::ExistingFile);
  metrics->add_option("--config", metrics_opts.config_path, "Config JSON supplying user_weights")
      ->check(CLI::ExistingFile);
  metrics->add_option("--k", metrics_k, "Cutoffs")->required();
  metrics->add_option("--k-max", metrics_k_max, "NDCS cutoff (default: ranking length)");
  metrics->add_option("--group", metrics_group, "Protected value to measure")->check(CLI::Range(0, 1));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fairsim: error: " << e.what() << " (see --help)\n";
    return 2;
  }

  try {
    if (*generate) {
      fairsim::GenConfig gen = gen_opts.Resolve().gen;
      gen.seed = gen_seed;
      if (gen_n) gen.n = *gen_n;
      const fs::path out = ResolveOut(gen_out, "pool.csv");
      EnsureParent(out);
      fairsim::csv::WriteFile(out.string(), fairsim::PoolToCsv(fairsim::GeneratePool(gen)));
      return 0;
    }
    if (*label) {
      const auto cfg = label_opts.Resolve();
      const auto pool = fairsim::PoolFromCsv(ReadTextFile(label_pool));
      const fairsim::UserConfig user{label_p_bias, cfg.user_weights, label_seed};
      const fs::path out = ResolveOut(label_out, "labeled.csv");
      EnsureParent(out);
      fairsim::csv::WriteFile(out.string(), fairsim::LabeledPoolToCsv(fairsim::LabelPool(pool, user)));
      if (!label_baseline_out.empty()) {
        EnsureParent(label_baseline_out);
        WriteJsonFile(label_baseline_out, fairsim::BaselineToJson(fairsim::ComputeBaseline(pool, user)));
      }
      return 0;
    }
    if (*warm) {
      const auto cfg = warm_opts.Resolve();
      const auto pool = fairsim::LabeledPoolFromCsv(ReadTextFile(warm_pool));
      const fairsim::WarmStartParams params{warm_sample.value_or(cfg.warm_sample_size),
                                            warm_rounds.value_or(cfg.warm_rounds),
                                            warm_eta.value_or(cfg.warm_eta), warm_seed};
      const fs::path out = ResolveOut(warm_out, "warm.json");
      EnsureParent(out);
      WriteJsonFile(out, fairsim::ModelToJson(fairsim::WarmStart(pool, params), 0));
      if (!warm_reg_out.empty()) {
        EnsureParent(warm_reg_out);
        WriteJsonFile(warm_reg_out, fairsim::RegularizerToJson(
                                        fairsim::FitAuxiliary(pool.points, warm_alpha.value_or(cfg.alpha_a))));
      }
      return 0;
    }
    if (*online) {
      const auto model = fairsim::ModelFromJson(ReadJsonFile(online_model));
      const auto pool = fairsim::LabeledPoolFromCsv(ReadTextFile(online_pool));
      std::optional<fairsim::FairRegularizer> reg;
      if (!online_reg.empty()) {
        reg = fairsim::RegularizerFromJson(ReadJsonFile(online_reg));
        if (online_lambda) reg = reg->WithLambda(*online_lambda);
      } else if (online_lambda && *online_lambda != 0.0) {
        throw Error(ErrorKind::kInvalidConfig, "--lambda needs --regularizer");
      }
      const auto result = fairsim::RunOnline(
          model, pool, fairsim::OnlineParams{online_rounds, online_eta, online_interval},
          reg ? &*reg : nullptr);
      const fs::path out = ResolveOut(online_out, "");
      fs::create_directories(out);
      WriteJsonFile(out / "model.json", fairsim::ModelToJson(result.model, online_rounds));
      fairsim::csv::WriteFile((out / "trace.csv").string(), fairsim::TraceToCsv(result.trace, pool));
      nlohmann::json snapshots = nlohmann::json::array();
      for (const auto& s : result.trace.snapshots) snapshots.push_back(fairsim::ModelToJson(s.model, s.round));
      WriteJsonFile(out / "snapshots.json", snapshots);
      return 0;
    }
    if (*eval) return RunHarness(fairsim::Experiment::kFinalEval, eval_cmd.opts, eval_cmd.out, eval_cmd.jobs);
    if (*evolve) {
      return RunHarness(fairsim::Experiment::kEvolution, evolve_cmd.opts, evolve_cmd.out, evolve_cmd.jobs);
    }
    if (*sweep) return RunHarness(fairsim::Experiment::kRegSweep, sweep_cmd.opts, sweep_cmd.out, sweep_cmd.jobs);
    if (*metrics) {
      const auto table = fairsim::csv::ReadFile(metrics_ranking);
      const int group_col = table.Column("protected");
      fairsim::Require(group_col >= 0, ErrorKind::kIo, "ranking CSV lacks a 'protected' column");
      const int label_col = table.Column("label");
      std::vector<int> groups, labels;
      for (const auto& row : table.rows) {
        groups.push_back(static_cast<int>(fairsim::csv::ParseInt(row[static_cast<std::size_t>(group_col)])));
        if (label_col >= 0) {
          labels.push_back(static_cast<int>(fairsim::csv::ParseInt(row[static_cast<std::size_t>(label_col)])));
        }
      }
      fairsim::Baseline baseline;
      if (!metrics_baseline.empty()) {
        baseline = fairsim::BaselineFromJson(ReadJsonFile(metrics_baseline));
      } else if (!metrics_baseline_pool.empty()) {
        const auto cfg = metrics_opts.Resolve();
        baseline = fairsim::ComputeBaseline(fairsim::PoolFromCsv(ReadTextFile(metrics_baseline_pool)),
                                            fairsim::UserConfig{0.0, cfg.user_weights, 0});
      } else {
        throw Error(ErrorKind::kInvalidConfig, "metrics needs --baseline or --baseline-pool");
      }
      std::cout << "k,skew,precision,count\n";
      for (std::size_t k : metrics_k) {
        std::cout << k << ',' << fairsim::csv::FormatDouble(fairsim::SkewAtK(groups, k, baseline, metrics_group))
                  << ','
                  << (labels.empty() ? std::string("") : fairsim::csv::FormatDouble(fairsim::PrecisionAtK(labels, k)))
                  << ',' << fairsim::CountInTop(groups, k, metrics_group) << '\n';
      }
      const std::size_t k_max = metrics_k_max.value_or(groups.size());
      std::cout << "ndcs@" << k_max << ','
                << fairsim::csv::FormatDouble(fairsim::Ndcs(groups, k_max, baseline, metrics_group)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "fairsim: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
