// Command-line workbench: run simulator experiments, ingest recorded
// rollouts, partition and score offline batches, emit plot-ready CSV.

#include "mupo/advantage.hpp"
#include "mupo/config.hpp"
#include "mupo/grouping.hpp"
#include "mupo/io/config_file.hpp"
#include "mupo/io/csv.hpp"
#include "mupo/io/rollout_io.hpp"
#include "mupo/metrics.hpp"
#include "mupo/reward.hpp"
#include "mupo/sim/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using mupo::MupoConfig;
using nlohmann::json;

struct ConfigCli {
  MupoConfig flags;  // values written by CLI11
  std::string config_path;
  std::string scope = "group_local";
  CLI::Option* n = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* g_min = nullptr;
  CLI::Option* beta = nullptr;
  CLI::Option* lambda_max = nullptr;
  CLI::Option* lambda_min = nullptr;
  CLI::Option* t_max = nullptr;
  CLI::Option* clip_eps = nullptr;
  CLI::Option* std_floor = nullptr;
  CLI::Option* scope_opt = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* sample_std = nullptr;
  CLI::Option* config_opt = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigCli& cli) {
  cli.config_opt = cmd->add_option("--config", cli.config_path,
                                   "Flat key=value config file (defaults < file < flags)");
  cli.n = cmd->add_option("--n", cli.flags.n, "Responses per example");
  cli.k = cmd->add_option("--k", cli.flags.k, "Number of groups");
  cli.g_min = cmd->add_option("--gmin", cli.flags.g_min, "Minimum group size");
  cli.beta = cmd->add_option("--beta", cli.flags.beta, "Load-balance exponent");
  cli.lambda_max = cmd->add_option("--lambda-max", cli.flags.lambda_max,
                                   "Initial diversity reward weight");
  cli.lambda_min = cmd->add_option("--lambda-min", cli.flags.lambda_min,
                                   "Final diversity reward weight");
  cli.t_max = cmd->add_option("--t-max", cli.flags.t_max, "Total steps for the annealing schedule");
  cli.clip_eps = cmd->add_option("--clip-eps", cli.flags.clip_eps, "Surrogate clip width");
  cli.std_floor = cmd->add_option("--std-floor", cli.flags.std_floor,
                                  "Smallest reward std treated as nonzero");
  cli.scope_opt = cmd->add_option("--scope", cli.scope, "Advantage scope: group_local or global");
  cli.seed = cmd->add_option("--seed", cli.flags.seed, "Run seed");
  cli.sample_std = cmd->add_flag("--sample-std", cli.flags.sample_std,
                                 "Use sample (n-1) instead of population std");
}

struct ResolvedConfig {
  MupoConfig cfg;
  std::map<std::string, std::string> sources;  // field -> default|config|flag
};

// defaults < config file < flags, with the winning layer recorded per field.
ResolvedConfig resolve_config(const ConfigCli& cli) {
  ResolvedConfig out;
  for (const char* field : {"N", "K", "G_min", "beta", "lambda_max", "lambda_min", "t_max",
                            "clip_eps", "std_floor", "advantage_scope", "seed", "sample_std"}) {
    out.sources[field] = "default";
  }
  if (cli.config_opt != nullptr && cli.config_opt->count() > 0) {
    for (const auto& [key, value] : mupo::io::parse_flat_config(cli.config_path)) {
      mupo::io::apply_config_entry(out.cfg, key, value);
      out.sources[key] = "config";
    }
  }
  auto take = [&](const CLI::Option* opt, const char* field, auto member) {
    if (opt != nullptr && opt->count() > 0) {
      out.cfg.*member = cli.flags.*member;
      out.sources[field] = "flag";
    }
  };
  take(cli.n, "N", &MupoConfig::n);
  take(cli.k, "K", &MupoConfig::k);
  take(cli.g_min, "G_min", &MupoConfig::g_min);
  take(cli.beta, "beta", &MupoConfig::beta);
  take(cli.lambda_max, "lambda_max", &MupoConfig::lambda_max);
  take(cli.lambda_min, "lambda_min", &MupoConfig::lambda_min);
  take(cli.t_max, "t_max", &MupoConfig::t_max);
  take(cli.clip_eps, "clip_eps", &MupoConfig::clip_eps);
  take(cli.std_floor, "std_floor", &MupoConfig::std_floor);
  take(cli.seed, "seed", &MupoConfig::seed);
  take(cli.sample_std, "sample_std", &MupoConfig::sample_std);
  if (cli.scope_opt != nullptr && cli.scope_opt->count() > 0) {
    out.cfg.advantage_scope = mupo::advantage_scope_from_string(cli.scope);
    out.sources["advantage_scope"] = "flag";
  }
  return out;
}

json config_to_json(const MupoConfig& cfg) {
  json doc;
  doc["N"] = cfg.n;
  doc["K"] = cfg.k;
  doc["G_min"] = cfg.g_min;
  doc["beta"] = cfg.beta;
  doc["lambda_max"] = cfg.lambda_max;
  doc["lambda_min"] = cfg.lambda_min;
  doc["t_max"] = cfg.t_max;
  doc["clip_eps"] = cfg.clip_eps;
  doc["std_floor"] = cfg.std_floor;
  doc["advantage_scope"] = mupo::to_string(cfg.advantage_scope);
  doc["seed"] = cfg.seed;
  doc["sample_std"] = cfg.sample_std;
  return doc;
}

void write_run_config(const std::string& out_dir, const std::string& command,
                      const ResolvedConfig& resolved, const json& extra) {
  json doc;
  doc["command"] = command;
  doc["config"] = config_to_json(resolved.cfg);
  doc["config_sources"] = resolved.sources;
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  mupo::io::write_file_atomic((std::filesystem::path(out_dir) / "run_config.json").string(),
                              doc.dump(2) + "\n");
}

mupo::sim::LandscapeConfig resolve_landscape(const std::string& name) {
  if (mupo::sim::is_canned_landscape(name)) return mupo::sim::canned_landscape(name);
  if (!std::filesystem::exists(name)) {
    throw std::invalid_argument("--landscape: '" + name +
                                "' is neither a canned name (easy, collapse-demo, "
                                "deceptive-modes) nor a readable file");
  }
  return mupo::sim::landscape_from_json(name);
}

// --- simulate ---------------------------------------------------------

struct SimulateArgs {
  ConfigCli config;
  std::string algo;
  std::string landscape;
  int steps = 0;
  std::string out_dir;
  double learning_rate = 0.1;
  CLI::Option* steps_opt = nullptr;
};

int run_simulate(SimulateArgs& args) {
  ResolvedConfig resolved = resolve_config(args.config);

  // Run length and schedule horizon: an explicit --t-max or config-file
  // t_max wins; otherwise --steps sets both; the default horizon fills in
  // for a missing --steps.
  const bool t_max_explicit = resolved.sources["t_max"] != "default";
  const bool steps_given = args.steps_opt->count() > 0;
  if (!t_max_explicit && steps_given) {
    resolved.cfg.t_max = args.steps;
    resolved.sources["t_max"] = "flag";
  }
  const int steps = steps_given ? args.steps : resolved.cfg.t_max;

  const mupo::sim::Algo algo = mupo::sim::algo_from_string(args.algo);
  const mupo::sim::LandscapeConfig land = resolve_landscape(args.landscape);
  const MupoConfig cfg = mupo::validate_config(resolved.cfg);
  resolved.cfg = cfg;

  mupo::sim::TrainOptions opts;
  opts.steps = steps;
  opts.learning_rate = args.learning_rate;
  opts.seed = cfg.seed;
  const mupo::sim::TrainLog log = mupo::sim::train(algo, cfg, land, opts);

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path out(args.out_dir);

  mupo::io::CsvWriter metrics({"step", "mean_r_acc", "mean_r_div", "lambda", "objective",
                               "validation_diversity", "expected_reward_exact"});
  for (const mupo::sim::TrainRecord& r : log.records) {
    metrics.add_row({std::to_string(r.step), mupo::io::format_double(r.mean_r_acc),
                     mupo::io::format_double(r.mean_r_div), mupo::io::format_double(r.lambda),
                     mupo::io::format_double(r.objective),
                     mupo::io::format_double(r.validation_diversity),
                     r.expected_reward_exact ? mupo::io::format_double(*r.expected_reward_exact)
                                             : std::string()});
  }
  metrics.write((out / "metrics.csv").string());

  std::vector<std::string> header{"sample"};
  for (int d = 0; d < log.final_validation_embeddings.cols(); ++d) {
    header.push_back("e" + std::to_string(d));
  }
  mupo::io::CsvWriter embeddings(header);
  for (int i = 0; i < log.final_validation_embeddings.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int d = 0; d < log.final_validation_embeddings.cols(); ++d) {
      row.push_back(mupo::io::format_double(log.final_validation_embeddings(i, d)));
    }
    embeddings.add_row(row);
  }
  embeddings.write((out / "embeddings_final.csv").string());

  json extra;
  extra["algo"] = args.algo;
  extra["landscape"] = args.landscape;
  extra["steps"] = steps;
  extra["learning_rate"] = args.learning_rate;
  write_run_config(args.out_dir, "simulate", resolved, extra);
  return 0;
}

// --- offline commands -------------------------------------------------

struct OfflineArgs {
  ConfigCli config;
  std::string in_path;
  std::string out_dir;
  std::string endpoint;
  std::string open_tag = "<think>";
  std::string close_tag = "</think>";
  std::vector<int> eval_ks{1, 2, 4};
  double offline_lambda = 0.0;
};

std::vector<mupo::io::IngestedExample> load_examples(const OfflineArgs& args,
                                                     bool need_embeddings) {
  mupo::io::IngestOptions opts;
  opts.open_tag = args.open_tag;
  opts.close_tag = args.close_tag;
  opts.require_diversity_inputs = need_embeddings;
  auto examples = mupo::io::ingest_rollouts(args.in_path, opts);
  if (need_embeddings) mupo::io::ensure_embeddings(examples, args.endpoint);
  return examples;
}

mupo::EmbeddingMatrix stack_embeddings(const mupo::io::IngestedExample& example) {
  const auto n = static_cast<Eigen::Index>(example.rollouts.size());
  const Eigen::Index dim = example.rollouts.front().embedding.size();
  mupo::EmbeddingMatrix rows(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (example.rollouts[static_cast<std::size_t>(i)].embedding.size() != dim) {
      throw std::runtime_error("example '" + example.example_id +
                               "': embeddings disagree in dimension");
    }
    rows.row(i) = example.rollouts[static_cast<std::size_t>(i)].embedding.transpose();
  }
  return rows;
}

// Group count feasible for this example's batch size.
MupoConfig per_example_config(const MupoConfig& cfg, int n_rollouts) {
  MupoConfig local = cfg;
  local.n = n_rollouts;
  local.k_reduced = false;
  return mupo::validate_config(local);
}

int run_metrics(OfflineArgs& args) {
  const ResolvedConfig resolved = resolve_config(args.config);
  auto examples = load_examples(args, true);

  mupo::SampleSet samples;
  for (const auto& example : examples) {
    mupo::ExampleSamples s;
    s.example_id = example.example_id;
    for (const auto& rollout : example.rollouts) s.correct.push_back(rollout.correct);
    samples.push_back(std::move(s));
  }

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path out(args.out_dir);

  mupo::io::CsvWriter accuracy({"k", "acc_at_k"});
  for (int k : args.eval_ks) {
    accuracy.add_row({std::to_string(k), mupo::io::format_double(mupo::acc_at_k(samples, k))});
  }
  accuracy.write((out / "accuracy.csv").string());

  mupo::io::CsvWriter diversity({"example_id", "n_responses", "pairwise_diversity"});
  for (const auto& example : examples) {
    std::string value;  // left empty for single-response examples
    if (example.rollouts.size() >= 2) {
      value = mupo::io::format_double(mupo::pairwise_diversity(stack_embeddings(example)));
    }
    diversity.add_row({example.example_id, std::to_string(example.rollouts.size()), value});
  }
  diversity.write((out / "diversity.csv").string());

  json extra;
  extra["in"] = args.in_path;
  extra["k_list"] = args.eval_ks;
  write_run_config(args.out_dir, "metrics", resolved, extra);
  return 0;
}

int run_partition(OfflineArgs& args) {
  const ResolvedConfig resolved = resolve_config(args.config);
  auto examples = load_examples(args, true);

  std::filesystem::create_directories(args.out_dir);
  mupo::io::CsvWriter partition_csv({"example_id", "rollout_id", "group"});
  for (const auto& example : examples) {
    try {
      const MupoConfig local =
          per_example_config(resolved.cfg, static_cast<int>(example.rollouts.size()));
      const mupo::GroupPartition partition =
          mupo::constrained_kmeans(stack_embeddings(example), local);
      for (const auto& rollout : example.rollouts) {
        partition_csv.add_row(
            {example.example_id, std::to_string(rollout.rollout_id),
             std::to_string(partition.assignments[static_cast<std::size_t>(rollout.rollout_id)])});
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("example '" + example.example_id + "': " + e.what());
    }
  }
  partition_csv.write((std::filesystem::path(args.out_dir) / "partition.csv").string());

  json extra;
  extra["in"] = args.in_path;
  write_run_config(args.out_dir, "partition", resolved, extra);
  return 0;
}

int run_advantages(OfflineArgs& args) {
  const ResolvedConfig resolved = resolve_config(args.config);
  const bool need_cluster = resolved.cfg.advantage_scope == mupo::AdvantageScope::kGroupLocal ||
                            args.offline_lambda > 0.0;
  auto examples = load_examples(args, need_cluster);

  std::filesystem::create_directories(args.out_dir);
  mupo::io::CsvWriter advantages_csv({"example_id", "rollout_id", "advantage"});
  for (const auto& example : examples) {
    try {
      const int n = static_cast<int>(example.rollouts.size());
      const MupoConfig local = per_example_config(resolved.cfg, n);

      mupo::GroupPartition partition;
      std::vector<double> r_div(static_cast<std::size_t>(n), 0.0);
      mupo::EmbeddingMatrix rows;
      if (need_cluster) {
        rows = stack_embeddings(example);
        partition = mupo::constrained_kmeans(rows, local);
        if (args.offline_lambda > 0.0) {
          for (int i = 0; i < n; ++i) {
            r_div[static_cast<std::size_t>(i)] = mupo::diversity_reward(i, partition, rows);
          }
        }
      }

      Eigen::VectorXd totals(n);
      for (int i = 0; i < n; ++i) {
        const auto& rollout = example.rollouts[static_cast<std::size_t>(i)];
        totals[i] = mupo::total_reward(rollout.correct, rollout.well_formed,
                                       r_div[static_cast<std::size_t>(i)], args.offline_lambda)
                        .total;
      }

      const mupo::AdvantageSet advantages =
          local.advantage_scope == mupo::AdvantageScope::kGroupLocal
              ? mupo::mupo_advantages(totals, partition, local.advantage_scope, local.std_floor,
                                      local.sample_std)
              : mupo::grpo_advantages(totals, local.std_floor, local.sample_std);

      for (int i = 0; i < n; ++i) {
        advantages_csv.add_row({example.example_id, std::to_string(i),
                                mupo::io::format_double(advantages.per_rollout[i])});
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("example '" + example.example_id + "': " + e.what());
    }
  }
  advantages_csv.write((std::filesystem::path(args.out_dir) / "advantages.csv").string());

  json extra;
  extra["in"] = args.in_path;
  extra["lambda"] = args.offline_lambda;
  write_run_config(args.out_dir, "advantages", resolved, extra);
  return 0;
}

void add_offline_flags(CLI::App* cmd, OfflineArgs& args, bool with_eval_ks) {
  cmd->add_option("--in", args.in_path, "Rollout file, one JSON record per line")->required();
  cmd->add_option("--out", args.out_dir, "Output directory")->required();
  cmd->add_option("--embed-endpoint", args.endpoint,
                  "Embedding service endpoint for records without stored embeddings")
      ->envname("MUPO_EMBED_ENDPOINT");
  cmd->add_option("--open-tag", args.open_tag, "Reasoning segment opening tag");
  cmd->add_option("--close-tag", args.close_tag, "Reasoning segment closing tag");
  if (with_eval_ks) {
    cmd->add_option("--k", args.eval_ks, "Comma-separated k values for acc@k")->delimiter(',');
  } else {
    add_config_flags(cmd, args.config);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-group policy optimization workbench"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Run a simulator experiment");
  simulate->add_option("--algo", sim_args.algo, "grpo or mupo")->required();
  simulate->add_option("--landscape", sim_args.landscape, "Canned landscape name or JSON file")
      ->required();
  sim_args.steps_opt = simulate->add_option("--steps", sim_args.steps, "Training steps");
  simulate->add_option("--lr", sim_args.learning_rate, "Learning rate for the tabular policy");
  simulate->add_option("--out", sim_args.out_dir, "Output directory")->required();
  add_config_flags(simulate, sim_args.config);

  OfflineArgs metrics_args;
  CLI::App* metrics = app.add_subcommand("metrics", "acc@k and per-example diversity");
  add_offline_flags(metrics, metrics_args, true);

  OfflineArgs partition_args;
  CLI::App* partition = app.add_subcommand("partition", "Cluster rollouts into groups");
  add_offline_flags(partition, partition_args, false);

  OfflineArgs advantages_args;
  CLI::App* advantages = app.add_subcommand("advantages", "Advantage replay on recorded rollouts");
  add_offline_flags(advantages, advantages_args, false);
  advantages->add_option("--lambda", advantages_args.offline_lambda,
                         "Fixed diversity weight for offline reward composition");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim_args);
    if (metrics->parsed()) return run_metrics(metrics_args);
    if (partition->parsed()) return run_partition(partition_args);
    return run_advantages(advantages_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
