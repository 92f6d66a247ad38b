#ifndef PPOLAB_CLI_HPP_
#define PPOLAB_CLI_HPP_

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppolab/checkpoint.hpp"
#include "ppolab/config.hpp"
#include "ppolab/diagnostics.hpp"
#include "ppolab/lemma.hpp"
#include "ppolab/trainer.hpp"

namespace ppolab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitGate = 3;

inline std::string output_root() {
  const char* root = std::getenv("PPOLAB_OUT_ROOT");
  return root && *root ? root : "runs";
}

inline std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Fresh directory under root; appends -2, -3, ... until unused.
inline std::string unique_dir(const std::string& root,
                              const std::string& base) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  fs::path candidate = fs::path(root) / base;
  int suffix = 1;
  while (fs::exists(candidate)) {
    ++suffix;
    candidate = fs::path(root) / (base + "-" + std::to_string(suffix));
  }
  fs::create_directories(candidate);
  return candidate.string();
}

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> variants;
  std::string out_dir;
  nlohmann::json extra;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "ppolab";
    j["command"] = command;
    j["created"] = timestamp_utc();
    j["out_dir"] = out_dir;
    j["seeds"] = seeds;
    j["variants"] = variants;
    j["config"] = config;
    if (!extra.is_null())
      for (auto it = extra.begin(); it != extra.end(); ++it)
        j[it.key()] = it.value();
    return j;
  }
};

inline void write_manifest(const RunManifest& m) {
  write_file(m.out_dir + "/manifest.json", m.to_json().dump(2) + "\n");
}

struct RunSummary {
  bool ok = false;
  std::string error;
  double last10_eval_mean = 0.0;
  double top10_episode_mean = 0.0;
  double final_eval_mean = 0.0;
  DirectionStats overall;
};

// Trains one configuration and writes the full artifact set into `dir`:
// manifest.json, metrics.csv, eval.csv, episodes.csv, stats.json,
// ratio_hist_{pos,neg}.csv and checkpoint.txt.
inline RunSummary run_training(const TrainConfig& cfg,
                               const std::string& dir) {
  std::filesystem::create_directories(dir);
  RunManifest manifest;
  manifest.command = "train";
  manifest.config = to_json(cfg);
  manifest.seeds = {cfg.seed};
  manifest.variants = {variant_name(cfg.surrogate.variant)};
  manifest.out_dir = dir;
  write_manifest(manifest);

  Trainer trainer(cfg);
  const TrainReport& report = trainer.train();

  write_file(dir + "/metrics.csv", metrics_csv(report.metrics));
  write_file(dir + "/eval.csv", eval_csv(report.evals));
  write_file(dir + "/episodes.csv", episodes_csv(report.episode_returns));
  export_direction_stats(report.overall, dir + "/stats.json", "json");
  export_histogram(report.ratio_hist_pos, dir + "/ratio_hist_pos.csv", "csv");
  export_histogram(report.ratio_hist_neg, dir + "/ratio_hist_neg.csv", "csv");
  save_checkpoint(trainer.params(), dir + "/checkpoint.txt");

  RunSummary s;
  s.ok = true;
  s.overall = report.overall;
  if (!report.evals.empty()) {
    s.final_eval_mean = report.evals.back().mean_return;
    std::size_t n = std::min<std::size_t>(10, report.evals.size());
    for (std::size_t i = report.evals.size() - n; i < report.evals.size(); ++i)
      s.last10_eval_mean += report.evals[i].mean_return;
    s.last10_eval_mean /= static_cast<double>(n);
  }
  std::vector<double> eps = report.episode_returns;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  std::size_t k = std::min<std::size_t>(10, eps.size());
  if (k > 0) {
    for (std::size_t i = 0; i < k; ++i) s.top10_episode_mean += eps[i];
    s.top10_episode_mean /= static_cast<double>(k);
  }
  return s;
}

// Shared flag set for the commands that launch training runs.
struct TrainFlags {
  std::string env = "chain";
  std::string preset;
  std::string config_path;
  std::string variant = "ppo";
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  long long steps = 0;
  std::string out;
  std::string run_name;

  bool env_given = false;
  bool variant_given = false;
  bool seed_given = false;
  bool alpha_given = false;
  bool beta_given = false;
  bool epsilon_given = false;
  bool steps_given = false;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--env", env, "environment: point|chain")
        ->check(CLI::IsMember({"point", "chain"}));
    cmd->add_option("--preset", preset,
                    "hyperparameter preset: chain|point|ant|halfcheetah|"
                    "hopper|humanoid|reacher|walker2d|swimmer");
    cmd->add_option("--config", config_path,
                    "JSON config file (a manifest.json works too)");
    cmd->add_option("--seed", seed, "base RNG seed");
    cmd->add_option("--alpha", alpha, "surrogate alpha override");
    cmd->add_option("--beta", beta, "surrogate beta override");
    cmd->add_option("--epsilon", epsilon, "clip range override");
    cmd->add_option("--steps", steps, "total environment steps override");
    cmd->add_option("--out", out, "output directory (default: generated)");
  }

  void capture_counts(CLI::App* cmd) {
    env_given = cmd->count("--env") > 0;
    if (cmd->get_option_no_throw("--variant"))
      variant_given = cmd->count("--variant") > 0;
    seed_given = cmd->count("--seed") > 0;
    alpha_given = cmd->count("--alpha") > 0;
    beta_given = cmd->count("--beta") > 0;
    epsilon_given = cmd->count("--epsilon") > 0;
    steps_given = cmd->count("--steps") > 0;
  }

  // Precedence: desk/preset base, then config file, then explicit flags.
  // Selecting a variant re-applies its coefficient defaults before any
  // --alpha/--beta overrides land on top.
  TrainConfig resolve() const {
    TrainConfig cfg;
    if (!preset.empty()) {
      cfg = preset_config(preset);
    } else {
      cfg = desk_config(env_spec_from_name(env).id);
    }
    if (!config_path.empty()) apply_json(load_config_json(config_path), cfg);
    if (env_given) cfg.env = env_spec_from_name(env);
    if (seed_given || config_path.empty()) cfg.seed = seed;
    if (steps_given) cfg.n_timesteps = steps;
    if (epsilon_given) cfg.surrogate.epsilon = epsilon;
    if (variant_given) {
      cfg.surrogate.variant = variant_from_name(variant);
      apply_variant_defaults(cfg);
      if (cfg.surrogate.variant == Variant::kRb && !preset.empty())
        cfg.surrogate.alpha = rb_alpha_for_preset(preset);
    } else if (config_path.empty()) {
      cfg.surrogate.variant = variant_from_name(variant);
    }
    if (alpha_given) cfg.surrogate.alpha = alpha;
    if (beta_given) cfg.surrogate.beta = beta;
    return cfg;
  }
};

inline int cmd_train(const TrainFlags& flags) {
  TrainConfig cfg = flags.resolve();
  cfg.validate();
  std::string dir =
      !flags.out.empty()
          ? (std::filesystem::create_directories(flags.out), flags.out)
          : unique_dir(output_root(),
                       !flags.run_name.empty()
                           ? flags.run_name
                           : std::string("train-") + env_name(cfg.env.id) +
                                 "-" + variant_name(cfg.surrogate.variant) +
                                 "-s" + std::to_string(cfg.seed));
  RunSummary s = run_training(cfg, dir);
  std::printf("run written to %s\n", dir.c_str());
  std::printf("last-10-eval mean return: %s\n",
              format_g12(s.last10_eval_mean).c_str());
  std::printf("top-10-episode mean return: %s\n",
              format_g12(s.top10_episode_mean).c_str());
  return kExitOk;
}

struct CompareCell {
  std::string variant;
  std::uint64_t seed = 0;
  RunSummary summary;
};

inline std::optional<double> pct_change(double value, double base) {
  if (base == 0.0) return std::nullopt;
  return 100.0 * (value - base) / std::abs(base);
}

// Runs every (variant, seed) cell, aggregates per-variant means and the
// merged direction statistics, and emits the comparison table. Cell
// failures are reported and skipped; the optional gate checks that the
// clamp variant's strict-wrong proportions stay below plain clipping's.
inline int cmd_compare(const TrainFlags& flags,
                       const std::vector<std::string>& variants,
                       const std::vector<std::uint64_t>& seeds, bool gate) {
  if (variants.empty() || seeds.empty()) {
    std::fprintf(stderr, "compare: need at least one variant and seed\n");
    return kExitUsage;
  }
  TrainConfig base = flags.resolve();
  std::string dir = !flags.out.empty()
                        ? (std::filesystem::create_directories(flags.out),
                           flags.out)
                        : unique_dir(output_root(),
                                     std::string("compare-") +
                                         env_name(base.env.id));

  RunManifest manifest;
  manifest.command = "compare";
  manifest.config = to_json(base);
  manifest.seeds = seeds;
  manifest.variants = variants;
  manifest.out_dir = dir;
  manifest.extra["gate"] = gate;
  write_manifest(manifest);

  std::vector<CompareCell> cells;
  for (const std::string& v : variants) {
    for (std::uint64_t seed : seeds) {
      CompareCell cell;
      cell.variant = v;
      cell.seed = seed;
      try {
        TrainConfig cfg = base;
        cfg.surrogate.variant = variant_from_name(v);
        apply_variant_defaults(cfg);
        if (cfg.surrogate.variant == Variant::kRb && !flags.preset.empty())
          cfg.surrogate.alpha = rb_alpha_for_preset(flags.preset);
        if (flags.alpha_given) cfg.surrogate.alpha = flags.alpha;
        if (flags.beta_given) cfg.surrogate.beta = flags.beta;
        cfg.seed = seed;
        cfg.validate();
        cell.summary = run_training(
            cfg, dir + "/" + v + "-s" + std::to_string(seed));
      } catch (const std::exception& e) {
        cell.summary.ok = false;
        cell.summary.error = e.what();
        std::fprintf(stderr, "cell %s seed %llu failed: %s\n", v.c_str(),
                     static_cast<unsigned long long>(seed), e.what());
      }
      cells.push_back(std::move(cell));
    }
  }

  struct Agg {
    std::string variant;
    double last10 = 0.0, top10 = 0.0;
    int n = 0, failed = 0;
    DirectionStats stats;
  };
  std::vector<Agg> aggs;
  for (const std::string& v : variants) {
    Agg a;
    a.variant = v;
    for (const CompareCell& c : cells) {
      if (c.variant != v) continue;
      if (!c.summary.ok) {
        a.failed += 1;
        continue;
      }
      a.last10 += c.summary.last10_eval_mean;
      a.top10 += c.summary.top10_episode_mean;
      a.stats.merge(c.summary.overall);
      a.n += 1;
    }
    if (a.n > 0) {
      a.last10 /= a.n;
      a.top10 /= a.n;
    }
    aggs.push_back(std::move(a));
  }

  const Agg* ppo = nullptr;
  for (const Agg& a : aggs)
    if (a.variant == "ppo" && a.n > 0) ppo = &a;

  auto opt_str = [](std::optional<double> v) {
    return v ? format_g12(*v) : std::string();
  };
  std::string csv =
      "variant,n_seeds,n_failed,last10_eval_mean,top10_episode_mean,"
      "pct_change_last10,pct_change_top10,frac_strict_pos,frac_strict_neg,"
      "mse_pos,mse_neg\n";
  std::printf("%-8s %14s %14s %10s %10s %12s %12s\n", "variant", "last10eval",
              "top10episode", "%ch last", "%ch top", "strict(A>0)",
              "strict(A<0)");
  for (const Agg& a : aggs) {
    std::optional<double> chl, cht;
    if (ppo && a.n > 0) {
      chl = pct_change(a.last10, ppo->last10);
      cht = pct_change(a.top10, ppo->top10);
    }
    csv += a.variant + "," + std::to_string(a.n) + "," +
           std::to_string(a.failed) + "," + format_g12(a.last10) + "," +
           format_g12(a.top10) + "," + opt_str(chl) + "," + opt_str(cht) +
           "," + opt_str(a.stats.frac_strict_pos()) + "," +
           opt_str(a.stats.frac_strict_neg()) + "," +
           opt_str(a.stats.mse_pos()) + "," + opt_str(a.stats.mse_neg()) +
           "\n";
    std::printf("%-8s %14.4f %14.4f %10s %10s %12s %12s\n", a.variant.c_str(),
                a.last10, a.top10, chl ? format_g12(*chl).c_str() : "-",
                cht ? format_g12(*cht).c_str() : "-",
                opt_str(a.stats.frac_strict_pos()).c_str(),
                opt_str(a.stats.frac_strict_neg()).c_str());
  }
  write_file(dir + "/compare.csv", csv);
  std::printf("comparison written to %s\n", dir.c_str());

  bool any_failed = false;
  for (const CompareCell& c : cells)
    if (!c.summary.ok) any_failed = true;

  if (gate) {
    const Agg* dclamp = nullptr;
    for (const Agg& a : aggs)
      if (a.variant == "dclamp" && a.n > 0) dclamp = &a;
    if (!ppo || !dclamp) {
      std::fprintf(stderr, "gate: need both ppo and dclamp cells\n");
      return kExitGate;
    }
    bool ok = dclamp->stats.frac_strict_pos() && ppo->stats.frac_strict_pos() &&
              *dclamp->stats.frac_strict_pos() < *ppo->stats.frac_strict_pos() &&
              dclamp->stats.frac_strict_neg() && ppo->stats.frac_strict_neg() &&
              *dclamp->stats.frac_strict_neg() < *ppo->stats.frac_strict_neg();
    if (!ok) {
      std::fprintf(stderr,
                   "gate: dclamp strict-wrong proportions not below ppo\n");
      return kExitGate;
    }
    std::printf("gate: dclamp strict-wrong proportions below ppo\n");
  }
  return any_failed ? kExitNumeric : kExitOk;
}

// One training run per (value, seed) of the swept coefficient; emits
// per-cell rows plus per-value seed means. The band-independent plain
// wrong-direction proportions make runs with different beta comparable.
inline int cmd_sweep(const TrainFlags& flags, const std::string& param,
                     const std::vector<double>& values,
                     const std::vector<std::uint64_t>& seeds) {
  if (param != "alpha" && param != "beta") {
    std::fprintf(stderr, "sweep: --param must be alpha or beta\n");
    return kExitUsage;
  }
  if (values.empty()) {
    std::fprintf(stderr, "sweep: --values must be non-empty\n");
    return kExitUsage;
  }
  if (seeds.empty()) {
    std::fprintf(stderr, "sweep: need at least one seed\n");
    return kExitUsage;
  }
  TrainConfig base = flags.resolve();
  base.surrogate.variant = Variant::kDclamp;
  apply_variant_defaults(base);
  if (flags.alpha_given) base.surrogate.alpha = flags.alpha;
  if (flags.beta_given) base.surrogate.beta = flags.beta;

  std::string dir =
      !flags.out.empty()
          ? (std::filesystem::create_directories(flags.out), flags.out)
          : unique_dir(output_root(), std::string("sweep-") + param + "-" +
                                          env_name(base.env.id));

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.config = to_json(base);
  manifest.seeds = seeds;
  manifest.variants = {"dclamp"};
  manifest.out_dir = dir;
  manifest.extra["param"] = param;
  manifest.extra["values"] = values;
  write_manifest(manifest);

  auto opt_str = [](std::optional<double> v) {
    return v ? format_g12(*v) : std::string();
  };

  std::string cell_csv =
      "param,value,seed,last10_eval_mean,top10_episode_mean,"
      "frac_wrong_pos,frac_wrong_neg,frac_strict_pos,frac_strict_neg,"
      "mse_pos,mse_neg\n";
  std::string summary_csv =
      "param,value,n_seeds,n_failed,last10_eval_mean,frac_wrong_pos,"
      "frac_wrong_neg,frac_strict_pos,frac_strict_neg,mse_pos,mse_neg\n";

  bool any_failed = false;
  for (double value : values) {
    DirectionStats merged;
    double last10 = 0.0;
    int ok_cells = 0, failed = 0;
    for (std::uint64_t seed : seeds) {
      try {
        TrainConfig cfg = base;
        if (param == "alpha")
          cfg.surrogate.alpha = value;
        else
          cfg.surrogate.beta = value;
        cfg.seed = seed;
        cfg.validate();
        RunSummary s = run_training(
            cfg, dir + "/" + param + "-" + format_g12(value) + "-s" +
                     std::to_string(seed));
        cell_csv += param + "," + format_g12(value) + "," +
                    std::to_string(seed) + "," +
                    format_g12(s.last10_eval_mean) + "," +
                    format_g12(s.top10_episode_mean) + "," +
                    opt_str(s.overall.frac_wrong_pos()) + "," +
                    opt_str(s.overall.frac_wrong_neg()) + "," +
                    opt_str(s.overall.frac_strict_pos()) + "," +
                    opt_str(s.overall.frac_strict_neg()) + "," +
                    opt_str(s.overall.mse_pos()) + "," +
                    opt_str(s.overall.mse_neg()) + "\n";
        merged.merge(s.overall);
        last10 += s.last10_eval_mean;
        ok_cells += 1;
      } catch (const std::exception& e) {
        failed += 1;
        any_failed = true;
        std::fprintf(stderr, "sweep cell %s=%s seed %llu failed: %s\n",
                     param.c_str(), format_g12(value).c_str(),
                     static_cast<unsigned long long>(seed), e.what());
      }
    }
    if (ok_cells > 0) last10 /= ok_cells;
    summary_csv += param + "," + format_g12(value) + "," +
                   std::to_string(ok_cells) + "," + std::to_string(failed) +
                   "," + format_g12(last10) + "," +
                   opt_str(merged.frac_wrong_pos()) + "," +
                   opt_str(merged.frac_wrong_neg()) + "," +
                   opt_str(merged.frac_strict_pos()) + "," +
                   opt_str(merged.frac_strict_neg()) + "," +
                   opt_str(merged.mse_pos()) + "," +
                   opt_str(merged.mse_neg()) + "\n";
  }
  write_file(dir + "/sweep.csv", cell_csv);
  write_file(dir + "/sweep_summary.csv", summary_csv);
  std::printf("sweep written to %s\n", dir.c_str());
  return any_failed ? kExitNumeric : kExitOk;
}

inline std::vector<double> parse_eta_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0, factor = 0.0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &factor) != 3)
    throw ConfigError("eta grid must be lo:hi:factor");
  if (!(lo > 0.0) || !(hi >= lo) || !(factor > 1.0))
    throw ConfigError("eta grid needs lo > 0, hi >= lo, factor > 1");
  std::vector<double> grid;
  for (double eta = lo; eta <= hi * (1.0 + 1e-12); eta *= factor)
    grid.push_back(eta);
  return grid;
}

inline int cmd_lemma(std::size_t instances, std::uint64_t seed,
                     const std::string& eta_grid_spec, std::string out) {
  std::vector<double> grid = parse_eta_grid(eta_grid_spec);
  std::string dir =
      !out.empty()
          ? (std::filesystem::create_directories(out), out)
          : unique_dir(output_root(), "lemma-s" + std::to_string(seed));

  RunManifest manifest;
  manifest.command = "lemma";
  manifest.seeds = {seed};
  manifest.out_dir = dir;
  manifest.extra["instances"] = instances;
  manifest.extra["eta_grid"] = grid;
  write_manifest(manifest);

  LemmaReport report = run_lemma_sweep(instances, seed, grid);
  write_file(dir + "/lemma_report.json", to_json(report).dump(2) + "\n");
  std::printf("instances: %zu\n", report.instances.size());
  std::printf("pass rate at smallest eta: %.1f%%\n", 100.0 * report.pass_rate);
  std::printf("phi'(0) sign rate: %.1f%%\n", 100.0 * report.phi_sign_rate);
  std::printf("report written to %s/lemma_report.json\n", dir.c_str());
  return report.pass_rate == 1.0 ? kExitOk : kExitGate;
}

inline std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    seeds.push_back(std::stoull(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return seeds;
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "ppolab: clipped-surrogate policy optimization laboratory (ppo, "
      "leaky, rb, dclamp)"};
  app.require_subcommand(1);

  TrainFlags train_flags;
  auto* train = app.add_subcommand("train", "run one training configuration");
  train->add_option("--variant", train_flags.variant,
                    "surrogate variant: ppo|leaky|rb|dclamp")
      ->check(CLI::IsMember({"ppo", "leaky", "rb", "dclamp"}));
  train_flags.add_common(train);
  train->add_option("--run-name", train_flags.run_name,
                    "name of the run directory");

  TrainFlags compare_flags;
  std::string compare_variants = "ppo,dclamp";
  std::string compare_seeds = "0";
  bool compare_gate = false;
  auto* compare = app.add_subcommand(
      "compare", "train several variants across seeds and tabulate");
  compare->add_option("--variants", compare_variants,
                      "comma-separated variant list");
  compare->add_option("--seeds", compare_seeds, "comma-separated seed list");
  compare->add_flag("--gate", compare_gate,
                    "fail (exit 3) unless dclamp's strict-wrong proportions "
                    "are below ppo's");
  compare_flags.add_common(compare);

  TrainFlags sweep_flags;
  std::string sweep_param;
  std::string sweep_values;
  std::string sweep_seeds = "0";
  auto* sweep = app.add_subcommand(
      "sweep", "ablation over a dclamp coefficient (alpha or beta)");
  sweep->add_option("--param", sweep_param, "swept coefficient: alpha|beta")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated value list")
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "comma-separated seed list");
  sweep_flags.add_common(sweep);

  std::size_t lemma_instances = 200;
  std::uint64_t lemma_seed = 0;
  std::string lemma_grid = "1e-6:1e-1:10";
  std::string lemma_out;
  auto* lemma = app.add_subcommand(
      "lemma", "one-step ratio-contraction certification harness");
  lemma->add_option("--instances", lemma_instances, "number of instances");
  lemma->add_option("--seed", lemma_seed, "RNG seed");
  lemma->add_option("--eta-grid", lemma_grid, "geometric grid lo:hi:factor");
  lemma->add_option("--out", lemma_out, "output directory");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) {
      train_flags.capture_counts(train);
      return cmd_train(train_flags);
    }
    if (compare->parsed()) {
      compare_flags.capture_counts(compare);
      std::vector<std::string> variants;
      std::size_t pos = 0;
      while (pos < compare_variants.size()) {
        std::size_t comma = compare_variants.find(',', pos);
        if (comma == std::string::npos) comma = compare_variants.size();
        variants.push_back(compare_variants.substr(pos, comma - pos));
        pos = comma + 1;
      }
      return cmd_compare(compare_flags, variants,
                         parse_seed_list(compare_seeds), compare_gate);
    }
    if (sweep->parsed()) {
      sweep_flags.capture_counts(sweep);
      std::vector<double> values;
      std::size_t pos = 0;
      while (pos < sweep_values.size()) {
        std::size_t comma = sweep_values.find(',', pos);
        if (comma == std::string::npos) comma = sweep_values.size();
        values.push_back(std::stod(sweep_values.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      return cmd_sweep(sweep_flags, sweep_param, values,
                       parse_seed_list(sweep_seeds));
    }
    if (lemma->parsed())
      return cmd_lemma(lemma_instances, lemma_seed, lemma_grid, lemma_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace ppolab::cli

#endif  // PPOLAB_CLI_HPP_
