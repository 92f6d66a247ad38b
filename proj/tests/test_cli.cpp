#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ppolab/cli.hpp"

using namespace ppolab;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "ppolab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("train smoke run writes the full artifact set") {
  TempDir tmp("ppolab_cli_train");
  int code = run({"train", "--variant", "dclamp", "--env", "chain", "--seed",
                  "0", "--steps", "2048", "--out", tmp.str() + "/run"});
  CHECK(code == cli::kExitOk);
  for (const char* f :
       {"manifest.json", "metrics.csv", "eval.csv", "episodes.csv",
        "stats.json", "ratio_hist_pos.csv", "ratio_hist_neg.csv",
        "checkpoint.txt"}) {
    INFO(f);
    CHECK(fs::exists(tmp.path / "run" / f));
  }
  std::string metrics = slurp(tmp.str() + "/run/metrics.csv");
  CHECK(metrics.rfind(std::string(kMetricsCsvHeader) + "\n", 0) == 0);
  std::string eval = slurp(tmp.str() + "/run/eval.csv");
  CHECK(eval.rfind(std::string(kEvalCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("invalid flag combinations exit with usage code") {
  TempDir tmp("ppolab_cli_bad");
  // dclamp requires alpha > 1
  CHECK(run({"train", "--variant", "dclamp", "--alpha", "0.5", "--steps",
             "512", "--out", tmp.str() + "/a"}) == cli::kExitUsage);
  // unknown variant rejected by flag validation
  CHECK(run({"train", "--variant", "spo"}) == cli::kExitUsage);
  // unknown subcommand
  CHECK(run({"frobnicate"}) == cli::kExitUsage);
  // bad epsilon
  CHECK(run({"train", "--epsilon", "1.5", "--steps", "512", "--out",
             tmp.str() + "/b"}) == cli::kExitUsage);
}

TEST_CASE("same command twice produces byte-identical CSVs") {
  TempDir tmp("ppolab_cli_det");
  std::vector<std::string> base{"train",  "--variant", "ppo",
                                "--env",  "chain",     "--seed",
                                "7",      "--steps",   "2048"};
  auto run_to = [&](const std::string& dir) {
    std::vector<std::string> args = base;
    args.push_back("--out");
    args.push_back(dir);
    REQUIRE(run(args) == cli::kExitOk);
  };
  run_to(tmp.str() + "/one");
  run_to(tmp.str() + "/two");
  CHECK(slurp(tmp.str() + "/one/metrics.csv") ==
        slurp(tmp.str() + "/two/metrics.csv"));
  CHECK(slurp(tmp.str() + "/one/eval.csv") ==
        slurp(tmp.str() + "/two/eval.csv"));
  CHECK(slurp(tmp.str() + "/one/checkpoint.txt") ==
        slurp(tmp.str() + "/two/checkpoint.txt"));
}

TEST_CASE("a run is reproducible from its manifest alone") {
  TempDir tmp("ppolab_cli_manifest");
  REQUIRE(run({"train", "--variant", "dclamp", "--env", "chain", "--seed",
               "3", "--steps", "1024", "--out", tmp.str() + "/orig"}) ==
          cli::kExitOk);
  REQUIRE(run({"train", "--config", tmp.str() + "/orig/manifest.json",
               "--out", tmp.str() + "/replay"}) == cli::kExitOk);
  CHECK(slurp(tmp.str() + "/orig/metrics.csv") ==
        slurp(tmp.str() + "/replay/metrics.csv"));
  CHECK(slurp(tmp.str() + "/orig/eval.csv") ==
        slurp(tmp.str() + "/replay/eval.csv"));
}

TEST_CASE("compare emits one row per variant and percent change vs ppo") {
  TempDir tmp("ppolab_cli_compare");
  int code = run({"compare", "--variants", "ppo,dclamp", "--seeds", "0,1",
                  "--env", "chain", "--steps", "1024", "--out",
                  tmp.str() + "/cmp"});
  CHECK(code == cli::kExitOk);
  std::string csv = slurp(tmp.str() + "/cmp/compare.csv");
  CHECK(csv.find("\nppo,2,0,") != std::string::npos);
  CHECK(csv.find("\ndclamp,2,0,") != std::string::npos);
  // Cell directories hold their own manifests.
  CHECK(fs::exists(tmp.path / "cmp" / "ppo-s0" / "manifest.json"));
  CHECK(fs::exists(tmp.path / "cmp" / "dclamp-s1" / "metrics.csv"));

  // Identical variant listed twice gives identical aggregation cells.
  TempDir tmp2("ppolab_cli_compare2");
  REQUIRE(run({"compare", "--variants", "ppo,ppo", "--seeds", "0", "--env",
               "chain", "--steps", "1024", "--out", tmp2.str() + "/cmp"}) ==
          cli::kExitOk);
  std::string csv2 = slurp(tmp2.str() + "/cmp/compare.csv");
  std::istringstream lines(csv2);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(row1 == row2);
}

TEST_CASE("sweep groups output per value and rejects empty value lists") {
  TempDir tmp("ppolab_cli_sweep");
  int code = run({"sweep", "--param", "beta", "--values", "0.05,0.2", "--env",
                  "chain", "--steps", "1024", "--out", tmp.str() + "/sw"});
  CHECK(code == cli::kExitOk);
  std::string summary = slurp(tmp.str() + "/sw/sweep_summary.csv");
  CHECK(summary.find("beta,0.05,") != std::string::npos);
  CHECK(summary.find("beta,0.2,") != std::string::npos);
  CHECK(fs::exists(tmp.path / "sw" / "beta-0.05-s0" / "metrics.csv"));

  CHECK(run({"sweep", "--param", "beta", "--env", "chain"}) ==
        cli::kExitUsage);  // --values required
  CHECK(run({"sweep", "--param", "delta", "--values", "0.1"}) ==
        cli::kExitUsage);
  // invalid beta value surfaces as usage error
  CHECK(run({"sweep", "--param", "beta", "--values", "1.7", "--env", "chain",
             "--steps", "512", "--out", tmp.str() + "/bad"}) ==
        cli::kExitNumeric);
}

TEST_CASE("lemma command reports pass rate and writes the JSON report") {
  TempDir tmp("ppolab_cli_lemma");
  int code = run({"lemma", "--instances", "5", "--seed", "0", "--out",
                  tmp.str() + "/lem"});
  CHECK(code == cli::kExitOk);
  auto j = nlohmann::json::parse(slurp(tmp.str() + "/lem/lemma_report.json"));
  CHECK(j["pass_rate"] == 1.0);
  CHECK(j["instances"].size() == 5);

  CHECK(run({"lemma", "--eta-grid", "0:0:1"}) == cli::kExitUsage);
  CHECK(run({"lemma", "--eta-grid", "1e-3:1e-6:10"}) == cli::kExitUsage);
  CHECK(run({"lemma", "--eta-grid", "oops"}) == cli::kExitUsage);
}

TEST_CASE("eta grid parser") {
  auto grid = cli::parse_eta_grid("1e-6:1e-1:10");
  REQUIRE(grid.size() == 6);
  CHECK(grid.front() == Catch::Approx(1e-6));
  CHECK(grid.back() == Catch::Approx(1e-1));
  CHECK_THROWS_AS(cli::parse_eta_grid("0:1:2"), ConfigError);
  CHECK_THROWS_AS(cli::parse_eta_grid("1:2:1"), ConfigError);
}

TEST_CASE("config file round-trip through to_json/apply_json") {
  TrainConfig cfg = desk_config(EnvId::kPointReach);
  cfg.surrogate.variant = Variant::kDclamp;
  cfg.surrogate.alpha = 4.5;
  cfg.seed = 99;
  cfg.hidden = {10, 7};
  cfg.activation = Activation::kRelu;
  nlohmann::json j = to_json(cfg);

  TrainConfig back = desk_config(EnvId::kChainWalk);
  apply_json(j, back);
  CHECK(back.env.id == EnvId::kPointReach);
  CHECK(back.env.horizon == cfg.env.horizon);
  CHECK(back.surrogate.variant == Variant::kDclamp);
  CHECK(back.surrogate.alpha == 4.5);
  CHECK(back.seed == 99);
  CHECK(back.hidden == std::vector<std::size_t>{10, 7});
  CHECK(back.activation == Activation::kRelu);

  nlohmann::json bad = {{"no_such_key", 1}};
  CHECK_THROWS_AS(apply_json(bad, back), ConfigError);
}

TEST_CASE("presets carry the documented hyperparameters") {
  TrainConfig hopper = preset_config("hopper");
  CHECK(hopper.gamma == 0.999);
  CHECK(hopper.lr == Catch::Approx(9.80828e-5));
  CHECK(hopper.surrogate.epsilon == 0.2);
  CHECK(hopper.n_epochs == 5);
  CHECK(hopper.lam == 0.99);
  CHECK(hopper.max_grad_norm == 0.7);
  CHECK(hopper.c_vf == Catch::Approx(0.835671));
  CHECK(hopper.hidden == std::vector<std::size_t>{256, 256});
  CHECK(hopper.activation == Activation::kRelu);
  CHECK(hopper.log_std_init == -2.0);
  CHECK(hopper.ortho_init == false);

  TrainConfig swimmer = preset_config("swimmer");
  CHECK(swimmer.n_envs == 4);
  CHECK(swimmer.n_steps == 1024);
  CHECK(swimmer.batch_size == 256);
  CHECK(swimmer.gamma == 0.9999);
  CHECK(swimmer.lr == Catch::Approx(6e-4));
  CHECK(swimmer.c_ent == 0.0);

  CHECK(rb_alpha_for_preset("humanoid") == 0.02);
  CHECK(rb_alpha_for_preset("ant") == 0.3);
  CHECK_THROWS_AS(preset_config("mujoco"), ConfigError);

  // dclamp defaults: alpha 3, beta = epsilon.
  TrainConfig cfg = preset_config("ant");
  cfg.surrogate.variant = Variant::kDclamp;
  apply_variant_defaults(cfg);
  CHECK(cfg.surrogate.alpha == 3.0);
  CHECK(cfg.surrogate.beta == cfg.surrogate.epsilon);
  CHECK(cfg.surrogate.epsilon == 0.1);
}
