#ifndef PPOLAB_CONFIG_HPP_
#define PPOLAB_CONFIG_HPP_

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppolab/errors.hpp"
#include "ppolab/trainer.hpp"

namespace ppolab {

inline Variant variant_from_name(const std::string& name) {
  if (name == "ppo") return Variant::kPpo;
  if (name == "leaky") return Variant::kLeaky;
  if (name == "rb") return Variant::kRb;
  if (name == "dclamp") return Variant::kDclamp;
  throw ConfigError("unknown variant '" + name + "'");
}

// Per-variant coefficient defaults: clamp alpha 3 with beta = epsilon,
// leak 0.01, rollback 0.3 (0.02 in the humanoid-style preset).
inline void apply_variant_defaults(TrainConfig& cfg) {
  switch (cfg.surrogate.variant) {
    case Variant::kDclamp:
      cfg.surrogate.alpha = 3.0;
      cfg.surrogate.beta = cfg.surrogate.epsilon;
      break;
    case Variant::kLeaky:
      cfg.surrogate.alpha = 0.01;
      break;
    case Variant::kRb:
      cfg.surrogate.alpha = 0.3;
      break;
    case Variant::kPpo:
      break;
  }
}

inline nlohmann::json to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["env"] = env_name(cfg.env.id);
  j["horizon"] = cfg.env.horizon;
  j["variant"] = variant_name(cfg.surrogate.variant);
  j["epsilon"] = cfg.surrogate.epsilon;
  j["alpha"] = cfg.surrogate.alpha;
  j["beta"] = cfg.surrogate.beta;
  j["n_timesteps"] = cfg.n_timesteps;
  j["n_steps"] = cfg.n_steps;
  j["n_envs"] = cfg.n_envs;
  j["batch_size"] = cfg.batch_size;
  j["n_epochs"] = cfg.n_epochs;
  j["lr"] = cfg.lr;
  j["gamma"] = cfg.gamma;
  j["lam"] = cfg.lam;
  j["c_vf"] = cfg.c_vf;
  j["c_ent"] = cfg.c_ent;
  j["max_grad_norm"] = cfg.max_grad_norm;
  j["normalize_adv"] = cfg.normalize_adv;
  j["normalize_obs"] = cfg.normalize_obs;
  j["normalize_rew"] = cfg.normalize_rew;
  j["seed"] = cfg.seed;
  j["eval_every"] = cfg.eval_every;
  j["eval_episodes"] = cfg.eval_episodes;
  j["hidden"] = cfg.hidden;
  j["activation"] = activation_name(cfg.activation);
  j["log_std_init"] = cfg.log_std_init;
  j["ortho_init"] = cfg.ortho_init;
  return j;
}

// Applies the keys present in `j` onto `cfg`; unknown keys are rejected
// so typos in config files fail loudly.
inline void apply_json(const nlohmann::json& j, TrainConfig& cfg) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    try {
      if (key == "env") {
        EnvSpec named = env_spec_from_name(v.get<std::string>());
        // Switching environments picks up the new default horizon unless
        // this document pins one explicitly.
        if (named.id != cfg.env.id && !j.contains("horizon"))
          cfg.env.horizon = named.horizon;
        cfg.env.id = named.id;
      } else if (key == "horizon") {
        cfg.env.horizon = v.get<std::size_t>();
      } else if (key == "variant") {
        cfg.surrogate.variant = variant_from_name(v.get<std::string>());
      } else if (key == "epsilon") {
        cfg.surrogate.epsilon = v.get<double>();
      } else if (key == "alpha") {
        cfg.surrogate.alpha = v.get<double>();
      } else if (key == "beta") {
        cfg.surrogate.beta = v.get<double>();
      } else if (key == "n_timesteps") {
        cfg.n_timesteps = v.get<long long>();
      } else if (key == "n_steps") {
        cfg.n_steps = v.get<std::size_t>();
      } else if (key == "n_envs") {
        cfg.n_envs = v.get<std::size_t>();
      } else if (key == "batch_size") {
        cfg.batch_size = v.get<std::size_t>();
      } else if (key == "n_epochs") {
        cfg.n_epochs = v.get<std::size_t>();
      } else if (key == "lr") {
        cfg.lr = v.get<double>();
      } else if (key == "gamma") {
        cfg.gamma = v.get<double>();
      } else if (key == "lam") {
        cfg.lam = v.get<double>();
      } else if (key == "c_vf") {
        cfg.c_vf = v.get<double>();
      } else if (key == "c_ent") {
        cfg.c_ent = v.get<double>();
      } else if (key == "max_grad_norm") {
        cfg.max_grad_norm = v.get<double>();
      } else if (key == "normalize_adv") {
        cfg.normalize_adv = v.get<bool>();
      } else if (key == "normalize_obs") {
        cfg.normalize_obs = v.get<bool>();
      } else if (key == "normalize_rew") {
        cfg.normalize_rew = v.get<bool>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "eval_every") {
        cfg.eval_every = v.get<long long>();
      } else if (key == "eval_episodes") {
        cfg.eval_episodes = v.get<std::size_t>();
      } else if (key == "hidden") {
        cfg.hidden = v.get<std::vector<std::size_t>>();
      } else if (key == "activation") {
        std::string a = v.get<std::string>();
        if (a == "tanh")
          cfg.activation = Activation::kTanh;
        else if (a == "relu")
          cfg.activation = Activation::kRelu;
        else
          throw ConfigError("unknown activation '" + a + "'");
      } else if (key == "log_std_init") {
        cfg.log_std_init = v.get<double>();
      } else if (key == "ortho_init") {
        cfg.ortho_init = v.get<bool>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad value for config key '" + key + "': " + e.what());
    }
  }
}

// Desk-scale defaults for the two toy environments.
inline TrainConfig desk_config(EnvId id) {
  TrainConfig cfg;
  if (id == EnvId::kChainWalk) {
    cfg.env = EnvSpec{EnvId::kChainWalk, 64};
    cfg.n_steps = 256;
    cfg.n_envs = 4;
    cfg.batch_size = 256;
    cfg.n_epochs = 8;
    cfg.lr = 3e-3;
    cfg.gamma = 0.99;
    cfg.lam = 0.95;
    cfg.c_vf = 0.5;
    cfg.c_ent = 0.003;
    cfg.max_grad_norm = 0.5;
    cfg.normalize_obs = false;
    cfg.normalize_rew = false;
    cfg.hidden = {32, 32};
    cfg.surrogate = SurrogateConfig{Variant::kPpo, 0.1, 3.0, 0.1};
    cfg.n_timesteps = 100000;
    cfg.eval_every = 100;
    cfg.eval_episodes = 10;
    return cfg;
  }
  {
    cfg.env = EnvSpec{EnvId::kPointReach, 100};
    cfg.n_steps = 256;
    cfg.n_envs = 4;
    cfg.batch_size = 256;
    cfg.n_epochs = 8;
    cfg.lr = 3e-3;
    cfg.gamma = 0.99;
    cfg.lam = 0.95;
    cfg.c_vf = 0.5;
    cfg.c_ent = 0.0;
    cfg.max_grad_norm = 0.5;
    cfg.normalize_obs = true;
    cfg.normalize_rew = true;
    cfg.hidden = {32, 32};
    cfg.log_std_init = -1.0;
  }
  cfg.surrogate = SurrogateConfig{Variant::kPpo, 0.2, 3.0, 0.2};
  cfg.n_timesteps = 100000;
  cfg.eval_every = 100;
  cfg.eval_episodes = 10;
  return cfg;
}

// Hyperparameter presets named after the benchmark suites they were tuned
// on; they run on the toy stand-ins here (continuous ones map to the
// point environment). rb alpha is 0.02 for the humanoid preset, 0.3
// elsewhere.
inline TrainConfig preset_config(const std::string& name) {
  auto continuous = [](double clip) {
    TrainConfig cfg = desk_config(EnvId::kPointReach);
    cfg.surrogate.epsilon = clip;
    cfg.surrogate.beta = clip;
    cfg.normalize_obs = true;
    cfg.normalize_rew = true;
    cfg.n_envs = 1;
    cfg.n_steps = 512;
    cfg.hidden = {64, 64};
    cfg.activation = Activation::kTanh;
    cfg.log_std_init = -2.0;
    return cfg;
  };
  auto big_net = [](TrainConfig cfg) {
    cfg.hidden = {256, 256};
    cfg.activation = Activation::kRelu;
    cfg.log_std_init = -2.0;
    cfg.ortho_init = false;
    return cfg;
  };

  if (name == "chain") return desk_config(EnvId::kChainWalk);
  if (name == "point") return desk_config(EnvId::kPointReach);
  if (name == "ant") {
    TrainConfig cfg = continuous(0.1);
    cfg.n_timesteps = 10000000;
    cfg.batch_size = 32;
    cfg.gamma = 0.98;
    cfg.lr = 1.90609e-5;
    cfg.c_ent = 4.9646e-7;
    cfg.n_epochs = 10;
    cfg.lam = 0.8;
    cfg.max_grad_norm = 0.6;
    cfg.c_vf = 0.677239;
    return cfg;
  }
  if (name == "halfcheetah") {
    TrainConfig cfg = big_net(continuous(0.1));
    cfg.n_timesteps = 1000000;
    cfg.batch_size = 64;
    cfg.gamma = 0.98;
    cfg.lr = 2.0633e-5;
    cfg.c_ent = 4.01762e-4;
    cfg.n_epochs = 20;
    cfg.lam = 0.92;
    cfg.max_grad_norm = 0.8;
    cfg.c_vf = 0.58096;
    return cfg;
  }
  if (name == "hopper") {
    TrainConfig cfg = big_net(continuous(0.2));
    cfg.n_timesteps = 1000000;
    cfg.batch_size = 32;
    cfg.gamma = 0.999;
    cfg.lr = 9.80828e-5;
    cfg.c_ent = 2.29519e-3;
    cfg.n_epochs = 5;
    cfg.lam = 0.99;
    cfg.max_grad_norm = 0.7;
    cfg.c_vf = 0.835671;
    return cfg;
  }
  if (name == "humanoid") {
    TrainConfig cfg = big_net(continuous(0.3));
    cfg.n_timesteps = 10000000;
    cfg.batch_size = 256;
    cfg.gamma = 0.95;
    cfg.lr = 3.56987e-5;
    cfg.c_ent = 2.38306e-3;
    cfg.n_epochs = 5;
    cfg.lam = 0.9;
    cfg.max_grad_norm = 2.0;
    cfg.c_vf = 0.431892;
    return cfg;
  }
  if (name == "reacher") {
    TrainConfig cfg = continuous(0.3);
    cfg.n_timesteps = 1000000;
    cfg.batch_size = 32;
    cfg.gamma = 0.9;
    cfg.lr = 1.04019e-4;
    cfg.c_ent = 7.52585e-8;
    cfg.n_epochs = 5;
    cfg.lam = 1.0;
    cfg.max_grad_norm = 0.9;
    cfg.c_vf = 0.950368;
    return cfg;
  }
  if (name == "walker2d") {
    TrainConfig cfg = continuous(0.1);
    cfg.n_timesteps = 1000000;
    cfg.batch_size = 32;
    cfg.gamma = 0.99;
    cfg.lr = 5.05041e-5;
    cfg.c_ent = 5.85045e-4;
    cfg.n_epochs = 20;
    cfg.lam = 0.95;
    cfg.max_grad_norm = 1.0;
    cfg.c_vf = 0.871923;
    return cfg;
  }
  if (name == "swimmer") {
    TrainConfig cfg = continuous(0.2);
    cfg.n_envs = 4;
    cfg.n_timesteps = 1000000;
    cfg.n_steps = 1024;
    cfg.batch_size = 256;
    cfg.n_epochs = 10;
    cfg.gamma = 0.9999;
    cfg.lam = 0.98;
    cfg.c_ent = 0.0;
    cfg.c_vf = 0.5;
    cfg.max_grad_norm = 0.5;
    cfg.lr = 6e-4;
    cfg.normalize_obs = false;
    cfg.normalize_rew = false;
    return cfg;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

// rb alpha for a given preset name (the humanoid-style preset rolls back
// more gently).
inline double rb_alpha_for_preset(const std::string& preset) {
  return preset == "humanoid" ? 0.02 : 0.3;
}

// Reads a config file; manifest files are accepted too (their embedded
// config snapshot is used), so any run is reproducible from its manifest.
inline nlohmann::json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (j.contains("config") && j["config"].is_object()) return j["config"];
  return j;
}

}  // namespace ppolab

#endif  // PPOLAB_CONFIG_HPP_
