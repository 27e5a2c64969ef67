#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftest/config.hpp"
#include "shiftest/errors.hpp"

namespace shiftest {

namespace detail {

using json = nlohmann::json;

inline std::string joined(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline void reject_unknown_keys(const json& obj, const std::string& prefix,
                                std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) throw config_error("unknown config key '" + joined(prefix, key) + "'");
  }
}

template <class T>
T get_field(const json& obj, const std::string& prefix, const std::string& key) {
  if (!obj.contains(key))
    throw config_error("missing config key '" + joined(prefix, key) + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("config key '" + joined(prefix, key) + "' has the wrong type");
  }
}

template <class T>
void get_optional(const json& obj, const std::string& prefix, const std::string& key,
                  T& target) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("config key '" + joined(prefix, key) + "' has the wrong type");
  }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::get_field;
  using detail::get_optional;
  if (!j.is_object()) throw config_error("config root must be an object");
  detail::reject_unknown_keys(j, "",
                              {"theta_true", "sign_f1", "shape", "density", "noise", "kde",
                               "estimator", "n_steps", "n_reps", "seed", "record_points",
                               "clt_checks", "output"});

  ExperimentConfig cfg;
  cfg.theta_true = get_field<double>(j, "", "theta_true");
  cfg.n_steps = get_field<std::uint64_t>(j, "", "n_steps");
  cfg.n_reps = get_field<std::uint64_t>(j, "", "n_reps");
  cfg.seed = get_field<std::uint64_t>(j, "", "seed");
  get_optional(j, "", "sign_f1", cfg.sign_f1);
  get_optional(j, "", "record_points", cfg.record_points);
  get_optional(j, "", "clt_checks", cfg.clt_checks);

  if (j.contains("shape")) {
    const auto& s = j.at("shape");
    detail::reject_unknown_keys(s, "shape", {"family", "coefficients"});
    get_optional(s, "shape", "family", cfg.shape.family);
    get_optional(s, "shape", "coefficients", cfg.shape.coefficients);
  }
  if (j.contains("density")) {
    const auto& d = j.at("density");
    detail::reject_unknown_keys(d, "density", {"family", "amplitude"});
    get_optional(d, "density", "family", cfg.density.family);
    get_optional(d, "density", "amplitude", cfg.density.amplitude);
    if (cfg.density.family == "cosine_bump" && !d.contains("amplitude"))
      throw config_error("missing config key 'density.amplitude'");
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    detail::reject_unknown_keys(n, "noise", {"family", "sigma"});
    get_optional(n, "noise", "family", cfg.noise.family);
    get_optional(n, "noise", "sigma", cfg.noise.sigma);
  }
  if (j.contains("kde")) {
    const auto& k = j.at("kde");
    detail::reject_unknown_keys(
        k, "kde", {"alpha", "grid_size", "floor_eps", "mode", "kernel", "boundary"});
    get_optional(k, "kde", "alpha", cfg.kde.alpha);
    get_optional(k, "kde", "grid_size", cfg.kde.grid_size);
    get_optional(k, "kde", "floor_eps", cfg.kde.floor_eps);
    get_optional(k, "kde", "mode", cfg.kde.mode);
    get_optional(k, "kde", "kernel", cfg.kde.kernel);
    get_optional(k, "kde", "boundary", cfg.kde.boundary);
  }
  if (j.contains("estimator")) {
    const auto& e = j.at("estimator");
    detail::reject_unknown_keys(e, "estimator",
                                {"theta0", "warmup", "variant", "gain_scale"});
    get_optional(e, "estimator", "theta0", cfg.estimator.theta0);
    get_optional(e, "estimator", "warmup", cfg.estimator.warmup);
    get_optional(e, "estimator", "variant", cfg.estimator.variant);
    get_optional(e, "estimator", "gain_scale", cfg.estimator.gain_scale);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    detail::reject_unknown_keys(o, "output", {"n_trajectories"});
    get_optional(o, "output", "n_trajectories", cfg.output.n_trajectories);
  }
  return cfg;
}

// Canonical form: every field materialized (defaults included), keys in
// sorted order. Two configs that differ only in key order or omitted
// defaults canonicalize identically.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["theta_true"] = cfg.theta_true;
  j["sign_f1"] = cfg.sign_f1;
  j["shape"] = {{"family", cfg.shape.family}, {"coefficients", cfg.shape.coefficients}};
  j["density"] = {{"family", cfg.density.family}, {"amplitude", cfg.density.amplitude}};
  j["noise"] = {{"family", cfg.noise.family}, {"sigma", cfg.noise.sigma}};
  j["kde"] = {{"alpha", cfg.kde.alpha},
              {"grid_size", cfg.kde.grid_size},
              {"floor_eps", cfg.kde.floor_eps},
              {"mode", cfg.kde.mode},
              {"kernel", cfg.kde.kernel},
              {"boundary", cfg.kde.boundary}};
  j["estimator"] = {{"theta0", cfg.estimator.theta0},
                    {"warmup", cfg.estimator.warmup},
                    {"variant", cfg.estimator.variant},
                    {"gain_scale", cfg.estimator.gain_scale}};
  j["n_steps"] = cfg.n_steps;
  j["n_reps"] = cfg.n_reps;
  j["seed"] = cfg.seed;
  j["record_points"] = cfg.record_points;
  j["clt_checks"] = cfg.clt_checks;
  j["output"] = {{"n_trajectories", cfg.output.n_trajectories}};
  return j;
}

// FNV-1a over the canonical dump.
inline std::string config_digest(const ExperimentConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline ExperimentConfig load_config(const std::string& path, bool strict = false,
                                    std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig cfg = config_from_json(j);
  auto warns = cfg.validate(strict);
  if (warnings) *warnings = std::move(warns);
  return cfg;
}

inline void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write config file '" + path + "'");
  out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace shiftest
