#include "stratcv/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "stratcv/csv.hpp"
#include "stratcv/error.hpp"

namespace stratcv {

namespace {

using Json = nlohmann::ordered_json;

std::size_t scale_count(std::size_t value, double scale, std::size_t floor) {
  const auto scaled = static_cast<std::size_t>(std::llround(static_cast<double>(value) * scale));
  return std::max(scaled, floor);
}

template <std::size_t N>
void read_array(const Json& v, std::string_view key, std::array<double, N>& out) {
  if (!v.is_array() || v.size() != N) {
    throw InvalidArgument("config key '" + std::string(key) + "' must be an array of " +
                          std::to_string(N) + " numbers");
  }
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) {
      throw InvalidArgument("config key '" + std::string(key) + "' must hold numbers");
    }
    out[i] = v[i].get<double>();
  }
}

std::size_t read_count(const Json& v, std::string_view key) {
  if (!v.is_number_unsigned()) {
    throw InvalidArgument("config key '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double read_real(const Json& v, std::string_view key) {
  if (!v.is_number()) throw InvalidArgument("config key '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_h < 1) throw InvalidArgument("n_h must be >= 1");
  if (k < 2) throw InvalidArgument("k must be >= 2");
  if (n_gen < 1) throw InvalidArgument("n_gen must be >= 1");
  if (n_dup > n_gen * (n_h - 1)) {
    throw InvalidArgument("n_dup exceeds n_gen * (n_h - 1)");
  }
  for (double l : eigenvalues) {
    if (!(l > 0.0)) throw InvalidArgument("eigenvalues must be positive");
  }
  for (double m : mu) {
    if (!std::isfinite(m)) throw InvalidArgument("mu must be finite");
  }
  for (double a : outcome.a) {
    if (!std::isfinite(a)) throw InvalidArgument("outcome_params must be finite");
  }
  train.validate();
  if (!(scale > 0.0)) throw InvalidArgument("scale must be positive");
  if (n_sims < 1) throw InvalidArgument("n_sims must be >= 1");
  if (n_datasets < 2) throw InvalidArgument("n_datasets must be >= 2");
  if (n_mc < 1) throw InvalidArgument("n_mc must be >= 1");
  if (fig2_covariate < 1 || fig2_covariate > kNumCovariates) {
    throw InvalidArgument("fig2_covariate must be in 1..10");
  }
}

ExperimentConfig ExperimentConfig::scaled() const {
  ExperimentConfig c = *this;
  c.n_gen = scale_count(n_gen, scale, 1);
  c.n_dup = scale_count(n_dup, scale, 0);
  c.train.rounds = scale_count(train.rounds, scale, 1);
  c.n_sims = scale_count(n_sims, scale, 1);
  c.n_datasets = scale_count(n_datasets, scale, 2);
  c.n_mc = scale_count(n_mc, scale, 1);
  c.scale = 1.0;
  return c;
}

ExperimentConfig parse_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "n_gen") c.n_gen = read_count(v, key);
    else if (key == "n_dup") c.n_dup = read_count(v, key);
    else if (key == "n_h") c.n_h = read_count(v, key);
    else if (key == "k") c.k = read_count(v, key);
    else if (key == "mu") read_array(v, key, c.mu);
    else if (key == "eigenvalues") read_array(v, key, c.eigenvalues);
    else if (key == "outcome_params") read_array(v, key, c.outcome.a);
    else if (key == "rounds") c.train.rounds = read_count(v, key);
    else if (key == "max_depth") c.train.max_depth = read_count(v, key);
    else if (key == "eta") c.train.eta = read_real(v, key);
    else if (key == "reg_lambda") c.train.reg_lambda = read_real(v, key);
    else if (key == "gamma") c.train.gamma = read_real(v, key);
    else if (key == "min_child_weight") c.train.min_child_weight = read_real(v, key);
    else if (key == "base_score") c.train.base_score = read_real(v, key);
    else if (key == "master_seed") c.master_seed = read_count(v, key);
    else if (key == "scale") c.scale = read_real(v, key);
    else if (key == "n_sims") c.n_sims = read_count(v, key);
    else if (key == "n_datasets") c.n_datasets = read_count(v, key);
    else if (key == "n_mc") c.n_mc = read_count(v, key);
    else if (key == "fig2_covariate") c.fig2_covariate = read_count(v, key);
    else if (key == "redraw_a7") {
      if (!v.is_boolean()) throw InvalidArgument("config key 'redraw_a7' must be a boolean");
      c.redraw_a7 = v.get<bool>();
    } else {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(csv::read_file(path));
}

std::string to_json(const ExperimentConfig& c) {
  Json j;
  j["n_gen"] = c.n_gen;
  j["n_dup"] = c.n_dup;
  j["n_h"] = c.n_h;
  j["k"] = c.k;
  j["mu"] = c.mu;
  j["eigenvalues"] = c.eigenvalues;
  j["outcome_params"] = c.outcome.a;
  j["rounds"] = c.train.rounds;
  j["max_depth"] = c.train.max_depth;
  j["eta"] = c.train.eta;
  j["reg_lambda"] = c.train.reg_lambda;
  j["gamma"] = c.train.gamma;
  j["min_child_weight"] = c.train.min_child_weight;
  j["base_score"] = c.train.base_score;
  j["master_seed"] = c.master_seed;
  j["scale"] = c.scale;
  j["n_sims"] = c.n_sims;
  j["n_datasets"] = c.n_datasets;
  j["n_mc"] = c.n_mc;
  j["fig2_covariate"] = c.fig2_covariate;
  j["redraw_a7"] = c.redraw_a7;
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a64(to_json(cfg)); }

}  // namespace stratcv
