// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#include "smlc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace smlc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v, int line) {
  // strtod accepts the usual spellings (1e-3, 0.5, -2) but also junk
  // prefixes, so insist the whole token is consumed.
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
    throw ConfigError("'" + key + "' expects a real number, got '" + v + "'", line);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v, int line) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'", line);
  return out;
}

bool to_switch(const std::string& key, const std::string& v, int line) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw ConfigError("'" + key + "' expects on or off, got '" + v + "'", line);
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.dt = 0.01;
  c.smlc.chi = 0.05;
  c.smlc.epsilon = 0.001;
  c.smlc.denom_clamp = 0.001;
  c.q0 = 0.5;
  c.k0 = 1.0;
  c.seed = 1;
  c.sigma_floor_ratio = 1e-3;
  c.sigma_step_limit = 0.5;
  if (name == "scenario1") {
    c.plant_name = "acc";
    c.horizon = 60.0;
    c.x0 = Eigen::VectorXd::Zero(3);
    c.smlc.lambda = 1.0;
    c.smlc.gamma_k = 0.1;
    c.smlc.gamma_alpha = 0.1;
    c.alpha0 = 3.0;
    c.input_range = 1.0;
    c.disturbance = true;
    c.headway_h = 0.0;
  } else if (name == "scenario2") {
    c.plant_name = "numeric2";
    c.horizon = 20.0;
    c.x0 = Eigen::Vector2d(1.0, -1.0);
    c.smlc.lambda = 2.0;
    c.smlc.gamma_k = 1.0;
    c.smlc.gamma_alpha = 0.1;
    c.alpha0 = 0.03;
    c.input_range = 2.0;
    c.snr_db = 50.0;
    c.disturbance = false;
  } else {
    throw ConfigError("unknown preset '" + name + "'", 0);
  }
  return c;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"scenario1", "scenario2"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "plant",       "dt",     "horizon",         "x0",          "lambda",
      "gamma_k",     "gamma_alpha", "chi",        "epsilon",     "denom_clamp",
      "k0",          "alpha0", "q0",              "input_range", "snr_db",
      "seed",        "disturbance", "headway_h",  "sigma_floor_ratio", "sigma_step_limit"};
  return keys;
}

void apply_config_value(ScenarioConfig& c, const std::string& key, const std::string& v,
                        int line) {
  if (key == "plant") {
    const auto& names = plant_names();
    if (std::find(names.begin(), names.end(), v) == names.end())
      throw ConfigError("unknown plant '" + v + "'", line);
    c.plant_name = v;
  } else if (key == "dt") {
    c.dt = to_real(key, v, line);
  } else if (key == "horizon") {
    c.horizon = to_real(key, v, line);
  } else if (key == "x0") {
    std::vector<double> vals;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(to_real(key, trim(item), line));
    if (vals.empty()) throw ConfigError("'x0' needs at least one value", line);
    c.x0 = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  } else if (key == "lambda") {
    c.smlc.lambda = to_real(key, v, line);
  } else if (key == "gamma_k") {
    c.smlc.gamma_k = to_real(key, v, line);
  } else if (key == "gamma_alpha") {
    c.smlc.gamma_alpha = to_real(key, v, line);
  } else if (key == "chi") {
    c.smlc.chi = to_real(key, v, line);
  } else if (key == "epsilon") {
    c.smlc.epsilon = to_real(key, v, line);
  } else if (key == "denom_clamp") {
    c.smlc.denom_clamp = to_real(key, v, line);
  } else if (key == "k0") {
    c.k0 = to_real(key, v, line);
  } else if (key == "alpha0") {
    c.alpha0 = to_real(key, v, line);
  } else if (key == "q0") {
    c.q0 = to_real(key, v, line);
  } else if (key == "input_range") {
    c.input_range = to_real(key, v, line);
  } else if (key == "snr_db") {
    if (v == "off")
      c.snr_db.reset();
    else
      c.snr_db = to_real(key, v, line);
  } else if (key == "seed") {
    c.seed = to_u64(key, v, line);
  } else if (key == "disturbance") {
    c.disturbance = to_switch(key, v, line);
  } else if (key == "headway_h") {
    c.headway_h = to_real(key, v, line);
  } else if (key == "sigma_floor_ratio") {
    c.sigma_floor_ratio = to_real(key, v, line);
  } else if (key == "sigma_step_limit") {
    c.sigma_step_limit = to_real(key, v, line);
  } else {
    throw ConfigError("unknown key '" + key + "'", line);
  }
}

ScenarioConfig parse_config_text(const std::string& text) {
  std::vector<std::pair<int, std::pair<std::string, std::string>>> entries;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError("duplicate key '" + key + "' (first on line " +
                            std::to_string(it->second) + ")",
                        line_no);
    seen[key] = line_no;
    entries.push_back({line_no, {std::move(key), std::move(value)}});
  }

  auto plant = std::find_if(entries.begin(), entries.end(),
                            [](const auto& e) { return e.second.first == "plant"; });
  if (plant == entries.end()) throw ConfigError("missing mandatory key 'plant'", 0);

  ScenarioConfig cfg;
  const std::string& name = plant->second.second;
  if (name == "acc")
    cfg = preset("scenario1");
  else if (name == "numeric2")
    cfg = preset("scenario2");
  else
    throw ConfigError("unknown plant '" + name + "'", plant->first);

  for (const auto& [line, kv] : entries) apply_config_value(cfg, kv.first, kv.second, line);
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream os;
  std::string x0;
  for (Eigen::Index i = 0; i < c.x0.size(); ++i) x0 += (i ? ", " : "") + fmt(c.x0(i));
  os << "plant = " << c.plant_name << "\n"
     << "dt = " << fmt(c.dt) << "\n"
     << "horizon = " << fmt(c.horizon) << "\n"
     << "x0 = " << x0 << "\n"
     << "lambda = " << fmt(c.smlc.lambda) << "\n"
     << "gamma_k = " << fmt(c.smlc.gamma_k) << "\n"
     << "gamma_alpha = " << fmt(c.smlc.gamma_alpha) << "\n"
     << "chi = " << fmt(c.smlc.chi) << "\n"
     << "epsilon = " << fmt(c.smlc.epsilon) << "\n"
     << "denom_clamp = " << fmt(c.smlc.denom_clamp) << "\n"
     << "k0 = " << fmt(c.k0) << "\n"
     << "alpha0 = " << fmt(c.alpha0) << "\n"
     << "q0 = " << fmt(c.q0) << "\n"
     << "input_range = " << fmt(c.input_range) << "\n"
     << "snr_db = " << (c.snr_db ? fmt(*c.snr_db) : std::string("off")) << "\n"
     << "seed = " << c.seed << "\n"
     << "disturbance = " << (c.disturbance ? "on" : "off") << "\n"
     << "headway_h = " << fmt(c.headway_h) << "\n"
     << "sigma_floor_ratio = " << fmt(c.sigma_floor_ratio) << "\n"
     << "sigma_step_limit = " << fmt(c.sigma_step_limit) << "\n";
  return os.str();
}

}  // namespace smlc
