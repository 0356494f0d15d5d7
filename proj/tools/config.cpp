#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lhy/potential.hpp"

namespace lhylab {

using nlohmann::json;

lhy::KernelParams RunConfig::params(std::int64_t N) const {
  lhy::KernelParams p;
  p.N = N;
  p.kappa = kappa;
  p.epsilon = epsilon;
  p.delta = delta;
  return p;
}

void RunConfig::validate() const {
  if (N_grid.empty()) throw lhy::ConfigError("N grid must hold at least one point");
  if (!std::is_sorted(N_grid.begin(), N_grid.end()) ||
      std::adjacent_find(N_grid.begin(), N_grid.end()) != N_grid.end())
    throw lhy::ConfigError("N grid must be strictly ascending");
  try {
    for (auto N : N_grid) params(N).validate();
  } catch (const lhy::DomainError& e) {
    throw lhy::ConfigError(e.what());
  }
  if (max_shell && *max_shell < 1) throw lhy::ConfigError("max_shell must be >= 1");
  (void)lhy::RadialPotential::parse(potential);
  if (fock.draws < 1) throw lhy::ConfigError("focktoy.draws must be >= 1");
  if (fock.n_max < 4 || fock.pair_n_max < 4) throw lhy::ConfigError("focktoy cutoffs must be >= 4");
}

json RunConfig::to_json() const {
  json j;
  j["version"] = config_version;
  j["potential"] = potential;
  j["kappa"] = kappa;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["N_grid"] = N_grid;
  j["max_shell"] = max_shell ? json(*max_shell) : json(nullptr);
  j["out"] = out;
  j["assert"] = assertions;
  j["write_tables"] = write_tables;
  j["focktoy"] = {{"draws", fock.draws}, {"seed", fock.seed}, {"n_max", fock.n_max}, {"pair_n_max", fock.pair_n_max}};
  return j;
}

std::string RunConfig::hash() const {
  auto j = to_json();
  j.erase("out");  // where results go does not change them
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw lhy::ConfigError("config must be a JSON object");
  if (!j.contains("version")) throw lhy::ConfigError("config lacks a version field");
  if (j.at("version") != config_version)
    throw lhy::ConfigError("unsupported config version " + j.at("version").dump());
  static const std::set<std::string> known{"version", "potential", "kappa",        "epsilon", "delta",  "N_grid",
                                           "N",       "max_shell", "write_tables", "out",     "assert", "focktoy"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw lhy::ConfigError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    if (j.contains("potential")) c.potential = j.at("potential").get<std::string>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("N_grid")) {
      c.N_grid.clear();
      for (const auto& v : j.at("N_grid")) c.N_grid.push_back(std::llround(v.get<double>()));
    }
    if (j.contains("N")) c.N_grid = {std::llround(j.at("N").get<double>())};
    if (j.contains("max_shell") && !j.at("max_shell").is_null()) c.max_shell = j.at("max_shell").get<std::int64_t>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("assert")) c.assertions = j.at("assert").get<bool>();
    if (j.contains("write_tables")) c.write_tables = j.at("write_tables").get<bool>();
    if (j.contains("focktoy")) {
      const auto& f = j.at("focktoy");
      if (f.contains("draws")) c.fock.draws = f.at("draws").get<int>();
      if (f.contains("seed")) c.fock.seed = f.at("seed").get<std::uint64_t>();
      if (f.contains("n_max")) c.fock.n_max = f.at("n_max").get<int>();
      if (f.contains("pair_n_max")) c.fock.pair_n_max = f.at("pair_n_max").get<int>();
    }
  } catch (const json::exception& e) {
    throw lhy::ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lhy::ConfigError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw lhy::ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::int64_t parse_N(const std::string& s) {
  double v = 0.0;
  try {
    std::size_t used = 0;
    if (auto caret = s.find('^'); caret != std::string::npos) {
      v = std::pow(std::stod(s.substr(0, caret)), std::stod(s.substr(caret + 1), &used));
      used += caret + 1;
    } else {
      v = std::stod(s, &used);
    }
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw lhy::ConfigError("cannot parse N value '" + s + "'");
  }
  if (!(v >= 2.0 && v < 9e15)) throw lhy::ConfigError("N value '" + s + "' out of range");
  return std::llround(v);
}

std::vector<std::int64_t> parse_N_grid(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_N(item));
  return out;
}

}  // namespace lhylab
