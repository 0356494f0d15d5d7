#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhy/kernels.hpp"

namespace lhylab {

inline constexpr int config_version = 1;

struct FockOptions {
  int draws = 20;
  std::uint64_t seed = 0x5EED;
  int n_max = 30;
  int pair_n_max = 60;
};

struct RunConfig {
  std::string potential = "square_barrier:2,1";
  double kappa = 0.5;
  double epsilon = 0.05;
  double delta = 0.05;
  std::vector<std::int64_t> N_grid{1000, 3162, 10000, 31623, 100000};
  std::optional<std::int64_t> max_shell;
  std::string out = "lhylab_out";
  bool assertions = true;
  bool write_tables = false;
  FockOptions fock;

  lhy::KernelParams params(std::int64_t N) const;
  // Grid sorted ascending and non-empty, every point valid. Throws
  // lhy::ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  // Hex FNV-1a of the canonical JSON dump without the output directory.
  std::string hash() const;
};

// Keys absent from the file keep their defaults; unknown keys are rejected.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

// "1e5", "31623" or "10^4.5" -> rounded integer N.
std::int64_t parse_N(const std::string& s);
std::vector<std::int64_t> parse_N_grid(const std::string& s);

}  // namespace lhylab
