#include <doctest.h>

#include "config.hpp"

using namespace lhylab;
using nlohmann::json;

TEST_CASE("particle number parsing") {
  CHECK(parse_N("1e5") == 100000);
  CHECK(parse_N("31623") == 31623);
  CHECK(parse_N("10^4.5") == 31623);
  CHECK_THROWS_AS(parse_N("ten"), lhy::ConfigError);
  CHECK_THROWS_AS(parse_N("1"), lhy::ConfigError);
  CHECK(parse_N_grid("1e3,1e4,1e5") == std::vector<std::int64_t>{1000, 10000, 100000});
}

TEST_CASE("config file fields") {
  const auto c = config_from_json(json{{"version", 1}, {"kappa", 0.4}, {"N_grid", {1000, 2000}}, {"max_shell", 5000}});
  CHECK(c.kappa == 0.4);
  CHECK(c.N_grid == std::vector<std::int64_t>{1000, 2000});
  CHECK(c.max_shell == 5000);
  CHECK(c.potential == "square_barrier:2,1");
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(config_from_json(json{{"kappa", 0.4}}), lhy::ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"version", 2}}), lhy::ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"version", 1}, {"kapa", 0.4}}), lhy::ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"version", 1}, {"kappa", "x"}}), lhy::ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.N_grid = {1000, 100};
  CHECK_THROWS_AS(c.validate(), lhy::ConfigError);
  c = {};
  c.N_grid = {};
  CHECK_THROWS_AS(c.validate(), lhy::ConfigError);
  c = {};
  c.epsilon = 0.08;
  CHECK_THROWS_AS(c.validate(), lhy::ConfigError);
  c = {};
  c.potential = "nothing:1";
  CHECK_THROWS(c.validate());
}

TEST_CASE("config round trip and hash") {
  RunConfig c;
  c.kappa = 0.45;
  const auto back = config_from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  RunConfig d;
  CHECK(d.hash() != c.hash());
  d.out = "elsewhere";
  CHECK(d.hash() == RunConfig{}.hash());
}
