#include <doctest.h>

#include <cmath>

#include "levysv/config.hpp"
#include "levysv/errors.hpp"

using namespace levysv;

TEST_CASE("defaults survive an empty config") {
  const auto cfg = parse_config("");
  CHECK(cfg.alpha == 1.0);
  CHECK(cfg.gamma == 3.0);
  CHECK(cfg.drift_kind == "power");
  REQUIRE(cfg.lags.size() == 10);
  CHECK(cfg.lags.front() == doctest::Approx(std::ldexp(1.0, -12)));
  CHECK(cfg.lags.back() == doctest::Approx(std::ldexp(1.0, -3)));
  CHECK(cfg.q_grid == std::vector<double>{1.0, 2.0, 3.0, 8.0});
  CHECK(cfg.seed == 20260818);
}

TEST_CASE("parsing handles sections, comments, and whitespace") {
  const auto cfg = parse_config(
      "# top comment\n"
      "[subordinator]\n"
      "  alpha = 1.5   # inline comment\n"
      "jump_rate=2\n"
      "\n"
      "[drift]\n"
      "drift_kind = linear\n"
      "C = 0.7\n"
      "[experiment]\n"
      "q_grid = 1, 2, 2.5\n"
      "n_paths = 5000\n"
      "seed = 42\n");
  CHECK(cfg.alpha == 1.5);
  CHECK(cfg.jump_rate == 2.0);
  CHECK(cfg.drift_kind == "linear");
  CHECK(cfg.coefficient == 0.7);
  CHECK(cfg.q_grid == std::vector<double>{1.0, 2.0, 2.5});
  CHECK(cfg.n_paths == 5000);
  CHECK(cfg.seed == 42);
}

TEST_CASE("unknown keys and malformed lines are rejected loudly") {
  CHECK_THROWS_AS(parse_config("[subordinator]\nalfa = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = 1\n"), ConfigError);  // no section
  CHECK_THROWS_AS(parse_config("[drift]\ngamma\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drift]\ngamma = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nseed = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nq_grid = 1,,2\n"), ConfigError);
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_AS(parse_config("[subordinator]\nalpha = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drift]\ngamma = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drift]\ndrift_kind = cubic\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nlags = 0.5, 0.25\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nq_grid = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nn_paths = 0\n"), ConfigError);
}

TEST_CASE("canonical serialization round-trips exactly") {
  auto cfg = parse_config("");
  cfg.alpha = 1.0 / 3.0;
  cfg.lags = {1e-5, 0.123456789012345678, 0.5};
  cfg.epsilon = 0.01;
  const std::string text = canonical_config(cfg);
  const auto back = parse_config(text);
  CHECK(canonical_config(back) == text);
  CHECK(back.alpha == cfg.alpha);  // bit-exact through 17 digits
  CHECK(back.lags == cfg.lags);
}

TEST_CASE("config hash is stable and sensitive") {
  const auto cfg = parse_config("");
  const std::string h = config_hash(cfg);
  CHECK(h.size() == 16);
  CHECK(config_hash(parse_config(canonical_config(cfg))) == h);

  auto mutated = cfg;
  mutated.seed += 1;
  CHECK(config_hash(mutated) != h);
  mutated = cfg;
  mutated.q_grid.push_back(4.0);
  CHECK(config_hash(mutated) != h);

  // Execution details leave the statistical identity alone: the same
  // experiment written elsewhere or on more threads is the same experiment.
  mutated = cfg;
  mutated.out_dir = "elsewhere";
  CHECK(config_hash(mutated) == h);
  mutated = cfg;
  mutated.workers = 7;
  CHECK(config_hash(mutated) == h);
}

TEST_CASE("build_model wires the config into specs") {
  auto cfg = parse_config("");
  const auto model = build_model(cfg);
  CHECK(model.subordinator.jump_rate() == 1.0);
  CHECK(model.subordinator.tail_exponent() == 1.0);
  CHECK(model.drift.exponent() == doctest::Approx(3.0));
  CHECK(model.residual_drift == 0.0);

  cfg.epsilon = 2.0;
  cfg.drift = 0.1;
  const auto truncated = build_model(cfg);
  CHECK(truncated.subordinator.jump_rate() ==
        doctest::Approx(0.5).epsilon(1e-14));
  // 0.1 kept drift + 1 * log(2/1) small-jump mean rate.
  CHECK(truncated.residual_drift ==
        doctest::Approx(0.1 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("q grid entries near thresholds get nudged with a warning") {
  auto cfg = parse_config("");  // gamma 3, alpha 1: q* = 6, no blowup
  cfg.q_grid = {1.0, 5.98, 6.0, 6.03, 8.0};
  std::vector<std::string> warnings;
  const auto grid = adjusted_q_grid(cfg, &warnings);
  REQUIRE(grid.size() == 5);
  CHECK(grid[0] == 1.0);
  CHECK(grid[1] == doctest::Approx(5.95));  // below side, pushed down
  CHECK(grid[2] == doctest::Approx(5.95));  // exactly at: resolved below
  CHECK(grid[3] == doctest::Approx(6.05));  // above side, pushed up
  CHECK(grid[4] == 8.0);
  CHECK(warnings.size() == 3);

  // Far from any threshold: untouched, no warnings.
  cfg.q_grid = {1.0, 2.0, 3.0, 8.0};
  warnings.clear();
  CHECK(adjusted_q_grid(cfg, &warnings) == cfg.q_grid);
  CHECK(warnings.empty());
}

TEST_CASE("load_config surfaces missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}
