// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dses/errors.hpp"
#include "dses/experiment.hpp"

using namespace dses;

TEST_CASE("presets expand to the published parameter sets") {
  const ExperimentConfig fig1 = make_preset("fig1");
  CHECK(fig1.params.rho == 0.12);
  CHECK(fig1.params.dither.chi == 121.0 / 4.0);
  CHECK(fig1.params.dither.psi == 0.01);
  CHECK(fig1.params.beta == 0.75);
  CHECK(fig1.params.eps == 1e-7);
  CHECK(fig1.x_star[0] == 25.0);
  CHECK(fig1.ensemble.x0.value[0] == -40.0);
  CHECK(fig1.ensemble.y0.kind == InitialCondition::Kind::uniform);
  CHECK(fig1.ensemble.y0.lo == -5.0);
  CHECK(fig1.ensemble.y0.hi == 10.0);
  CHECK(fig1.ensemble.system == SystemKind::adaptive1d);
  CHECK(fig1.ensemble.n_traj == 200000);

  const ExperimentConfig fig5 = make_preset("fig5");
  CHECK(fig5.objective_id == "x2cos");
  CHECK(fig5.params.rho == 0.05);
  CHECK(fig5.params.dither.chi == 0.09);
  CHECK(fig5.params.beta == 0.75);
  CHECK(fig5.x_star[0] == 48.15);
  CHECK(fig5.ensemble.x0.value[0] == 40.0);

  const ExperimentConfig fig6 = make_preset("fig6");
  CHECK(fig6.x_star[0] == 2.5e5);
  CHECK(fig6.ensemble.x0.value[0] == -4.0e5);
  CHECK(fig6.params.rho == 0.12);

  const ExperimentConfig fig7 = make_preset("fig7");
  CHECK(fig7.ensemble.system == SystemKind::nonadaptive1d);
  CHECK(fig7.params.rho == 0.05);
  CHECK(fig7.params.dither.chi == 0.81);
  CHECK(fig7.params.beta == 0.4);
  CHECK(fig7.params.dither.psi == 0.01);

  const ExperimentConfig fig8 = make_preset("fig8");
  CHECK(fig8.ensemble.system == SystemKind::firstorder);
  // h_k = 1e-3 w_k and g_k = 9 w_k
  CHECK(fig8.params.dither.h_of(1.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(fig8.params.dither.g_of(1.0) == doctest::Approx(9.0).epsilon(1e-12));

  const ExperimentConfig fig9 = make_preset("fig9");
  CHECK(fig9.objective_id == "quadNd");
  CHECK(fig9.ensemble.system == SystemKind::multidim);
  CHECK(fig9.params.rho == 0.25);
  CHECK(fig9.params.dither.chi == 0.2025);
  CHECK(fig9.params.dither.psi == 0.01);
  CHECK(fig9.params.beta == 0.93);
  CHECK(fig9.x_star[0] == 5.2e5);
  CHECK(fig9.x_star[1] == 1.23e5);
  CHECK(fig9.x_star[2] == -3.2e5);
  Eigen::MatrixXd h(3, 3);
  h << 0.7, 0.1, 0.2, 0.3, 0.4, 0.3, 0.4, 0.0, 0.5;
  CHECK(fig9.hessian == h);
  CHECK(fig9.ensemble.n_traj == 100000);

  CHECK(make_preset("fig3").paths == 5);
  CHECK_THROWS_AS(make_preset("fig10"), ConfigError);

  for (const auto& name : preset_names()) CHECK_NOTHROW(make_preset(name).validate());
}

TEST_CASE("config JSON round trip preserves every field") {
  ExperimentConfig c = make_preset("fig9");
  c.ensemble.threads = 3;
  c.ensemble.seed = 99;
  c.paths = 2;
  const ExperimentConfig back = config_from_json_string(to_json_string(c));
  CHECK(back.objective_id == c.objective_id);
  CHECK(back.x_star == c.x_star);
  CHECK(back.hessian == c.hessian);
  CHECK(back.params.rho == c.params.rho);
  CHECK(back.params.beta == c.params.beta);
  CHECK(back.params.eps == c.params.eps);
  CHECK(back.params.dither.chi == c.params.dither.chi);
  CHECK(back.params.dither.psi == c.params.dither.psi);
  CHECK(back.ensemble.n_traj == c.ensemble.n_traj);
  CHECK(back.ensemble.n_steps == c.ensemble.n_steps);
  CHECK(back.ensemble.seed == c.ensemble.seed);
  CHECK(back.ensemble.threads == c.ensemble.threads);
  CHECK(back.ensemble.system == c.ensemble.system);
  CHECK(back.ensemble.x0.value == c.ensemble.x0.value);
  CHECK(back.paths == c.paths);

  const ExperimentConfig u = make_preset("fig1");
  const ExperimentConfig u2 = config_from_json_string(to_json_string(u));
  CHECK(u2.ensemble.y0.kind == InitialCondition::Kind::uniform);
  CHECK(u2.ensemble.y0.lo == -5.0);
  CHECK(u2.ensemble.y0.hi == 10.0);
}

TEST_CASE("malformed configs raise ConfigError") {
  CHECK_THROWS_AS(config_from_json_string("{not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_string("{\"version\": 1}"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_string(
                      "{\"version\":1,\"objective\":{\"id\":\"quad1d\",\"x_star\":[25]},"
                      "\"system\":\"warp\",\"params\":{\"rho\":0.1,\"beta\":0.5,\"eps\":1e-7,"
                      "\"chi\":1,\"psi\":1},\"ensemble\":{\"n_traj\":1,\"n_steps\":1,\"seed\":1,"
                      "\"x0\":{\"kind\":\"fixed\",\"value\":[0]},"
                      "\"y0\":{\"kind\":\"fixed\",\"value\":[0]}}}"),
                  std::invalid_argument);
}

TEST_CASE("doubles survive the 17-digit CSV format") {
  const double values[] = {1.0 / 3.0, -2.2250738585072014e-308, 1.2345678901234567e300, 0.0,
                           -65.12345};
  for (double v : values) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("stats CSV write/read round trip") {
  EnsembleStats stats;
  stats.mean_x.resize(3, 1);
  stats.sigma_x.resize(3, 1);
  stats.mean_y.resize(3, 1);
  stats.sigma_y.resize(3, 1);
  stats.var_x = stats.var_y = Eigen::MatrixXd::Zero(3, 1);
  for (int r = 0; r < 3; ++r) {
    stats.mean_x(r, 0) = r + 1.0 / 3.0;
    stats.sigma_x(r, 0) = r * 0.1;
    stats.mean_y(r, 0) = -r / 7.0;
    stats.sigma_y(r, 0) = r * 1e-7;
  }
  const std::string path = "roundtrip_test.csv";
  write_stats_csv(path, stats);
  const StatsCsv back = read_stats_csv(path);
  REQUIRE(back.k.size() == 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(back.mean_x(r, 0) == stats.mean_x(r, 0));
    CHECK(back.sigma_x(r, 0) == stats.sigma_x(r, 0));
    CHECK(back.mean_y(r, 0) == stats.mean_y(r, 0));
    CHECK(back.sigma_y(r, 0) == stats.sigma_y(r, 0));
  }
  std::remove(path.c_str());
}
