// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dses/ensemble.hpp"

namespace dses {

// A fully resolved experiment: objective, system variant, gains and ensemble
// protocol. Serializable to/from JSON; the simulate sidecar is a valid config
// that reproduces the run bit-identically.
struct ExperimentConfig {
  int version = 1;
  std::string preset;  // informational: the preset this config was derived from
  std::string objective_id = "quad1d";
  Eigen::VectorXd x_star = Eigen::VectorXd::Constant(1, 0.0);
  Eigen::MatrixXd hessian;  // quadNd only
  AlgoParams params;
  EnsembleConfig ensemble;
  int paths = 0;  // sample-path output count

  Objective build_objective() const;
  void validate() const;
};

// Presets fig1..fig9 mirror the experiment setups of the study this artifact
// reproduces; see README for the table.
ExperimentConfig make_preset(const std::string& name);
std::vector<std::string> preset_names();

std::string to_json_string(const ExperimentConfig& config, int indent = 2);
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// CSV helpers. All values are written with 17 significant digits so doubles
// round-trip exactly.
std::string format_double(double v);
void write_stats_csv(const std::string& path, const EnsembleStats& stats);
void write_paths_csv(const std::string& path, const std::vector<TrajectoryPath>& paths);

struct StatsCsv {
  std::vector<double> k;
  Eigen::MatrixXd mean_x, sigma_x, mean_y, sigma_y;  // rows x dim
};
StatsCsv read_stats_csv(const std::string& path);

}  // namespace dses
