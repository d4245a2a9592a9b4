// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dses/dynamics.hpp"
#include "dses/objectives.hpp"

namespace dses {

enum class SystemKind { adaptive1d, nonadaptive1d, firstorder, multidim };

SystemKind parse_system(const std::string& id);
std::string to_string(SystemKind kind);

// Fixed vector or per-coordinate uniform distribution. For y0 the uniform
// draw is resolved once from the master stream and shared by every trajectory;
// a uniform x0 is drawn per trajectory from its own stream.
struct InitialCondition {
  enum class Kind { fixed, uniform };
  Kind kind = Kind::fixed;
  Eigen::VectorXd value;  // fixed
  double lo = 0.0, hi = 0.0;

  static InitialCondition fixed(const Eigen::VectorXd& v);
  static InitialCondition fixed(double v);
  static InitialCondition uniform(double lo, double hi);
};

struct EnsembleConfig {
  std::int64_t n_traj = 1;
  int n_steps = 1;
  std::uint64_t seed = 1;
  InitialCondition x0;
  InitialCondition y0;
  SystemKind system = SystemKind::adaptive1d;
  bool decay_gain = false;    // first-order baseline only
  bool track_moments = false; // accumulate the second-moment block (1-D only)
  int threads = 0;            // 0: DSES_THREADS env var, else hardware concurrency

  void validate(int dim) const;
};

// Per-step ensemble statistics; rows are steps 0..n_steps, columns are
// coordinates. Mean is the sample mean, var the unbiased (N-1) sample
// variance, sigma = sqrt(var); each step aggregates the trajectories that are
// still finite at that step.
struct EnsembleStats {
  Eigen::MatrixXd mean_x, var_x, sigma_x;
  Eigen::MatrixXd mean_y, var_y, sigma_y;
  std::vector<std::int64_t> alive;
  std::int64_t n_diverged = 0;

  // second-moment block, present iff track_moments: per-step means and
  // standard errors of xt^2, y^2 and xt*y, where xt = x - x* (centered on the
  // objective's known minimizer when available, else on 0)
  bool has_moments = false;
  Eigen::MatrixXd m_x2, m_y2, m_xy, se_x2, se_y2, se_xy;
};

// Runs n_traj independent trajectories for n_steps steps. Trajectory i draws
// from RandomStream(seed, i); the result is bit-identical for any thread
// count. Throws AllDivergedError when no trajectory survives to the final
// step.
EnsembleStats run_ensemble(const EnsembleConfig& config, const AlgoParams& params,
                           const Objective& obj);

// Full (x_k, y_k) paths of the first `count` trajectory indices, matching the
// trajectories the ensemble simulates. Entries after a divergence are NaN.
struct TrajectoryPath {
  Eigen::MatrixXd x, y;  // (n_steps+1) x dim
  bool diverged = false;
};
std::vector<TrajectoryPath> sample_paths(const EnsembleConfig& config, const AlgoParams& params,
                                         const Objective& obj, int count);

// Shared initial y0 vector exactly as run_ensemble resolves it.
Eigen::VectorXd resolve_y0(const EnsembleConfig& config, int dim);

}  // namespace dses
