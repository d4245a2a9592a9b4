// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "dses/dither.hpp"
#include "dses/objectives.hpp"
#include "dses/rng.hpp"

namespace dses {

// Gains of the extremum-seeking recursion together with its dither law.
struct AlgoParams {
  double rho = 0.1;   // gain on the moment state
  double beta = 1.0;  // forgetting factor, in (0,2)
  double eps = 1e-7;  // step-size regularizer
  DitherSpec dither;

  void validate() const;
};

// One chain's memory between steps. The y-update is delayed by one step, so
// the state carries the previous y, the previous objective value and the
// previous dither draw (one w per coordinate).
struct TrajectoryState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd y_prev;
  Eigen::VectorXd w_prev;  // raw previous draws, in {-omega, +omega}
  double j_prev = 0.0;     // J at the previous iterate
  long k = 0;

  bool all_finite() const;
};

// Bootstraps the delayed terms: the virtual previous iterate is x0 itself
// (so the first objective difference is zero), y_prev = y0, and w_prev is
// freshly sampled. Consumes dim draws from the stream.
TrajectoryState init_state(const Eigen::VectorXd& x0, const Eigen::VectorXd& y0,
                           const Objective& obj, const DitherSpec& dither,
                           RandomStream& stream);

// Adaptive 1-D map:
//   x+ = x - rho y + (|y|+eps) g(w)
//   y+ = (1-beta) y + h(w_prev)/(|y_prev|+eps) * (J(x) - J_prev)
// The *_with_draw variants take the fresh draw explicitly (hand oracles);
// the stream variants sample one draw per step. Throws NumericalError when a
// produced state is non-finite.
TrajectoryState step_adaptive_1d(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                                 RandomStream& stream);
TrajectoryState step_adaptive_1d_with_draw(TrajectoryState s, const AlgoParams& p,
                                           const Objective& obj, double w_k);

// Non-adaptive baseline: same recursion without the (|y|+eps) scaling.
TrajectoryState step_nonadaptive_1d(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                                    RandomStream& stream);
TrajectoryState step_nonadaptive_1d_with_draw(TrajectoryState s, const AlgoParams& p,
                                              const Objective& obj, double w_k);

// First-order baseline x+ = x - h(w_prev)(J(x)-J_prev) + g(w); y is unused.
// With decay_gain the exploration gain is g_k = g(w)/sqrt(max(k,1)).
struct FirstOrderOptions {
  bool decay_gain = false;
};
TrajectoryState step_first_order(TrajectoryState s, const DitherSpec& dither, const Objective& obj,
                                 RandomStream& stream, FirstOrderOptions opt = {});
TrajectoryState step_first_order_with_draw(TrajectoryState s, const DitherSpec& dither,
                                           const Objective& obj, double w_k,
                                           FirstOrderOptions opt = {});

// Multidimensional map with one independent draw per coordinate:
//   x+ = x - rho y + sqrt(psi) W (|y|+eps 1)
//   y+ = (1-beta) y + sqrt(chi) ||(|y_prev|+eps 1)||^-2 W_prev (|y_prev|+eps 1) (J(x)-J_prev)
// where W = diag(w). Reduces exactly to the adaptive 1-D map for dim = 1.
TrajectoryState step_multidim(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                              RandomStream& stream);
TrajectoryState step_multidim_with_draw(TrajectoryState s, const AlgoParams& p,
                                        const Objective& obj, const Eigen::VectorXd& w_k);

// Exact one-step objective increment for 1-D quadratics (second-order Taylor
// expansion is exact):  J(x_k) = J(x_{k-1}) + mu * Delta_{k-1} with
//   Delta = ((x-x*) - rho y)(|y|+eps) g - rho (x-x*) y + rho^2 y^2 / 2
//         + g^2 (|y|+eps)^2 / 2,
// all quantities at the previous step. Exposed as a test oracle.
double delta_expansion(double x_prev, double y_prev, double g_prev, const AlgoParams& p,
                       const QuadraticForm& quad);

}  // namespace dses
