// SPDX-License-Identifier: Apache-2.0
#include "dses/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "dses/errors.hpp"

namespace dses {
namespace {

void check_finite(const TrajectoryState& s, const char* where) {
  if (!s.all_finite()) throw NumericalError(std::string(where) + ": non-finite state");
}

}  // namespace

void AlgoParams::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("AlgoParams: rho must be > 0");
  if (!(beta > 0.0 && beta < 2.0)) throw std::invalid_argument("AlgoParams: beta must be in (0,2)");
  if (!(eps > 0.0)) throw std::invalid_argument("AlgoParams: eps must be > 0");
  dither.validate();
}

bool TrajectoryState::all_finite() const {
  return x.allFinite() && y.allFinite() && y_prev.allFinite() && std::isfinite(j_prev);
}

TrajectoryState init_state(const Eigen::VectorXd& x0, const Eigen::VectorXd& y0,
                           const Objective& obj, const DitherSpec& dither, RandomStream& stream) {
  if (x0.size() != obj.dim || y0.size() != obj.dim)
    throw std::invalid_argument("init_state: dimension mismatch with objective");
  TrajectoryState s;
  s.x = x0;
  s.y = y0;
  s.y_prev = y0;
  s.w_prev.resize(obj.dim);
  for (int j = 0; j < obj.dim; ++j) s.w_prev[j] = dither.omega * stream.rademacher();
  s.j_prev = obj.dim == 1 ? obj(x0[0]) : obj(x0);
  s.k = 0;
  check_finite(s, "init_state");
  return s;
}

TrajectoryState step_adaptive_1d_with_draw(TrajectoryState s, const AlgoParams& p,
                                           const Objective& obj, double w_k) {
  const double x = s.x[0], y = s.y[0], y_prev = s.y_prev[0];
  const double jx = obj(x);
  const double y_next =
      (1.0 - p.beta) * y + p.dither.h_of(s.w_prev[0]) / (std::abs(y_prev) + p.eps) * (jx - s.j_prev);
  const double x_next = x - p.rho * y + (std::abs(y) + p.eps) * p.dither.g_of(w_k);
  s.x[0] = x_next;
  s.y_prev[0] = y;
  s.y[0] = y_next;
  s.w_prev[0] = w_k;
  s.j_prev = jx;
  ++s.k;
  check_finite(s, "step_adaptive_1d");
  return s;
}

TrajectoryState step_adaptive_1d(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                                 RandomStream& stream) {
  return step_adaptive_1d_with_draw(std::move(s), p, obj, p.dither.omega * stream.rademacher());
}

TrajectoryState step_nonadaptive_1d_with_draw(TrajectoryState s, const AlgoParams& p,
                                              const Objective& obj, double w_k) {
  const double x = s.x[0], y = s.y[0];
  const double jx = obj(x);
  const double y_next = (1.0 - p.beta) * y + p.dither.h_of(s.w_prev[0]) * (jx - s.j_prev);
  const double x_next = x - p.rho * y + p.dither.g_of(w_k);
  s.x[0] = x_next;
  s.y_prev[0] = y;
  s.y[0] = y_next;
  s.w_prev[0] = w_k;
  s.j_prev = jx;
  ++s.k;
  check_finite(s, "step_nonadaptive_1d");
  return s;
}

TrajectoryState step_nonadaptive_1d(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                                    RandomStream& stream) {
  return step_nonadaptive_1d_with_draw(std::move(s), p, obj, p.dither.omega * stream.rademacher());
}

TrajectoryState step_first_order_with_draw(TrajectoryState s, const DitherSpec& dither,
                                           const Objective& obj, double w_k,
                                           FirstOrderOptions opt) {
  const double x = s.x[0];
  const double jx = obj(x);
  double g = dither.g_of(w_k);
  if (opt.decay_gain) g /= std::sqrt(double(std::max(s.k, 1L)));
  const double x_next = x - dither.h_of(s.w_prev[0]) * (jx - s.j_prev) + g;
  s.x[0] = x_next;
  s.w_prev[0] = w_k;
  s.j_prev = jx;
  ++s.k;
  check_finite(s, "step_first_order");
  return s;
}

TrajectoryState step_first_order(TrajectoryState s, const DitherSpec& dither, const Objective& obj,
                                 RandomStream& stream, FirstOrderOptions opt) {
  return step_first_order_with_draw(std::move(s), dither, obj, dither.omega * stream.rademacher(),
                                    opt);
}

TrajectoryState step_multidim_with_draw(TrajectoryState s, const AlgoParams& p,
                                        const Objective& obj, const Eigen::VectorXd& w_k) {
  const Eigen::Index n = s.x.size();
  const double jx = obj(s.x);
  const double dj = jx - s.j_prev;
  double sq_norm = 0.0;  // ||(|y_prev| + eps 1)||^2
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(s.y_prev[j]) + p.eps;
    sq_norm += a * a;
  }
  const double scale = dj / sq_norm;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a_prev = std::abs(s.y_prev[j]) + p.eps;
    const double y_next =
        (1.0 - p.beta) * s.y[j] + p.dither.h_of(s.w_prev[j]) * a_prev * scale;
    const double x_next =
        s.x[j] - p.rho * s.y[j] + p.dither.g_of(w_k[j]) * (std::abs(s.y[j]) + p.eps);
    s.y_prev[j] = s.y[j];
    s.y[j] = y_next;
    s.x[j] = x_next;
    s.w_prev[j] = w_k[j];
  }
  s.j_prev = jx;
  ++s.k;
  check_finite(s, "step_multidim");
  return s;
}

TrajectoryState step_multidim(TrajectoryState s, const AlgoParams& p, const Objective& obj,
                              RandomStream& stream) {
  Eigen::VectorXd w(s.x.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = p.dither.omega * stream.rademacher();
  return step_multidim_with_draw(std::move(s), p, obj, w);
}

double delta_expansion(double x_prev, double y_prev, double g_prev, const AlgoParams& p,
                       const QuadraticForm& quad) {
  if (quad.center.size() != 1) throw std::invalid_argument("delta_expansion: 1-D quadratics only");
  const double xt = x_prev - quad.center[0];
  const double a = std::abs(y_prev) + p.eps;
  return (xt - p.rho * y_prev) * a * g_prev - p.rho * xt * y_prev +
         0.5 * p.rho * p.rho * y_prev * y_prev + 0.5 * g_prev * g_prev * a * a;
}

}  // namespace dses
