// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dses/dynamics.hpp"

namespace dses {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Expectation dynamics of (xt, y) = (x - x*, y):
//   E[nu_{k+1}] = A_E E[nu_k],  A_E = [[1, -rho], [mu gamma, 1-beta]].
struct ExpectationMatrix {
  Eigen::Matrix2d a_e;
};

ExpectationMatrix build_expectation_matrix(const AlgoParams& p, double mu);

// nu_j = A_E^j nu0 for j = 0..k (inclusive; k+1 entries).
std::vector<Eigen::Vector2d> propagate_expectation(const ExpectationMatrix& m,
                                                   const Eigen::Vector2d& nu0, int k);

// Second-moment dynamics of zeta = [xt_{k-1}^2, xt_k^2, y_{k-1}^2, y_k^2,
// xt_{k-1} y_{k-1}, xt_k y_k] with the epsilon-perturbation bracket
//   (a_ms + eps q1) zeta + eps b1  <=  E[zeta_+]  <=  (a_ms + eps q2) zeta + eps b2.
// t1_bound = sup T1 = 1/eps and t2_bound = sup T2 = 4 eps are the tight
// analytic suprema of the two epsilon-remainder kernels; c_bar is
// rho^2 (rho^2 chi + 2 gamma^2)/4.
struct MomentMatrix {
  Matrix6d a_ms = Matrix6d::Zero();
  Matrix6d q1 = Matrix6d::Zero();
  Matrix6d q2 = Matrix6d::Zero();
  Vector6d b1 = Vector6d::Zero();
  Vector6d b2 = Vector6d::Zero();
  double t1_bound = 0.0;  // M
  double t2_bound = 0.0;  // F
  double c_bar = 0.0;
  double eps = 0.0;  // the eps (= eps0) baked into q1, q2, b1, b2
};

MomentMatrix build_moment_matrix(const AlgoParams& p, double mu);

// Iterates both affine recursions from zeta0. lower[i]/upper[i] is the i-th
// iterate (index 0 is zeta0 itself). Validates zeta0: square entries
// nonnegative and the Cauchy-Schwarz consistency of the cross entries.
struct MomentBracket {
  std::vector<Vector6d> lower, upper;
};
MomentBracket propagate_moment_bounds(const MomentMatrix& m, const Vector6d& zeta0, int k);

// 1-sigma upper bound per step: sqrt(upper^(2) - (E[xt])^2), with nu aligned
// so nu[i] is the expectation at the step of upper[i]'s second entry. Small
// negative radicands (numerical) are clamped to zero; a radicand below
// -1e-9 * (1 + |upper^(2)|) throws.
std::vector<double> sigma_upper_bound(const MomentBracket& bracket,
                                      const std::vector<Eigen::Vector2d>& nu);

// Expectation and second-moment seeds at k = 1 under the bootstrap convention
// (virtual x_{-1} = x0, y_{-1} = y0, fresh w_{-1}): y_1 = (1-beta) y0 exactly
// and xt_1 = xt_0 - rho y0 + (|y0|+eps) g(w_0).
struct InitialMoments {
  Eigen::Vector2d nu1;
  Vector6d zeta1;
};
InitialMoments initial_moments(double x_tilde0, double y0, const AlgoParams& p);

// E|y| <= 1/4 + E[y^2] (AM-GM). Rejects negative input.
double bound_abs_expectation(double second_moment);

struct ConditionOutcome {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double margin = 0.0;  // positive distance from the boundary when the condition holds
};

// Jury test for lambda^2 - (2-beta) lambda + (1-beta+mu gamma rho):
//   p(1) = mu gamma rho > 0,  p(-1) = 4 - 2 beta + mu gamma rho > 0,
//   |1 - beta + mu gamma rho| < 1.
struct JuryQuadratic {
  std::vector<ConditionOutcome> conditions;
  bool pass = false;
  double root_radius = 0.0;  // direct-root cross check
};
JuryQuadratic jury_quadratic(const AlgoParams& p, double mu);

// Coefficients (a4, a3, a2, a1, a0) of the quintic factor of char(a_ms)
// under the substitution chi = q1/mu^2, psi = q2 rho^4 (a_ms is then
// independent of mu).
std::array<double, 5> jury_quintic_coeffs(double rho, double beta, double q1, double q2);

// Jury stability test for an arbitrary-degree real polynomial, coefficients
// descending with positive leading coefficient: true iff all roots are
// strictly inside the unit circle.
bool jury_stable(const std::vector<double>& coeffs_desc);

double spectral_radius(const Eigen::MatrixXd& m);

// Characteristic polynomial coefficients (descending, monic) via the
// Faddeev-LeVerrier recursion.
Eigen::VectorXd charpoly_coeffs(const Eigen::MatrixXd& m);

struct StabilityReport {
  bool feasible = false;
  std::vector<ConditionOutcome> reasons;
  double spectral_radius_ae = 0.0;
  double spectral_radius_ams = 0.0;
  double spectral_radius_ams_q2 = 0.0;
  bool jury_quintic_pass = false;
};

// Theorem conditions made computable: (i) beta > mu rho gamma, (ii) the
// quadratic Jury test, (iii) spectral radius of a_ms < 1, (iv) spectral
// radius of a_ms + eps q2 < 1 (the upper-bound recursion contracts).
// Verdicts use strict inequalities with a 1e-12 guard band.
StabilityReport check_feasibility(const AlgoParams& p, double mu);

// Solves A^T P A - P = -I for symmetric P (Kronecker linearization).
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a);

// Numerical verifier for the perturbed-bracket convergence result: draws
// `trials` adversarial sequences with theta_{k+1} uniform in the element-wise
// bracket [(a + eta q1) theta + eta b1, (a + eta q2) theta + eta b2] and
// checks the empirical limsup of ||theta|| against
//   c * eta,  c = 2 ||(I - a - eta q2)^{-1}||_2 max(||b1||, ||b2||) + 2.
// The constant is a pragmatic certificate; the raw limsup is reported.
struct PracticalConvergenceReport {
  double eta = 0.0;
  double limsup_norm = 0.0;
  double bound_c = 0.0;  // the constant c above
  bool pass = false;
  double lyapunov_min_eig = 0.0;  // of P solving a^T P a - P = -I
  int trials = 0;
  int steps = 0;
};
PracticalConvergenceReport verify_practical_convergence(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
    const Eigen::VectorXd& b1, const Eigen::VectorXd& b2, double eta, int trials,
    std::uint64_t seed = 20240915, const Eigen::VectorXd* theta0 = nullptr, int steps = 4000);

// Largest rho (to tolerance tol) such that check_feasibility passes at fixed
// beta, eps, chi, psi, mu; bisection between a feasible and an infeasible
// gain. empty = true when no feasible rho was found below rho_hi.
struct RhoInterval {
  double rho_max = 0.0;
  bool empty = true;
};
RhoInterval sweep_rho(double beta, double eps, double chi, double psi, double mu, double rho_hi,
                      double tol);

}  // namespace dses
