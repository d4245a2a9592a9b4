// SPDX-License-Identifier: Apache-2.0
#include "dses/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "dses/errors.hpp"
#include "dses/rng.hpp"

namespace dses {
namespace {

constexpr double kGuard = 1e-12;  // stability verdicts are strict

}  // namespace

ExpectationMatrix build_expectation_matrix(const AlgoParams& p, double mu) {
  p.validate();
  const double gamma = p.dither.gamma();
  ExpectationMatrix m;
  m.a_e << 1.0, -p.rho, mu * gamma, 1.0 - p.beta;
  return m;
}

std::vector<Eigen::Vector2d> propagate_expectation(const ExpectationMatrix& m,
                                                   const Eigen::Vector2d& nu0, int k) {
  if (k < 0) throw std::invalid_argument("propagate_expectation: k must be >= 0");
  std::vector<Eigen::Vector2d> out;
  out.reserve(k + 1);
  Eigen::Vector2d nu = nu0;
  out.push_back(nu);
  for (int j = 0; j < k; ++j) {
    nu = m.a_e * nu;
    out.push_back(nu);
  }
  return out;
}

MomentMatrix build_moment_matrix(const AlgoParams& p, double mu) {
  p.validate();
  const double rho = p.rho, beta = p.beta, eps = p.eps;
  const double chi = p.dither.chi, psi = p.dither.psi;
  const double g = p.dither.gamma();
  const double g2 = g * g;

  MomentMatrix m;
  m.eps = eps;
  m.t1_bound = 1.0 / eps;                               // sup_y (eps+2|y|)/(|y|+eps)^2
  m.t2_bound = 4.0 * eps;                               // sup_y eps (eps+2|y|)^2/(|y|+eps)^2
  m.c_bar = rho * rho * (rho * rho * chi + 2.0 * g2) / 4.0;

  Matrix6d& a = m.a_ms;
  a(0, 1) = 1.0;
  a(1, 1) = 1.0;
  a(1, 3) = rho * rho + psi;
  a(1, 5) = -2.0 * rho;
  a(2, 3) = 1.0;
  a(3, 0) = mu * mu * (g2 + rho * rho * chi);
  a(3, 2) = mu * mu / 4.0 * (std::pow(rho, 4) * chi + 6.0 * g2 * rho * rho + g2 * psi);
  a(3, 3) = (1.0 - beta) * (1.0 - beta);
  a(3, 4) = -mu * mu * rho * (3.0 * g2 + rho * rho * chi);
  a(3, 5) = 2.0 * (1.0 - beta) * mu * g;
  a(4, 5) = 1.0;
  a(5, 0) = mu * g;
  a(5, 2) = mu * g / 2.0 * (3.0 * rho * rho + psi);
  a(5, 3) = -rho * (1.0 - beta);
  a(5, 4) = -3.0 * mu * rho * g;
  a(5, 5) = 1.0 - beta - mu * rho * g;

  const double eps0 = eps;  // point interval: eps0 = eps
  m.q1(3, 0) = m.q1(3, 1) = -mu * mu * rho * rho * chi * m.t1_bound / 2.0;
  m.q2(1, 3) = 2.0 * psi;
  m.q2(3, 2) = mu * mu * (g2 * psi / 2.0 + m.c_bar * m.t1_bound);
  m.q2(5, 2) = mu * g * psi;

  m.b1[1] = psi * eps0;
  m.b1[3] = mu * mu * g2 * psi * eps0 / 4.0;
  m.b1[5] = mu * g * psi * eps0 / 2.0;
  m.b2[1] = psi * (0.5 + eps0);
  m.b2[3] = mu * mu * (g2 * psi / 4.0 * (eps0 + 0.5) + rho * rho * g2 * m.t2_bound / 2.0);
  m.b2[5] = mu * g * psi / 4.0 * (2.0 * eps0 + 1.0);
  return m;
}

MomentBracket propagate_moment_bounds(const MomentMatrix& m, const Vector6d& zeta0, int k) {
  if (k < 0) throw std::invalid_argument("propagate_moment_bounds: k must be >= 0");
  const double tol = 1e-9 * (1.0 + zeta0.cwiseAbs().maxCoeff());
  for (int i : {0, 1, 2, 3})
    if (zeta0[i] < -tol)
      throw std::invalid_argument("propagate_moment_bounds: square entries of zeta0 must be >= 0");
  if (zeta0[4] * zeta0[4] > zeta0[0] * zeta0[2] + tol * (1.0 + zeta0[0] + zeta0[2]) ||
      zeta0[5] * zeta0[5] > zeta0[1] * zeta0[3] + tol * (1.0 + zeta0[1] + zeta0[3]))
    throw std::invalid_argument("propagate_moment_bounds: zeta0 violates Cauchy-Schwarz");

  const Matrix6d lower_map = m.a_ms + m.eps * m.q1;
  const Matrix6d upper_map = m.a_ms + m.eps * m.q2;
  MomentBracket out;
  out.lower.reserve(k + 1);
  out.upper.reserve(k + 1);
  Vector6d lo = zeta0, hi = zeta0;
  out.lower.push_back(lo);
  out.upper.push_back(hi);
  for (int j = 0; j < k; ++j) {
    lo = lower_map * lo + m.eps * m.b1;
    hi = upper_map * hi + m.eps * m.b2;
    out.lower.push_back(lo);
    out.upper.push_back(hi);
  }
  return out;
}

std::vector<double> sigma_upper_bound(const MomentBracket& bracket,
                                      const std::vector<Eigen::Vector2d>& nu) {
  if (nu.size() != bracket.upper.size())
    throw std::invalid_argument("sigma_upper_bound: nu/bracket length mismatch");
  std::vector<double> sigma(nu.size());
  for (size_t i = 0; i < nu.size(); ++i) {
    const double second = bracket.upper[i][1];
    const double v = second - nu[i][0] * nu[i][0];
    if (v < -1e-9 * (1.0 + std::abs(second)))
      throw NumericalError("sigma_upper_bound: negative variance bound");
    sigma[i] = std::sqrt(std::max(v, 0.0));
  }
  return sigma;
}

InitialMoments initial_moments(double x_tilde0, double y0, const AlgoParams& p) {
  p.validate();
  const double psi = p.dither.psi;
  const double a0 = std::abs(y0) + p.eps;
  const double x1 = x_tilde0 - p.rho * y0;       // E[xt_1]
  const double y1 = (1.0 - p.beta) * y0;         // exact: first objective difference is zero
  InitialMoments im;
  im.nu1 << x1, y1;
  im.zeta1 << x_tilde0 * x_tilde0, x1 * x1 + psi * a0 * a0, y0 * y0, y1 * y1, x_tilde0 * y0,
      y1 * x1;
  return im;
}

double bound_abs_expectation(double second_moment) {
  if (second_moment < 0.0)
    throw std::invalid_argument("bound_abs_expectation: second moment must be >= 0");
  return 0.25 + second_moment;
}

JuryQuadratic jury_quadratic(const AlgoParams& p, double mu) {
  p.validate();
  const double mgr = mu * p.dither.gamma() * p.rho;
  JuryQuadratic out;
  const double pm1 = 4.0 - 2.0 * p.beta + mgr;
  const double mid = std::abs(1.0 - p.beta + mgr);
  out.conditions = {
      {"p(1) = mu*gamma*rho > 0", mgr, 0.0, mgr > kGuard, mgr},
      {"p(-1) = 4 - 2*beta + mu*gamma*rho > 0", pm1, 0.0, pm1 > kGuard, pm1},
      {"|1 - beta + mu*gamma*rho| < 1", mid, 1.0, mid < 1.0 - kGuard, 1.0 - mid},
  };
  out.pass = out.conditions[0].holds && out.conditions[1].holds && out.conditions[2].holds;
  // direct-root cross check of lambda^2 - (2-beta) lambda + (1-beta+mgr)
  const double tr = 2.0 - p.beta, det = 1.0 - p.beta + mgr;
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    out.root_radius = std::max(std::abs((tr + r) / 2.0), std::abs((tr - r) / 2.0));
  } else {
    out.root_radius = std::sqrt(det);
  }
  return out;
}

std::array<double, 5> jury_quintic_coeffs(double rho, double beta, double q1, double q2) {
  if (rho < 0.0 || q1 < 0.0 || q2 < 0.0)
    throw std::invalid_argument("jury_quintic_coeffs: rho, q1, q2 must be >= 0");
  const double s = std::sqrt(q1 * q2);
  const double r3 = std::pow(rho, 3), r4 = std::pow(rho, 4), r6 = std::pow(rho, 6);
  const double r7 = std::pow(rho, 7), r8 = std::pow(rho, 8), r9 = std::pow(rho, 9);
  const double r11 = std::pow(rho, 11);
  const double q132 = std::pow(q1, 1.5);
  const double a4 = 3.0 * beta - beta * beta + s * r3 - 3.0;
  const double a3 = 3.0 - 6.0 * beta - 0.25 * q1 * r4 + 4.0 * beta * beta -
                    std::pow(beta, 3) - 1.5 * q1 * q2 * r6 - 0.25 * q1 * q2 * q2 * r8 +
                    (3.0 - 2.0 * beta + beta * beta) * s * r3;
  const double a2 = 3.0 * beta - 1.5 * q1 * r4 - 3.0 * beta * beta + std::pow(beta, 3) +
                    0.75 * beta * q1 * r4 - 5.0 * q1 * q2 * r6 - 1.5 * q1 * q2 * q2 * r8 -
                    5.0 * s * r3 - 0.25 * q132 * std::sqrt(q2) * r7 -
                    1.5 * q132 * std::pow(q2, 1.5) * r9 - 0.25 * q132 * std::pow(q2, 2.5) * r11 +
                    8.0 * beta * s * r3 + 4.5 * beta * q1 * q2 * r6 -
                    4.0 * beta * beta * s * r3 + 0.75 * beta * q1 * q2 * q2 * r8 - 1.0;
  const double a1 = -0.25 * q1 * r4 + 0.25 * beta * q1 * r4 + 2.5 * q1 * q2 * r6 -
                    0.25 * q1 * q2 * q2 * r8 + s * r3 - 2.0 * beta * s * r3 -
                    2.5 * beta * q1 * q2 * r6 + beta * beta * s * r3 +
                    0.25 * beta * q1 * q2 * q2 * r8;
  const double a0 = -0.25 * q132 * std::sqrt(q2) * r7 - 1.5 * std::pow(q1 * q2, 1.5) * r9 -
                    0.25 * q132 * std::pow(q2, 2.5) * r11;
  return {a4, a3, a2, a1, a0};
}

bool jury_stable(const std::vector<double>& coeffs_desc) {
  const size_t n = coeffs_desc.size() - 1;  // degree
  if (coeffs_desc.empty() || !(coeffs_desc[0] > 0.0))
    throw std::invalid_argument("jury_stable: positive leading coefficient required");
  if (n == 0) return true;
  // ascending order: a[0] = constant term, a[n] = leading
  std::vector<double> a(coeffs_desc.rbegin(), coeffs_desc.rend());
  double p1 = 0.0, pm1 = 0.0;
  for (size_t i = 0; i <= n; ++i) {
    p1 += a[i];
    pm1 += (i % 2 == 0 ? a[i] : -a[i]);
  }
  if (!(p1 > 0.0)) return false;
  if (!((n % 2 == 0 ? pm1 : -pm1) > 0.0)) return false;
  if (!(std::abs(a[0]) < a[n])) return false;
  // Jury table reductions down to order 2
  std::vector<double> cur = a;
  while (cur.size() > 3) {
    const size_t m = cur.size() - 1;
    std::vector<double> next(m);
    for (size_t i = 0; i < m; ++i) next[i] = cur[0] * cur[i] - cur[m] * cur[m - i];
    if (!(std::abs(next[0]) > std::abs(next[m - 1]))) return false;
    cur = std::move(next);
  }
  return true;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd charpoly_coeffs(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd c(n + 1);
  c[0] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);  // Faddeev-LeVerrier
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[k - 1] * Eigen::MatrixXd::Identity(n, n);
    c[k] = -(m * mk).trace() / double(k);
  }
  return c;
}

StabilityReport check_feasibility(const AlgoParams& p, double mu) {
  p.validate();
  const double gamma = p.dither.gamma();
  const double mgr = mu * gamma * p.rho;

  StabilityReport report;
  const JuryQuadratic jq = jury_quadratic(p, mu);
  const MomentMatrix mm = build_moment_matrix(p, mu);
  report.spectral_radius_ae = spectral_radius(build_expectation_matrix(p, mu).a_e);
  report.spectral_radius_ams = spectral_radius(mm.a_ms);
  report.spectral_radius_ams_q2 = spectral_radius(mm.a_ms + mm.eps * mm.q2);

  const double q1w = mu * mu * p.dither.chi;
  const double q2w = p.dither.psi / std::pow(p.rho, 4);
  const auto qc = jury_quintic_coeffs(p.rho, p.beta, q1w, q2w);
  report.jury_quintic_pass = jury_stable({1.0, qc[0], qc[1], qc[2], qc[3], qc[4]});

  report.reasons.push_back(
      {"beta > mu*rho*gamma", p.beta, mgr, p.beta > mgr + kGuard, p.beta - mgr});
  report.reasons.push_back({"jury_quadratic (expectation dynamics stable)", jq.root_radius, 1.0,
                            jq.pass, 1.0 - jq.root_radius});
  report.reasons.push_back({"spectral_radius(a_ms) < 1", report.spectral_radius_ams, 1.0,
                            report.spectral_radius_ams < 1.0 - kGuard,
                            1.0 - report.spectral_radius_ams});
  report.reasons.push_back({"spectral_radius(a_ms + eps*q2) < 1", report.spectral_radius_ams_q2,
                            1.0, report.spectral_radius_ams_q2 < 1.0 - kGuard,
                            1.0 - report.spectral_radius_ams_q2});
  report.feasible = true;
  for (const auto& cond : report.reasons) report.feasible = report.feasible && cond.holds;
  return report;
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve_discrete_lyapunov: square matrix required");
  if (spectral_radius(a) >= 1.0)
    throw std::invalid_argument("solve_discrete_lyapunov: matrix must be Schur stable");
  // vec(A^T P A) = (A^T kron A^T) vec(P);  (I - A^T kron A^T) vec(P) = vec(I)
  const Eigen::MatrixXd at = a.transpose();
  Eigen::MatrixXd kron(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      kron.block(i * n, j * n, n, n) = at(i, j) * at;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n * n, n * n) - kron;
  Eigen::VectorXd rhs(n * n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = eye.col(j);
  const Eigen::VectorXd vec_p = lhs.partialPivLu().solve(rhs);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j) = vec_p.segment(j * n, n);
  return 0.5 * (p + p.transpose());
}

PracticalConvergenceReport verify_practical_convergence(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
    const Eigen::VectorXd& b1, const Eigen::VectorXd& b2, double eta, int trials,
    std::uint64_t seed, const Eigen::VectorXd* theta0, int steps) {
  const Eigen::Index n = a.rows();
  if (!(eta > 0.0)) throw std::invalid_argument("verify_practical_convergence: eta must be > 0");
  if (trials < 1 || steps < 8)
    throw std::invalid_argument("verify_practical_convergence: need trials >= 1, steps >= 8");
  if (spectral_radius(a) >= 1.0 || spectral_radius(a + eta * q1) >= 1.0 ||
      spectral_radius(a + eta * q2) >= 1.0)
    throw std::invalid_argument(
        "verify_practical_convergence: a, a+eta*q1, a+eta*q2 must all be Schur stable");

  PracticalConvergenceReport report;
  report.eta = eta;
  report.trials = trials;
  report.steps = steps;

  const Eigen::MatrixXd p = solve_discrete_lyapunov(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(p, Eigen::EigenvaluesOnly);
  report.lyapunov_min_eig = pe.eigenvalues().minCoeff();

  const Eigen::MatrixXd resolvent =
      (Eigen::MatrixXd::Identity(n, n) - a - eta * q2).partialPivLu().solve(
          Eigen::MatrixXd::Identity(n, n));
  const double res_norm = resolvent.jacobiSvd().singularValues()[0];
  report.bound_c = 2.0 * res_norm * std::max(b1.norm(), b2.norm()) + 2.0;

  const Eigen::MatrixXd lower_map = a + eta * q1;
  const Eigen::MatrixXd upper_map = a + eta * q2;
  const Eigen::VectorXd start = theta0 ? *theta0 : Eigen::VectorXd::Ones(n);
  double limsup = 0.0;
  const int tail_start = steps - steps / 4;  // limsup over the final quarter
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream stream(seed, std::uint64_t(trial));
    Eigen::VectorXd theta = start;
    Eigen::VectorXd lo(n), hi(n);
    for (int k = 0; k < steps; ++k) {
      lo = lower_map * theta + eta * b1;
      hi = upper_map * theta + eta * b2;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (lo[i] > hi[i])
          throw NumericalError("verify_practical_convergence: empty bracket (lower > upper)");
        theta[i] = lo[i] + (hi[i] - lo[i]) * stream.uniform01();
      }
      if (k >= tail_start) limsup = std::max(limsup, theta.norm());
    }
  }
  report.limsup_norm = limsup;
  report.pass = limsup <= report.bound_c * eta;
  return report;
}

RhoInterval sweep_rho(double beta, double eps, double chi, double psi, double mu, double rho_hi,
                      double tol) {
  if (!(rho_hi > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("sweep_rho: rho_hi and tol must be > 0");
  auto feasible = [&](double rho) {
    AlgoParams p{rho, beta, eps, DitherSpec{1.0, chi, psi}};
    return check_feasibility(p, mu).feasible;
  };
  RhoInterval out;
  if (feasible(rho_hi)) {
    out.rho_max = rho_hi;
    out.empty = false;
    return out;
  }
  double lo = rho_hi;
  for (int i = 0; i < 60 && lo > 1e-300; ++i) {
    lo /= 2.0;
    if (feasible(lo)) break;
  }
  if (!feasible(lo)) return out;  // nothing feasible down to 2^-60 rho_hi
  double hi = 2.0 * lo;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  out.rho_max = lo;
  out.empty = false;
  return out;
}

}  // namespace dses
