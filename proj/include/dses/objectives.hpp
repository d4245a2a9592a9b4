// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

namespace dses {

// Deterministic, side-effect-free objective. Safe for concurrent evaluation.
// `minimizer` is the study target of an experiment (the global minimizer for
// the quadratics and the logistic objective; the relevant local minimizer for
// the cosine-modulated one). `curvature_mu` is the exact second derivative at
// the minimizer when known in closed form (1-D quadratics).
struct Objective {
  int dim = 1;
  std::function<double(const Eigen::VectorXd&)> f;
  std::function<double(double)> f1;  // scalar fast path, dim == 1 only
  std::optional<Eigen::VectorXd> minimizer;
  std::optional<double> curvature_mu;

  double operator()(const Eigen::VectorXd& x) const { return f(x); }
  double operator()(double x) const { return f1(x); }
};

// J(x) = offset + (x - center)^T hessian (x - center).
// The hessian is stored as given, possibly asymmetric; only its symmetric part
// enters the value, and positive definiteness is required of that part.
struct QuadraticForm {
  double offset = 0.0;
  Eigen::VectorXd center;
  Eigen::MatrixXd hessian;

  void validate() const;
  double operator()(const Eigen::VectorXd& x) const;
};

Objective make_objective(const QuadraticForm& quad);

enum class PaperObjectiveId { quad1d, x2cos, logistic, quadNd };

PaperObjectiveId parse_objective_id(const std::string& id);
std::string to_string(PaperObjectiveId id);

// The four objective families used in the experiments:
//   quad1d    J(x) = 10000 + (x - x*)^2
//   x2cos     J(x) = 10000 + x^2 cos(0.2 x)        (x* selects the studied local minimum)
//   logistic  J(x) = 10000 + log(1+e^{x-x*}) + log(1+e^{x*-x})
//   quadNd    J(x) = 10000 + (x - x*)^T H (x - x*)
Objective make_paper_objective(PaperObjectiveId id, const Eigen::VectorXd& x_star,
                               const Eigen::MatrixXd& hessian = Eigen::MatrixXd());

// Exact curvature for quadratics; otherwise a central second difference at the
// minimizer with step 1e-4 * (1 + |x*|). Throws if the objective has no known
// minimizer or the estimate is non-positive. 1-D only.
double curvature_at_minimizer(const Objective& obj);

// Per-coordinate second derivatives at the minimizer (finite differences),
// used as 1-D surrogate curvatures for multidimensional feasibility checks.
Eigen::VectorXd coordinate_curvatures(const Objective& obj);

}  // namespace dses
