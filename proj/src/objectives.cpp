// SPDX-License-Identifier: Apache-2.0
#include "dses/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace dses {
namespace {

// log(1 + e^u) without overflow for large |u|
double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double quad_value(const Eigen::MatrixXd& h, const Eigen::VectorXd& c, double offset,
                  const Eigen::VectorXd& x) {
  // hand-rolled (x-c)^T H (x-c); no temporaries, safe for concurrent callers
  const auto n = c.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double di = x[i] - c[i];
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) row += h(i, j) * (x[j] - c[j]);
    acc += di * row;
  }
  return offset + acc;
}

double second_difference(const std::function<double(double)>& f, double x, double step) {
  return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

}  // namespace

void QuadraticForm::validate() const {
  if (center.size() < 1) throw std::invalid_argument("QuadraticForm: empty center");
  if (hessian.rows() != center.size() || hessian.cols() != center.size())
    throw std::invalid_argument("QuadraticForm: hessian/center dimension mismatch");
  const Eigen::MatrixXd sym = 0.5 * (hessian + hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("QuadraticForm: symmetric part of hessian is not positive definite");
}

double QuadraticForm::operator()(const Eigen::VectorXd& x) const {
  return quad_value(hessian, center, offset, x);
}

Objective make_objective(const QuadraticForm& quad) {
  quad.validate();
  Objective obj;
  obj.dim = static_cast<int>(quad.center.size());
  obj.minimizer = quad.center;
  const QuadraticForm q = quad;
  obj.f = [q](const Eigen::VectorXd& x) { return q(x); };
  if (obj.dim == 1) {
    const double h = q.hessian(0, 0), c = q.center[0], off = q.offset;
    obj.f1 = [h, c, off](double x) { return off + h * (x - c) * (x - c); };
    obj.curvature_mu = 2.0 * h;
  }
  return obj;
}

PaperObjectiveId parse_objective_id(const std::string& id) {
  if (id == "quad1d") return PaperObjectiveId::quad1d;
  if (id == "x2cos") return PaperObjectiveId::x2cos;
  if (id == "logistic") return PaperObjectiveId::logistic;
  if (id == "quadNd") return PaperObjectiveId::quadNd;
  throw std::invalid_argument("unknown objective id: " + id);
}

std::string to_string(PaperObjectiveId id) {
  switch (id) {
    case PaperObjectiveId::quad1d: return "quad1d";
    case PaperObjectiveId::x2cos: return "x2cos";
    case PaperObjectiveId::logistic: return "logistic";
    case PaperObjectiveId::quadNd: return "quadNd";
  }
  return "?";
}

Objective make_paper_objective(PaperObjectiveId id, const Eigen::VectorXd& x_star,
                               const Eigen::MatrixXd& hessian) {
  switch (id) {
    case PaperObjectiveId::quad1d: {
      if (x_star.size() != 1) throw std::invalid_argument("quad1d: x_star must be scalar");
      QuadraticForm q{10000.0, x_star, Eigen::MatrixXd::Identity(1, 1)};
      return make_objective(q);
    }
    case PaperObjectiveId::x2cos: {
      if (x_star.size() != 1) throw std::invalid_argument("x2cos: x_star must be scalar");
      Objective obj;
      obj.dim = 1;
      obj.f1 = [](double x) { return 10000.0 + x * x * std::cos(0.2 * x); };
      obj.f = [g = obj.f1](const Eigen::VectorXd& x) { return g(x[0]); };
      obj.minimizer = x_star;
      return obj;
    }
    case PaperObjectiveId::logistic: {
      if (x_star.size() != 1) throw std::invalid_argument("logistic: x_star must be scalar");
      const double c = x_star[0];
      Objective obj;
      obj.dim = 1;
      obj.f1 = [c](double x) { return 10000.0 + softplus(x - c) + softplus(c - x); };
      obj.f = [g = obj.f1](const Eigen::VectorXd& x) { return g(x[0]); };
      obj.minimizer = x_star;
      return obj;
    }
    case PaperObjectiveId::quadNd: {
      if (hessian.size() == 0) throw std::invalid_argument("quadNd: hessian required");
      QuadraticForm q{10000.0, x_star, hessian};
      return make_objective(q);
    }
  }
  throw std::invalid_argument("unreachable objective id");
}

double curvature_at_minimizer(const Objective& obj) {
  if (!obj.minimizer) throw std::invalid_argument("curvature_at_minimizer: no known minimizer");
  if (obj.dim != 1) throw std::invalid_argument("curvature_at_minimizer: 1-D objectives only");
  if (obj.curvature_mu) return *obj.curvature_mu;
  const double xs = (*obj.minimizer)[0];
  const double step = 1e-4 * (1.0 + std::abs(xs));
  const double mu = second_difference(obj.f1, xs, step);
  if (!(mu > 0.0))
    throw std::domain_error("curvature_at_minimizer: non-positive second-derivative estimate");
  return mu;
}

Eigen::VectorXd coordinate_curvatures(const Objective& obj) {
  if (!obj.minimizer) throw std::invalid_argument("coordinate_curvatures: no known minimizer");
  const Eigen::VectorXd& xs = *obj.minimizer;
  Eigen::VectorXd mu(obj.dim);
  for (int j = 0; j < obj.dim; ++j) {
    const double step = 1e-4 * (1.0 + std::abs(xs[j]));
    Eigen::VectorXd hi = xs, lo = xs;
    hi[j] += step;
    lo[j] -= step;
    mu[j] = (obj.f(hi) - 2.0 * obj.f(xs) + obj.f(lo)) / (step * step);
    if (!(mu[j] > 0.0))
      throw std::domain_error("coordinate_curvatures: non-positive estimate");
  }
  return mu;
}

}  // namespace dses
