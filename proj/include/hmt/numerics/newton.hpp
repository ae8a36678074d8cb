#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace hmt {

enum class NewtonStatus { Minimum, NotConverged, IllConditioned };

struct NewtonResult {
  NewtonStatus status = NewtonStatus::NotConverged;
  Eigen::VectorXd x;
  double grad_norm = std::numeric_limits<double>::infinity();
  double condition = 1.0;  // last Hessian condition estimate
  int iterations = 0;

  [[nodiscard]] bool converged() const { return status == NewtonStatus::Minimum; }
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double max_condition = 1e12;
  int max_halvings = 60;
};

/// Damped Newton for a smooth convex objective. The step is halved until
/// the objective decreases. Convergence is declared only on the gradient
/// norm; a Hessian beyond max_condition stops the iteration.
template <class Objective, class Gradient, class Hessian>
NewtonResult newton_minimize(Objective&& f, Gradient&& grad, Hessian&& hess, Eigen::VectorXd x0,
                             const NewtonOptions& opt = {}) {
  NewtonResult out;
  out.x = std::move(x0);
  double fx = f(out.x);
  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    const Eigen::VectorXd g = grad(out.x);
    out.grad_norm = g.norm();
    out.iterations = iter;
    if (!std::isfinite(out.grad_norm) || !std::isfinite(fx)) {
      out.status = NewtonStatus::NotConverged;
      return out;
    }
    if (out.grad_norm <= opt.tol) {
      out.status = NewtonStatus::Minimum;
      return out;
    }
    if (iter == opt.max_iter) break;
    const Eigen::MatrixXd h = hess(out.x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(out.condition <= opt.max_condition)) {
      out.status = NewtonStatus::IllConditioned;
      return out;
    }
    const Eigen::VectorXd step = h.ldlt().solve(-g);
    double t = 1.0;
    bool decreased = false;
    for (int k = 0; k < opt.max_halvings; ++k) {
      const Eigen::VectorXd trial = out.x + t * step;
      const double ft = f(trial);
      if (std::isfinite(ft) && ft <= fx) {
        out.x = trial;
        fx = ft;
        decreased = true;
        break;
      }
      t *= 0.5;
    }
    if (!decreased) break;
  }
  out.status = NewtonStatus::NotConverged;
  return out;
}

}  // namespace hmt
