#pragma once

// Maximum-entropy (ME) method: f(x) = exp(-sum_k xi_k x^k), found by
// minimizing the convex dual
//   Gamma(xi_1..xi_n) = log int_0^1 exp(-sum_{k>=1} xi_k x^k) dx + sum_k xi_k m_k
// with damped Newton. Integrals use a 64-point Gauss-Legendre rule.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/moment_core.hpp"
#include "hmt/numerics/newton.hpp"
#include "hmt/numerics/quadrature.hpp"
#include "hmt/transforms/output.hpp"

namespace hmt {

inline constexpr int kMeQuadratureOrder = 64;

struct MeOptions {
  double tol = 1e-9;
  int max_iter = 200;
  double max_condition = 1e12;
};

struct MEParams {
  std::vector<double> xi;  // xi_0..xi_n
  double gradient_norm = 0.0;
  double condition = 1.0;
  int iterations = 0;
  NewtonStatus status = NewtonStatus::NotConverged;

  [[nodiscard]] bool converged() const { return status == NewtonStatus::Minimum; }
};

namespace detail {

// Exponents -sum_{k>=1} xi_k x^k at the quadrature nodes, shifted by their
// maximum so the weights cannot overflow.
struct MeDensity {
  std::vector<double> p;  // normalized density weights at the nodes (sum 1)
  double log_z = 0.0;     // log int_0^1 exp(-sum xi_k x^k) dx
};

inline MeDensity me_density(const GaussRule<double>& rule, const Eigen::VectorXd& xi) {
  const int q = static_cast<int>(rule.nodes.size());
  std::vector<double> e(q);
  double top = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < q; ++i) {
    const double x = 0.5 * (rule.nodes[i] + 1.0);
    double poly = 0.0;
    for (int k = static_cast<int>(xi.size()); k >= 1; --k) poly = poly * x + xi[k - 1];
    e[i] = -poly * x;
    top = std::max(top, e[i]);
  }
  MeDensity out;
  out.p.resize(q);
  double z = 0.0;
  for (int i = 0; i < q; ++i) {
    out.p[i] = 0.5 * rule.weights[i] * std::exp(e[i] - top);
    z += out.p[i];
  }
  for (auto& v : out.p) v /= z;
  out.log_z = top + std::log(z);
  return out;
}

}  // namespace detail

/// Solves for xi. Never throws on numerical failure: the status says whether
/// the gradient norm reached tol.
inline MEParams me_solve(const MomentSequence& m, const MeOptions& opt = {}) {
  const int n = m.order();
  if (n < 1) throw DomainError("me_solve: need at least m_1");
  std::vector<double> mom(n + 1);
  for (int k = 0; k <= n; ++k) mom[k] = m[k].to_double();
  const auto& rule = gauss_legendre_rule_cached(kMeQuadratureOrder);
  std::vector<std::vector<double>> powers(rule.nodes.size(), std::vector<double>(2 * n + 1, 1.0));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = 0.5 * (rule.nodes[i] + 1.0);
    for (int k = 1; k <= 2 * n; ++k) powers[i][k] = powers[i][k - 1] * x;
  }
  // E[x^k] under the current density, k = 0..2n
  auto expectations = [&](const detail::MeDensity& d) {
    std::vector<double> mu(2 * n + 1, 0.0);
    for (std::size_t i = 0; i < d.p.size(); ++i) {
      for (int k = 0; k <= 2 * n; ++k) mu[k] += d.p[i] * powers[i][k];
    }
    return mu;
  };
  auto objective = [&](const Eigen::VectorXd& xi) {
    const auto d = detail::me_density(rule, xi);
    double v = d.log_z;
    for (int k = 1; k <= n; ++k) v += xi[k - 1] * mom[k];
    return v;
  };
  auto gradient = [&](const Eigen::VectorXd& xi) {
    const auto mu = expectations(detail::me_density(rule, xi));
    Eigen::VectorXd g(n);
    for (int k = 1; k <= n; ++k) g[k - 1] = mom[k] - mu[k];
    return g;
  };
  auto hessian = [&](const Eigen::VectorXd& xi) {
    const auto mu = expectations(detail::me_density(rule, xi));
    Eigen::MatrixXd h(n, n);
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) h(j - 1, k - 1) = mu[j + k] - mu[j] * mu[k];
    return h;
  };
  NewtonOptions nopt;
  nopt.tol = opt.tol;
  nopt.max_iter = opt.max_iter;
  nopt.max_condition = opt.max_condition;
  const auto res = newton_minimize(objective, gradient, hessian, Eigen::VectorXd::Zero(n), nopt);
  MEParams out;
  out.status = res.status;
  out.gradient_norm = res.grad_norm;
  out.condition = res.condition;
  out.iterations = res.iterations;
  out.xi.resize(n + 1);
  for (int k = 1; k <= n; ++k) out.xi[k] = res.x[k - 1];
  out.xi[0] = detail::me_density(rule, res.x).log_z;
  return out;
}

/// int_0^x exp(-sum_k xi_k v^k) dv.
inline double me_cdf(const MEParams& params, double x) {
  if (x <= 0.0) return 0.0;
  x = std::min(x, 1.0);
  const auto& xi = params.xi;
  return gauss_legendre(
      [&](double v) {
        double poly = 0.0;
        for (int k = static_cast<int>(xi.size()) - 1; k >= 0; --k) poly = poly * v + xi[k];
        return std::exp(-poly);
      },
      0.0, x, kMeQuadratureOrder);
}

/// ME of order n = m.order(), sampled on U_n. Throws IllConditioned or
/// NotConverged when the solver did not reach its tolerance.
inline MethodOutput me_approx(const MomentSequence& m, const MeOptions& opt = {}) {
  detail::Stopwatch watch;
  const auto params = me_solve(m, opt);
  const double elapsed = watch.ms();
  if (params.status == NewtonStatus::IllConditioned) {
    throw IllConditioned("me: Hessian condition estimate exceeds the limit", params.condition);
  }
  if (!params.converged()) throw NotConverged("me: gradient norm above tolerance", params.gradient_norm);
  MethodOutput out;
  out.transform_ms = elapsed;
  out.method = Method::ME;
  out.n = m.order();
  out.samples = detail::sample_on(uniform_grid(m.order()), [&](double x) { return me_cdf(params, x); });
  out.diagnostics["xi"] = params.xi;
  out.diagnostics["gradient_norm"] = params.gradient_norm;
  out.diagnostics["iterations"] = params.iterations;
  return out;
}

}  // namespace hmt
