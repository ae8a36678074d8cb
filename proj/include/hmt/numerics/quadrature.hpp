#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

/// Gauss-Legendre nodes and weights on [-1, 1].
template <class Real>
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

template <class Real>
GaussRule<Real> gauss_legendre_rule(int order) {
  using std::abs;
  using std::cos;
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussRule<Real> rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const Real tol = [] {
    if constexpr (std::is_same_v<Real, double>) {
      return 1e-15;
    } else {
      return pow(Real(10), -static_cast<long>(working_digits()));
    }
  }();
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real x(std::cos(M_PI * (i + 0.75) / (order + 0.5)));
    Real dp(0);
    for (int iter = 0; iter < 100; ++iter) {
      Real p0(1);
      Real p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = Real(1);
      // derivative from P_n and P_{n-1}
      dp = Real(order) * (x * p1 - p0) / (x * x - Real(1));
      Real dx = p1 / dp;
      x = x - dx;
      if (abs(dx) <= tol) break;
    }
    // final derivative at the converged node
    Real p0(1);
    Real p1 = x;
    for (int k = 2; k <= order; ++k) {
      Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
      p0 = p1;
      p1 = p2;
    }
    if (order == 1) p0 = Real(1);
    dp = Real(order) * (x * p1 - p0) / (x * x - Real(1));
    const Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = Real(0);
  return rule;
}

/// Double-precision rules are shared across threads after first use.
inline const GaussRule<double>& gauss_legendre_rule_cached(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule<double>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule<double>>(gauss_legendre_rule<double>(order));
  return *slot;
}

/// Integral of f over [a, b]; exact for polynomials of degree <= 2 order - 1.
template <class F>
double gauss_legendre(F&& f, double a, double b, int order) {
  const auto& rule = gauss_legendre_rule_cached(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {
template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre(f, a, mid, 10);
  const double right = gauss_legendre(f, mid, b, 10);
  if (depth <= 0 || std::fabs(left + right - whole) <= tol) return left + right;
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive bisection of 10-point Gauss-Legendre panels.
template <class F>
double adaptive_integrate(F&& f, double a, double b, double tol = 1e-10, int max_depth = 30) {
  const double whole = gauss_legendre(f, a, b, 10);
  return detail::adaptive_step(f, a, b, whole, tol, max_depth);
}

}  // namespace hmt
