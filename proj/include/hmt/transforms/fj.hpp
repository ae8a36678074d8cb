#pragma once

// Fourier-Jacobi (FJ) method: the density is expanded in shifted Jacobi
// polynomials with (alpha, beta) fitted so that c_1 = c_2 = 0.

#include <cmath>
#include <vector>

#include "hmt/moment_core.hpp"
#include "hmt/numerics/jacobi.hpp"
#include "hmt/numerics/special.hpp"
#include "hmt/transforms/output.hpp"

namespace hmt {

struct FjParams {
  XReal alpha;
  XReal beta;
};

/// alpha + 1 = (m1 - m2)(1 - m1) / (m2 - m1^2), beta + 1 = (alpha + 1) m1 / (1 - m1).
inline FjParams fj_params(const XReal& m1, const XReal& m2) {
  if (!(m1 > XReal(0)) || !(m1 < XReal(1))) throw Degenerate("fj_params: m1 must lie in (0,1)");
  const XReal var = m2 - m1 * m1;
  if (!(var > XReal(0))) throw Degenerate("fj_params: m2 = m1^2 (point mass)");
  const XReal a1 = (m1 - m2) * (XReal(1) - m1) / var;
  const XReal b1 = a1 * m1 / (XReal(1) - m1);
  if (!(a1 > XReal(0)) || !(b1 > XReal(0))) throw Degenerate("fj_params: alpha and beta must exceed -1");
  return {a1 - XReal(1), b1 - XReal(1)};
}

struct FjCoefficients {
  FjParams params;
  std::vector<XReal> c;  // c_0..c_n
};

/// c_m = (1/eta_m) sum_j C(m+alpha, j) C(m+beta, m-j) sum_k C(m-j, k) (-1)^k m_{m-k},
/// m = 0..n (n defaults to the sequence order). The parameters always use m_1, m_2.
inline FjCoefficients fj_coeffs(const MomentSequence& mom, int n = -1) {
  if (n < 0) n = mom.order();
  if (mom.order() < 2) throw DomainError("fj_coeffs: need m_1 and m_2");
  if (n > mom.order()) throw DomainError("fj_coeffs: order exceeds the sequence");
  FjCoefficients out{fj_params(mom[1], mom[2]), {}};
  const XReal& alpha = out.params.alpha;
  const XReal& beta = out.params.beta;
  out.c.reserve(n + 1);
  for (int m = 0; m <= n; ++m) {
    XReal total(0);
    for (int j = 0; j <= m; ++j) {
      const XReal front = binomial_general(XReal(m) + alpha, j) * binomial_general(XReal(m) + beta, m - j);
      XReal inner(0);
      for (int k = 0; k <= m - j; ++k) {
        XReal term = XReal(binomial_exact(m - j, k)) * mom[m - k];
        if (k % 2) term = -term;
        inner += term;
      }
      total += front * inner;
    }
    out.c.push_back(total / jacobi_eta(alpha, beta, m));
  }
  return out;
}

/// I_x(beta+1, alpha+1) - sum_{k>=1} (c_k/k) w^(alpha+1,beta+1)(x) R_{k-1}^(alpha+1,beta+1)(x),
/// with w^(a,b)(x) = (1-x)^a x^b.
inline double fj_cdf(double alpha, double beta, const std::vector<double>& c, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double f = incomplete_beta(beta + 1.0, alpha + 1.0, x);
  const int n = static_cast<int>(c.size()) - 1;
  if (n >= 1) {
    const double w = std::pow(1.0 - x, alpha + 1.0) * std::pow(x, beta + 1.0);
    const auto r = shifted_jacobi_all<double>(alpha + 1.0, beta + 1.0, n - 1, x);
    for (int k = 1; k <= n; ++k) f -= c[k] / k * w * r[k - 1];
  }
  return f;
}

/// FJ of order n (default m.order()), sampled on U_n.
inline MethodOutput fj_approx(const MomentSequence& m, int n = -1) {
  if (n < 0) n = m.order();
  detail::Stopwatch watch;
  const auto fit = fj_coeffs(m, n);
  std::vector<double> c;
  for (const auto& v : fit.c) c.push_back(v.to_double());
  const double alpha = fit.params.alpha.to_double();
  const double beta = fit.params.beta.to_double();
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::FJ;
  out.n = n;
  out.samples = detail::sample_on(uniform_grid(n), [&](double x) { return fj_cdf(alpha, beta, c, x); });
  out.diagnostics["alpha"] = alpha;
  out.diagnostics["beta"] = beta;
  out.diagnostics["coefficients"] = c;
  return out;
}

}  // namespace hmt
