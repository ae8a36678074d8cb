#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/generators/rng.hpp"
#include "hmt/moment_core.hpp"
#include "hmt/numerics/special.hpp"

namespace hmt {

/// Mixture sum_i c_i Beta(a_i, b_i).
struct BetaMixtureSpec {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  [[nodiscard]] std::size_t size() const { return a.size(); }

  void validate() const {
    if (a.empty() || a.size() != b.size() || a.size() != c.size()) {
      throw DomainError("beta mixture: a, b, c must be nonempty and of equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > 0.0) || !(b[i] > 0.0) || !(c[i] > 0.0)) throw DomainError("beta mixture: entries must be positive");
      total += c[i];
    }
    if (std::fabs(total - 1.0) > 1e-12) throw WeightSumError("beta mixture: weights must sum to 1");
  }
};

/// Integer moment by the product formula prod_{r<n} (a+r)/(a+b+r).
template <class T = XReal>
T beta_mixture_moment(const BetaMixtureSpec& spec, int n) {
  if (n == 0) return T(1);
  T total(0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    T prod(1);
    const T a(spec.a[i]);
    const T ab = a + T(spec.b[i]);
    for (int r = 0; r < n; ++r) prod = prod * (a + T(r)) / (ab + T(r));
    total = total + T(spec.c[i]) * prod;
  }
  return total;
}

/// Complex moment m_z = sum_i c_i Gamma(a+z) Gamma(a+b) / (Gamma(a) Gamma(a+b+z)).
inline std::complex<double> beta_mixture_moment(const BetaMixtureSpec& spec, std::complex<double> z) {
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double a = spec.a[i];
    const double ab = a + spec.b[i];
    const auto lg = complex_log_gamma(a + z) + complex_log_gamma(std::complex<double>(ab)) -
                    complex_log_gamma(std::complex<double>(a)) - complex_log_gamma(ab + z);
    total += spec.c[i] * std::exp(lg);
  }
  return total;
}

inline ComplexX beta_mixture_moment(const BetaMixtureSpec& spec, const ComplexX& z) {
  ComplexX total;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const ComplexX a{XReal(spec.a[i])};
    const ComplexX ab{XReal(spec.a[i] + spec.b[i])};
    const ComplexX lg =
        complex_log_gamma(a + z) + complex_log_gamma(ab) - complex_log_gamma(a) - complex_log_gamma(ab + z);
    total = total + ComplexX(XReal(spec.c[i])) * exp(lg);
  }
  return total;
}

/// Moments m_0..m_n with m_0 = 1 exactly.
inline MomentSequence beta_mixture_moments(const BetaMixtureSpec& spec, int n) {
  std::vector<XReal> m(n + 1);
  m[0] = XReal(1);
  for (int k = 1; k <= n; ++k) m[k] = beta_mixture_moment<XReal>(spec, k);
  return MomentSequence(std::move(m));
}

/// sum_i c_i I_x(a_i, b_i).
inline double beta_mixture_cdf(const BetaMixtureSpec& spec, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) total += spec.c[i] * incomplete_beta(spec.a[i], spec.b[i], x);
  return total;
}

/// N ~ U{1..10}, a_i, b_i, c_i ~ U(0,10), c normalized.
inline BetaMixtureSpec random_beta_mixture(Rng& rng) {
  BetaMixtureSpec spec;
  const int n = static_cast<int>(rng.uniform_int(1, 10));
  spec.a.resize(n);
  spec.b.resize(n);
  spec.c.resize(n);
  for (auto& v : spec.a) v = rng.uniform(0.0, 10.0);
  for (auto& v : spec.b) v = rng.uniform(0.0, 10.0);
  double total = 0.0;
  for (auto& v : spec.c) total += (v = rng.uniform(0.0, 10.0));
  for (auto& v : spec.c) v /= total;
  return spec;
}

}  // namespace hmt
