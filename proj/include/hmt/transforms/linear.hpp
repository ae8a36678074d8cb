#pragma once

// The linear methods: binomial mixture (BM), Fourier-Legendre (FL) and
// Fourier-Chebyshev (FC). Each has a matrix path through the cached
// transform matrix and a direct path that evaluates the defining sums.

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

#include "hmt/moment_core.hpp"
#include "hmt/numerics/jacobi.hpp"
#include "hmt/transforms/digits.hpp"
#include "hmt/transforms/matrices.hpp"
#include "hmt/transforms/output.hpp"

namespace hmt {

enum class LinearMode { Matrix, Direct };

namespace detail {

/// Digits actually available: the working precision, and for XReal input
/// also the precision the moments carry.
template <class T>
int available_digits(const BasicMomentSequence<T>& m) {
  int have = working_digits();
  if constexpr (std::is_same_v<T, XReal>) {
    for (const auto& v : m.values()) {
      if (!v.is_zero()) have = std::min(have, v.digits());
    }
  }
  return have;
}

template <class T>
void require_digits(const BasicMomentSequence<T>& m, int need) {
  if constexpr (!std::is_same_v<T, Rational>) {
    const int have = available_digits(m);
    if (have < need) throw PrecisionInsufficient(have, need);
  }
}

template <class T>
const T& matrix_entry(const TransformMatrix& a, int i, int j) {
  if constexpr (std::is_same_v<T, Rational>) {
    return a.exact[static_cast<std::size_t>(i) * a.size() + j];
  } else {
    return a(i, j);
  }
}

}  // namespace detail

// ---------------------------------------------------------------- BM

/// h = A m without the precision check.
template <class T>
std::vector<T> bm_transform_unchecked(const BasicMomentSequence<T>& m, LinearMode mode = LinearMode::Matrix) {
  const int n = m.order();
  if (n < 1) throw DomainError("bm_transform: order must be >= 1");
  std::vector<T> h(n + 1, T(0));
  if (mode == LinearMode::Matrix) {
    const auto a = default_matrix_cache().get(MatrixKind::BM, n);
    for (int i = 0; i <= n; ++i) {
      T acc(0);
      for (int j = i; j <= n; ++j) acc += detail::matrix_entry<T>(*a, i, j) * m[j];
      h[i] = acc;
    }
    return h;
  }
  // h_k = sum_{i=k}^n C(n,i) C(i,k) (-1)^(i-k) m_i
  for (int k = 0; k <= n; ++k) {
    T acc(0);
    for (int i = k; i <= n; ++i) {
      BigInt c = binomial_exact(n, i) * binomial_exact(i, k);
      if ((i - k) % 2) c = -c;
      acc += T(c) * m[i];
    }
    h[k] = acc;
  }
  return h;
}

/// Masses h_0..h_n of the binomial mixture. Throws PrecisionInsufficient
/// when fewer than required_digits(BM, n) digits are available.
template <class T>
std::vector<T> bm_transform(const BasicMomentSequence<T>& m, LinearMode mode = LinearMode::Matrix) {
  detail::require_digits(m, required_digits(MatrixKind::BM, std::max(1, m.order())));
  return bm_transform_unchecked(m, mode);
}

/// sum_{k <= floor(n x)} h_k, and 0 at x = 0.
inline double bm_cdf(const std::vector<double>& h, double x) {
  if (x <= 0.0) return 0.0;
  const int n = static_cast<int>(h.size()) - 1;
  const int top = std::min(n, static_cast<int>(std::floor(n * x + 1e-12)));
  double s = 0.0;
  for (int k = 0; k <= top; ++k) s += h[k];
  return s;
}

// ---------------------------------------------------------------- FL / FC

namespace detail {

// sum_j C(r,j) C(r,m-j) sum_k C(m-j,k) (-1)^k (1 - m_{m-k+1}) / (m-k+1),
// with r = m for FL and r = m - 1/2 for FC.
template <class T>
T fourier_inner_sum(const BasicMomentSequence<T>& mom, int m, const T& r) {
  T total(0);
  for (int j = 0; j <= m; ++j) {
    const T front = binomial_general(r, j) * binomial_general(r, m - j);
    T inner(0);
    for (int k = 0; k <= m - j; ++k) {
      T term = T(binomial_exact(m - j, k)) * (T(1) - mom[m - k + 1]) / T(m - k + 1);
      if (k % 2) term = -term;
      inner += term;
    }
    total += front * inner;
  }
  return total;
}

template <class T>
std::vector<T> matrix_coeffs(const BasicMomentSequence<T>& mom, MatrixKind kind) {
  const int n = mom.order() - 1;
  const auto a = default_matrix_cache().get(kind, n);
  // A 1 and A mhat are formed separately, then subtracted
  std::vector<T> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    T ones(0);
    T mhat(0);
    for (int l = 0; l <= k; ++l) {
      const T& e = matrix_entry<T>(*a, k, l);
      ones += e;
      mhat += e * mom[l + 1];
    }
    c[k] = ones - mhat;
  }
  return c;
}

}  // namespace detail

/// FL coefficients c_0..c_n from m_0..m_{n+1}, without the precision check.
template <class T>
std::vector<T> fl_coeffs_unchecked(const BasicMomentSequence<T>& mom, LinearMode mode = LinearMode::Matrix) {
  const int n = mom.order() - 1;
  if (n < 0) throw DomainError("fl_coeffs: need at least m_1");
  if (mode == LinearMode::Matrix) return detail::matrix_coeffs(mom, MatrixKind::FL);
  std::vector<T> c(n + 1);
  for (int m = 0; m <= n; ++m) c[m] = T(2 * m + 1) * detail::fourier_inner_sum(mom, m, T(m));
  return c;
}

template <class T>
std::vector<T> fl_coeffs(const BasicMomentSequence<T>& mom, LinearMode mode = LinearMode::Matrix) {
  detail::require_digits(mom, required_digits(MatrixKind::FL, std::max(1, mom.order() - 1)));
  return fl_coeffs_unchecked(mom, mode);
}

/// FC coefficients (XReal only: the generalized binomials are irrational).
inline std::vector<XReal> fc_coeffs_unchecked(const MomentSequence& mom, LinearMode mode = LinearMode::Matrix) {
  const int n = mom.order() - 1;
  if (n < 0) throw DomainError("fc_coeffs: need at least m_1");
  if (mode == LinearMode::Matrix) return detail::matrix_coeffs(mom, MatrixKind::FC);
  std::vector<XReal> c(n + 1);
  const XReal half(0.5);
  for (int m = 0; m <= n; ++m) c[m] = fc_norm_factor(m) * detail::fourier_inner_sum(mom, m, XReal(m) - half);
  return c;
}

inline std::vector<XReal> fc_coeffs(const MomentSequence& mom, LinearMode mode = LinearMode::Matrix) {
  detail::require_digits(mom, required_digits(MatrixKind::FL, std::max(1, mom.order() - 1)));
  return fc_coeffs_unchecked(mom, mode);
}

/// sum_m c_m R_m(x) with shifted Legendre R_m.
inline double fl_cdf(const std::vector<double>& c, double x) {
  const auto r = shifted_jacobi_all<double>(0.0, 0.0, static_cast<int>(c.size()) - 1, x);
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * r[m];
  return s;
}

/// x^(-1/2) (1-x)^(-1/2) sum_m c_m R_m^(-1/2,-1/2)(x) on (0,1), x at 0 and 1.
inline double fc_cdf(const std::vector<double>& c, double x) {
  if (x <= 0.0 || x >= 1.0) return x <= 0.0 ? 0.0 : 1.0;
  const auto r = shifted_jacobi_all<double>(-0.5, -0.5, static_cast<int>(c.size()) - 1, x);
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * r[m];
  return s / std::sqrt(x * (1.0 - x));
}

namespace detail {

template <class T>
std::vector<double> to_doubles(const std::vector<T>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline json coeff_json(const std::vector<double>& c) { return json(c); }

}  // namespace detail

/// BM of order n = m.order(), sampled on U_{n+1}.
inline MethodOutput bm_approx(const MomentSequence& m, LinearMode mode = LinearMode::Matrix) {
  detail::Stopwatch watch;
  const auto h = detail::to_doubles(bm_transform(m, mode));
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::BM;
  out.n = m.order();
  out.samples = detail::sample_on(uniform_grid(m.order() + 1), [&](double x) { return bm_cdf(h, x); });
  out.diagnostics["masses"] = detail::coeff_json(h);
  return out;
}

/// FL of order n-1 from m_0..m_n, sampled on U_n.
inline MethodOutput fl_approx(const MomentSequence& m, LinearMode mode = LinearMode::Matrix) {
  detail::Stopwatch watch;
  const auto c = detail::to_doubles(fl_coeffs(m, mode));
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::FL;
  out.n = m.order();
  out.samples = detail::sample_on(uniform_grid(m.order()), [&](double x) { return fl_cdf(c, x); });
  out.diagnostics["coefficients"] = detail::coeff_json(c);
  return out;
}

/// FC of order n-1 from m_0..m_n, sampled on U_n.
inline MethodOutput fc_approx(const MomentSequence& m, LinearMode mode = LinearMode::Matrix) {
  detail::Stopwatch watch;
  const auto c = detail::to_doubles(fc_coeffs(m, mode));
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::FC;
  out.n = m.order();
  out.samples = detail::sample_on(uniform_grid(m.order()), [&](double x) { return fc_cdf(c, x); });
  out.diagnostics["coefficients"] = detail::coeff_json(c);
  return out;
}

}  // namespace hmt
