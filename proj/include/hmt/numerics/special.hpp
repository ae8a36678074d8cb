#pragma once

// Special functions: binomials (exact and generalized), complex log-gamma,
// and the regularized incomplete beta function.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "hmt/errors.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

/// Exact C(n, k) for nonnegative integers; zero outside 0 <= k <= n.
inline BigInt binomial_exact(long n, long k) {
  if (k < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

/// C(r, k) = r (r-1) ... (r-k+1) / k! for real r and integer k >= 0.
template <class Real>
Real binomial_general(const Real& r, int k) {
  Real out(1);
  for (int i = 0; i < k; ++i) {
    out = out * (r - Real(i)) / Real(i + 1);
  }
  return out;
}

/// Principal-branch log Gamma on the complex plane (Lanczos, g = 7, with
/// reflection for Re z < 1/2).
inline std::complex<double> complex_log_gamma(std::complex<double> z) {
  static constexpr std::array<double, 9> kCoeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  static constexpr double kG = 7.0;
  static const double kHalfLog2Pi = 0.5 * std::log(2.0 * M_PI);

  if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real()) {
    throw DomainError("log-gamma pole at nonpositive integer");
  }
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(M_PI) - std::log(std::sin(M_PI * z)) - complex_log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> acc = kCoeff[0];
  for (std::size_t i = 1; i < kCoeff.size(); ++i) {
    acc += kCoeff[i] / (z + static_cast<double>(i));
  }
  const std::complex<double> t = z + kG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

/// Extended-precision complex number; only the operations the moment code
/// needs.
struct ComplexX {
  XReal re;
  XReal im;

  ComplexX() : re(0), im(0) {}
  ComplexX(XReal r, XReal i = XReal(0)) : re(std::move(r)), im(std::move(i)) {}
  explicit ComplexX(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  [[nodiscard]] const XReal& real() const { return re; }
  [[nodiscard]] const XReal& imag() const { return im; }

  friend ComplexX operator+(const ComplexX& a, const ComplexX& b) { return {a.re + b.re, a.im + b.im}; }
  friend ComplexX operator-(const ComplexX& a, const ComplexX& b) { return {a.re - b.re, a.im - b.im}; }
  friend ComplexX operator-(const ComplexX& a) { return {-a.re, -a.im}; }
  friend ComplexX operator*(const ComplexX& a, const ComplexX& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexX operator/(const ComplexX& a, const ComplexX& b) {
    const XReal d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  [[nodiscard]] std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline XReal abs(const ComplexX& z) { return sqrt(z.re * z.re + z.im * z.im); }
inline ComplexX exp(const ComplexX& z) {
  const XReal r = exp(z.re);
  return {r * cos(z.im), r * sin(z.im)};
}
/// Principal branch.
inline ComplexX log(const ComplexX& z) { return {log(abs(z)), atan2(z.im, z.re)}; }
inline ComplexX sqrt(const ComplexX& z) {
  if (z.re.is_zero() && z.im.is_zero()) return z;
  const XReal r = abs(z);
  const XReal a = sqrt((r + abs(z.re)) / XReal(2));
  if (z.re >= XReal(0)) return {a, z.im / (XReal(2) * a)};
  const XReal b = z.im < XReal(0) ? -a : a;
  return {abs(z.im) / (XReal(2) * a), b};
}

inline ComplexX complex_log_gamma(const ComplexX& z) {
  const auto w = complex_log_gamma(z.to_complex());
  return {XReal(w.real()), XReal(w.imag())};
}

namespace detail {
// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}
}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw DomainError("incomplete_beta: shape parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace hmt
