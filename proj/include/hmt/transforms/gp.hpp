#pragma once

// Gil-Pelaez (GP) inversion from imaginary moments m_{js} = E[X^{js}]:
//   F(x) ~ 1/2 - (ds / 2 pi) sum_{i=1}^N (r(s_i, x) + r(s_{i-1}, x)),
//   r(s, x) = Im(e^{-js log x} m_{js}) / s,  s_i = i ds,  N = floor(upsilon / ds).
// r(0, x) is the limit Im(m_{j h}) / h - log x with h = 1e-6.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/polish.hpp"
#include "hmt/transforms/output.hpp"

namespace hmt {

/// s -> m_{js}.
using ImagMomentFn = std::function<std::complex<double>(double)>;

inline constexpr double kGpLimitStep = 1e-6;
inline constexpr double kGpDefaultMaxPoints = 3e6;

/// The imaginary moments m_{j s_i}, i = 0..N, shared by every x.
class GpTable {
 public:
  GpTable(const ImagMomentFn& fn, double ds, double upsilon, double max_points = kGpDefaultMaxPoints)
      : ds_(ds), upsilon_(upsilon) {
    if (!(ds > 0.0) || !(upsilon > 0.0)) throw DomainError("gp: ds and upsilon must be positive");
    const double n = std::floor(upsilon / ds + 1e-9);
    if (n + 1 > max_points) throw MemoryGuardError(ds, upsilon, n + 1);
    const auto count = static_cast<std::size_t>(n);
    values_.resize(count + 1);
    for (std::size_t i = 1; i <= count; ++i) values_[i] = fn(static_cast<double>(i) * ds);
    limit_im_ = fn(kGpLimitStep).imag() / kGpLimitStep;
  }

  [[nodiscard]] double ds() const { return ds_; }
  [[nodiscard]] double upsilon() const { return upsilon_; }
  [[nodiscard]] std::size_t intervals() const { return values_.size() - 1; }

  /// Trapezoid value at x in (0, 1]; 0 for x <= 0.
  [[nodiscard]] double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double lx = std::log(x);
    const std::size_t n = intervals();
    double sum = 0.0;
    const double r0 = limit_im_ - lx;
    // sum_{i=1}^N (r_i + r_{i-1}) = r_0 + 2 sum_{i=1}^{N-1} r_i + r_N
    double inner = 0.0;
    double r_last = r0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double s = static_cast<double>(i) * ds_;
      const std::complex<double> m = values_[i];
      const double r = (m.imag() * std::cos(s * lx) - m.real() * std::sin(s * lx)) / s;
      if (i < n) inner += r;
      r_last = r;
    }
    sum = n == 0 ? 0.0 : r0 + 2.0 * inner + r_last;
    return 0.5 - ds_ / (2.0 * M_PI) * sum;
  }

 private:
  double ds_;
  double upsilon_;
  double limit_im_ = 0.0;
  std::vector<std::complex<double>> values_;
};

inline double gp_cdf(const ImagMomentFn& fn, double x, double ds, double upsilon,
                     double max_points = kGpDefaultMaxPoints) {
  return GpTable(fn, ds, upsilon, max_points).cdf(x);
}

struct GpDynamicOptions {
  double ds = 0.1;
  double upsilon = 1000.0;
  double eps = 1e-3;
  double max_points = kGpDefaultMaxPoints;
};

struct GpDynamicResult {
  SampledCdf samples;
  double ds = 0.0;
  double upsilon = 0.0;
  int refinements = 0;
};

/// Starts at (ds, upsilon) and, while a sample leaves [-eps, 1 + eps],
/// moves to (ds/3, 3 upsilon). Throws MemoryGuardError, carrying the last
/// evaluated pair, once the next pair needs more than max_points samples.
inline GpDynamicResult gp_dynamic(const ImagMomentFn& fn, const std::vector<double>& grid,
                                  const GpDynamicOptions& opt = {}) {
  double ds = opt.ds;
  double upsilon = opt.upsilon;
  int refinements = 0;
  for (;;) {
    const double points = std::floor(upsilon / ds + 1e-9) + 1;
    if (points > opt.max_points) {
      if (refinements == 0) throw MemoryGuardError(ds, upsilon, points);
      throw MemoryGuardError(ds * 3.0, upsilon / 3.0, points);
    }
    const GpTable table(fn, ds, upsilon, opt.max_points);
    SampledCdf s{grid, {}};
    bool inside = true;
    for (double x : grid) {
      const double v = table.cdf(x);
      s.values.push_back(v);
      if (!(v >= -opt.eps && v <= 1.0 + opt.eps)) inside = false;
    }
    if (inside) return {std::move(s), ds, upsilon, refinements};
    ds /= 3.0;
    upsilon *= 3.0;
    ++refinements;
  }
}

/// GP on U_150 with the dynamic parameter rule.
inline MethodOutput gp_approx(const ImagMomentFn& fn, const GpDynamicOptions& opt = {}) {
  detail::Stopwatch watch;
  auto res = gp_dynamic(fn, uniform_grid(150), opt);
  MethodOutput out;
  out.transform_ms = watch.ms();
  out.method = Method::GP;
  out.n = 150;
  out.samples = std::move(res.samples);
  out.diagnostics["ds"] = res.ds;
  out.diagnostics["upsilon"] = res.upsilon;
  out.diagnostics["refinements"] = res.refinements;
  return out;
}

}  // namespace hmt
