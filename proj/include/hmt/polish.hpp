#pragma once

// Turning raw cdf samples into a proper cdf (tweak + monotone cubic
// interpolation) and measuring L1 / L-infinity distances between cdfs.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/quadrature.hpp"

namespace hmt {

/// u_i = i / n, i = 0..n.
inline std::vector<double> uniform_grid(int n) {
  std::vector<double> u(n + 1);
  for (int i = 0; i <= n; ++i) u[i] = static_cast<double>(i) / n;
  return u;
}

struct SampledCdf {
  std::vector<double> grid;
  std::vector<double> values;

  void validate() const {
    if (grid.size() < 2 || grid.size() != values.size()) throw DomainError("sampled cdf: need >= 2 matching points");
    if (grid.front() != 0.0 || grid.back() != 1.0) throw DomainError("sampled cdf: grid must span [0,1]");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) throw DomainError("sampled cdf: grid must be increasing");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("sampled cdf: values must be finite");
    }
  }
};

/// Clamp to [0,1], pin F(0) = 0 and F(1) = 1, then a left-to-right running
/// maximum.
inline std::vector<double> tweak(const SampledCdf& raw) {
  raw.validate();
  std::vector<double> v = raw.values;
  for (auto& x : v) x = std::clamp(x, 0.0, 1.0);
  v.front() = 0.0;
  v.back() = 1.0;
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
  return v;
}

/// Piecewise cubic on a grid; on [x_k, x_{k+1}] the value is
/// c[k][0] + c[k][1] u + c[k][2] u^2 + c[k][3] u^3 with u = x - x_k.
class PolishedCdf {
 public:
  using Coeffs = std::array<double, 4>;

  PolishedCdf(std::vector<double> grid, std::vector<double> values, std::vector<Coeffs> coeffs)
      : grid_(std::move(grid)), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

  /// Continuous piecewise-linear interpolant; used as an oracle.
  static PolishedCdf linear(std::vector<double> grid, std::vector<double> values) {
    std::vector<Coeffs> c(grid.size() - 1);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      c[k] = {values[k], (values[k + 1] - values[k]) / (grid[k + 1] - grid[k]), 0.0, 0.0};
    }
    return PolishedCdf(std::move(grid), std::move(values), std::move(c));
  }

  [[nodiscard]] const std::vector<double>& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] const std::vector<Coeffs>& coeffs() const { return coeffs_; }
  [[nodiscard]] int intervals() const { return static_cast<int>(coeffs_.size()); }

  [[nodiscard]] int interval_of(double x) const {
    if (x <= grid_.front()) return 0;
    if (x >= grid_.back()) return intervals() - 1;
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    return static_cast<int>(it - grid_.begin()) - 1;
  }

  double operator()(double x) const {
    const int k = interval_of(x);
    // exact node values, so the interpolant reproduces them bit for bit
    if (x == grid_[k]) return values_[k];
    if (x == grid_[k + 1]) return values_[k + 1];
    const double u = x - grid_[k];
    const auto& c = coeffs_[k];
    return c[0] + u * (c[1] + u * (c[2] + u * c[3]));
  }

  /// Samples (x, F(x)) at `resolution` + 1 equally spaced points as CSV.
  [[nodiscard]] std::string to_csv(int resolution) const {
    std::ostringstream os;
    os.precision(17);
    os << "x,F\n";
    for (int i = 0; i <= resolution; ++i) {
      const double x = static_cast<double>(i) / resolution;
      os << x << ',' << (*this)(x) << '\n';
    }
    return os.str();
  }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<Coeffs> coeffs_;
};

/// Fritsch-Carlson monotone cubic Hermite interpolant of nondecreasing data.
inline PolishedCdf mono_cubic(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("mono_cubic: need >= 2 matching points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) throw DomainError("mono_cubic: nodes must be increasing");
    if (y[i] < y[i - 1]) throw DomainError("mono_cubic: values must be nondecreasing");
  }
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  std::vector<double> m(n);
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    m[k] = (delta[k - 1] == 0.0 || delta[k] == 0.0) ? 0.0 : 0.5 * (delta[k - 1] + delta[k]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      m[k] = 0.0;
      m[k + 1] = 0.0;
      continue;
    }
    const double a = m[k] / delta[k];
    const double b = m[k + 1] / delta[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[k] = tau * a * delta[k];
      m[k + 1] = tau * b * delta[k];
    }
  }
  std::vector<PolishedCdf::Coeffs> c(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    c[k] = {y[k], m[k], (3.0 * delta[k] - 2.0 * m[k] - m[k + 1]) / h[k],
            (m[k] + m[k + 1] - 2.0 * delta[k]) / (h[k] * h[k])};
  }
  return PolishedCdf(x, y, std::move(c));
}

/// tweak followed by mono_cubic.
inline PolishedCdf polish(const SampledCdf& raw) { return mono_cubic(raw.grid, tweak(raw)); }

namespace detail {

using Cubic = std::array<double, 4>;

inline double cubic_eval(const Cubic& p, double u) { return p[0] + u * (p[1] + u * (p[2] + u * p[3])); }
inline double cubic_antideriv(const Cubic& p, double u) {
  return u * (p[0] + u * (p[1] / 2.0 + u * (p[2] / 3.0 + u * p[3] / 4.0)));
}

// Re-expands c0 + c1 u + c2 u^2 + c3 u^3 around u = s.
inline Cubic cubic_shift(const Cubic& c, double s) {
  return {cubic_eval(c, s), c[1] + s * (2.0 * c[2] + 3.0 * c[3] * s), c[2] + 3.0 * c[3] * s, c[3]};
}

// Critical points of p inside (0, len), sorted.
inline std::vector<double> cubic_critical_points(const Cubic& p, double len) {
  std::vector<double> out;
  const double a = 3.0 * p[3];
  const double b = 2.0 * p[2];
  const double c = p[1];
  auto keep = [&](double u) {
    if (u > 0.0 && u < len && std::isfinite(u)) out.push_back(u);
  };
  if (a == 0.0) {
    if (b != 0.0) keep(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
      if (q != 0.0) keep(q / a);
      if (q != 0.0) {
        keep(c / q);
      } else {
        keep(0.0);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Roots of p in (0, len): bisection on each monotone piece.
inline std::vector<double> cubic_roots(const Cubic& p, double len) {
  std::vector<double> cuts{0.0};
  for (double u : cubic_critical_points(p, len)) cuts.push_back(u);
  cuts.push_back(len);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i];
    double hi = cuts[i + 1];
    double flo = cubic_eval(p, lo);
    const double fhi = cubic_eval(p, hi);
    if (flo == 0.0 || fhi == 0.0 || (flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = cubic_eval(p, mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

inline double cubic_abs_integral(const Cubic& p, double len) {
  std::vector<double> cuts{0.0};
  for (double r : cubic_roots(p, len)) cuts.push_back(r);
  cuts.push_back(len);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += std::fabs(cubic_antideriv(p, cuts[i + 1]) - cubic_antideriv(p, cuts[i]));
  }
  return total;
}

inline double cubic_abs_max(const Cubic& p, double len) {
  double best = std::max(std::fabs(cubic_eval(p, 0.0)), std::fabs(cubic_eval(p, len)));
  for (double u : cubic_critical_points(p, len)) best = std::max(best, std::fabs(cubic_eval(p, u)));
  return best;
}

// Calls fn(difference cubic, length) on every piece of the merged grid.
template <class Fn>
void for_each_difference_piece(const PolishedCdf& f1, const PolishedCdf& f2, Fn&& fn) {
  std::vector<double> cuts = f1.grid();
  cuts.insert(cuts.end(), f2.grid().begin(), f2.grid().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const double mid = 0.5 * (a + b);
    const int k1 = f1.interval_of(mid);
    const int k2 = f2.interval_of(mid);
    const Cubic p1 = cubic_shift(f1.coeffs()[k1], a - f1.grid()[k1]);
    const Cubic p2 = cubic_shift(f2.coeffs()[k2], a - f2.grid()[k2]);
    fn(Cubic{p1[0] - p2[0], p1[1] - p2[1], p1[2] - p2[2], p1[3] - p2[3]}, b - a);
  }
}

}  // namespace detail

/// Total distance: exact integral of |F1 - F2| over [0,1].
inline double l1_distance(const PolishedCdf& f1, const PolishedCdf& f2) {
  double total = 0.0;
  detail::for_each_difference_piece(f1, f2, [&](const detail::Cubic& p, double len) {
    total += detail::cubic_abs_integral(p, len);
  });
  return total;
}

/// Maximum distance: max |F1 - F2| over [0,1], exact per piece.
inline double linf_distance(const PolishedCdf& f1, const PolishedCdf& f2) {
  double best = 0.0;
  detail::for_each_difference_piece(f1, f2, [&](const detail::Cubic& p, double len) {
    best = std::max(best, detail::cubic_abs_max(p, len));
  });
  return best;
}

using AnalyticCdf = std::function<double(double)>;

/// Total distance to an analytic cdf by adaptive quadrature per interval.
inline double l1_distance(const PolishedCdf& f, const AnalyticCdf& ref, double tol = 1e-11) {
  double total = 0.0;
  const auto& g = f.grid();
  const double per_piece = tol / f.intervals();
  for (int k = 0; k < f.intervals(); ++k) {
    total += adaptive_integrate([&](double x) { return std::fabs(f(x) - ref(x)); }, g[k], g[k + 1], per_piece, 40);
  }
  return total;
}

/// Maximum distance to an analytic cdf: each interval is sampled at ten
/// points plus the nodes and refined by golden-section search around the
/// largest sample.
inline double linf_distance(const PolishedCdf& f, const AnalyticCdf& ref) {
  const auto& g = f.grid();
  auto diff = [&](double x) { return std::fabs(f(x) - ref(x)); };
  double best = diff(g.front());
  constexpr int kSamples = 10;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < f.intervals(); ++k) {
    const double a = g[k];
    const double h = (g[k + 1] - a) / kSamples;
    int arg = 0;
    double local = -1.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double v = diff(a + i * h);
      if (v > local) {
        local = v;
        arg = i;
      }
    }
    double lo = a + std::max(arg - 1, 0) * h;
    double hi = a + std::min(arg + 1, kSamples) * h;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = diff(x1);
    double f2 = diff(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = diff(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = diff(x2);
      }
    }
    best = std::max({best, local, f1, f2});
  }
  return best;
}

}  // namespace hmt
