#pragma once

// Chebyshev-Markov band: the infimum and supremum of F(x0) over all
// distributions on [0,1] with the given moments m_0..m_n.
//
// Interior sequences: two linear programs per grid point over atom weights
// on a support grid that contains 0, 1 and every grid point. The moment
// constraints are written in the shifted Legendre basis, so every
// constraint row is bounded by 1 in magnitude; the right-hand side
// (Legendre moments) is formed in extended precision. The support is
// doubled until the envelopes move by at most lp_tol.
//
// Unique discrete sequences (a Hankel determinant vanishes): the single
// representing measure is recovered and the band is its cdf and left limit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/moment_core.hpp"
#include "hmt/numerics/jacobi.hpp"
#include "hmt/numerics/linalg.hpp"
#include "hmt/numerics/lp.hpp"
#include "hmt/numerics/revised_simplex.hpp"
#include "hmt/numerics/special.hpp"

namespace hmt {

struct CMBand {
  std::vector<double> grid;
  std::vector<double> inf;
  std::vector<double> sup;
  double lp_tol = 1e-6;
  double achieved_tol = 0.0;  // last envelope change (0 for discrete recovery)
  int support_size = 0;
  bool converged = true;
};

struct CmBandOptions {
  int support_grid_size = 2001;
  double lp_tol = 1e-6;
  int max_doublings = 4;
};

/// Refinement cap reached; the best band is attached.
class NoConvergence : public Error {
 public:
  explicit NoConvergence(CMBand band)
      : Error("cm band: support refinement cap reached at envelope change " + std::to_string(band.achieved_tol)),
        band_(std::move(band)) {}
  [[nodiscard]] const CMBand& band() const { return band_; }

 private:
  CMBand band_;
};

/// Distance of the extra support point placed right of each grid point.
inline constexpr double kRightOffset = 1e-9;

struct DiscreteMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;
};

namespace detail {

// Recurrence coefficients alpha_0..alpha_{q-1}, beta_1..beta_{q-1} from the
// moments nu_0..nu_{2q-1} (Chebyshev's algorithm).
inline bool chebyshev_recurrence(const std::vector<XReal>& nu, int q, std::vector<XReal>& alpha,
                                 std::vector<XReal>& beta) {
  alpha.assign(q, XReal(0));
  beta.assign(q, XReal(0));
  if (q == 0) return true;
  if (!(nu[0] > XReal(0))) return false;
  std::vector<XReal> prev2(2 * q, XReal(0));
  std::vector<XReal> prev(nu.begin(), nu.begin() + 2 * q);
  alpha[0] = nu[1] / nu[0];
  beta[0] = nu[0];
  for (int k = 1; k < q; ++k) {
    std::vector<XReal> cur(2 * q, XReal(0));
    for (int l = k; l <= 2 * q - k - 1; ++l) {
      cur[l] = prev[l + 1] - alpha[k - 1] * prev[l] - beta[k - 1] * prev2[l];
    }
    if (!(cur[k] > XReal(0))) return false;
    alpha[k] = cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
    beta[k] = cur[k] / prev[k - 1];
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  return true;
}

}  // namespace detail

/// The unique measure of a UniqueDiscrete sequence. Candidate endpoint atom
/// sets {}, {0}, {1}, {0,1} are tried in turn; the interior atoms are the
/// zeros of the orthogonal polynomial of the correspondingly modified
/// measure, weights come from the first moments, and a candidate is
/// accepted only if it reproduces every given moment.
inline DiscreteMeasure recover_discrete(const MomentSequence& m) {
  const int n = m.order();
  const int p = working_digits();
  const XReal tol = pow(XReal(10), static_cast<long>(12 - p));
  std::optional<std::pair<std::vector<XReal>, std::vector<XReal>>> best;
  for (int total = 1; total <= n / 2 + 2 && !best; ++total) {
    for (int ends = 0; ends < 4 && !best; ++ends) {
      const bool at0 = ends & 1;
      const bool at1 = ends & 2;
      const int q = total - static_cast<int>(at0) - static_cast<int>(at1);
      if (q < 0) continue;
      // moments of nu = x^[at0] (1-x)^[at1] mu
      const int shift = (at0 ? 1 : 0) + (at1 ? 1 : 0);
      const int avail = n - shift;  // nu_0..nu_avail
      if (2 * q - 1 > avail) continue;
      std::vector<XReal> nu(std::max(avail + 1, 0));
      for (int k = 0; k <= avail; ++k) {
        const int b = k + (at0 ? 1 : 0);
        nu[k] = at1 ? m[b] - m[b + 1] : m[b];
      }
      std::vector<XReal> atoms;
      if (q > 0) {
        std::vector<XReal> alpha;
        std::vector<XReal> beta;
        if (!detail::chebyshev_recurrence(nu, q, alpha, beta)) continue;
        std::vector<XReal> off;
        for (int k = 1; k < q; ++k) off.push_back(sqrt(beta[k]));
        atoms = tridiagonal_eigenvalues(alpha, off, static_cast<int>(3.33 * p) + 20);
      }
      bool ok = true;
      for (const auto& a : atoms) {
        if (!(a > XReal(0)) || !(a < XReal(1))) ok = false;
      }
      if (!ok) continue;
      if (at0) atoms.insert(atoms.begin(), XReal(0));
      if (at1) atoms.push_back(XReal(1));
      const int k_atoms = static_cast<int>(atoms.size());
      if (k_atoms - 1 > n) continue;
      DenseMatrix<XReal> v(k_atoms, k_atoms);
      std::vector<XReal> rhs(k_atoms);
      for (int r = 0; r < k_atoms; ++r) {
        for (int c = 0; c < k_atoms; ++c) v(r, c) = pow(atoms[c], static_cast<long>(r));
        rhs[r] = m[r];
      }
      std::vector<XReal> w;
      try {
        w = solve_linear(v, rhs);
      } catch (const Error&) {
        continue;
      }
      for (const auto& x : w) {
        if (!(x > XReal(0))) ok = false;
      }
      if (!ok) continue;
      for (int k = 0; k <= n && ok; ++k) {
        XReal s(0);
        for (int i = 0; i < k_atoms; ++i) s += w[i] * pow(atoms[i], static_cast<long>(k));
        if (abs(s - m[k]) > tol) ok = false;
      }
      if (ok) best.emplace(std::move(atoms), std::move(w));
    }
  }
  if (!best) throw InfeasibleMoments("cm band: no discrete measure reproduces the moments");
  DiscreteMeasure out;
  for (const auto& a : best->first) out.atoms.push_back(a.to_double());
  for (const auto& w : best->second) out.weights.push_back(w.to_double());
  return out;
}

/// One extremal LP solution: its value and the basis it ended on.
struct CmSolution {
  double value = 0.0;
  std::vector<int> basis;
  int pivots = 0;
};

/// Extremal LPs over a support grid for one moment sequence. Each solve can
/// be warm-started from any earlier basis; support points added later keep
/// earlier bases valid.
class CmSolver {
 public:
  CmSolver(const MomentSequence& m, std::vector<double> support, double lp_tol)
      : n_(m.order()), lp_tol_(lp_tol), support_(normalize(std::move(support))) {
    simplex_.emplace(columns(support_), legendre_moments(m));
    feasible_ = simplex_->find_feasible(lp_tol_, max_pivots());
    if (feasible_.empty()) {
      throw InfeasibleMoments("cm band: no measure on the support grid matches the moments within lp_tol");
    }
    last_[0] = last_[1] = feasible_;
  }

  [[nodiscard]] const std::vector<double>& support() const { return support_; }
  [[nodiscard]] int order() const { return n_; }

  /// Adds support points not yet present.
  void add_points(const std::vector<double>& pts) {
    std::vector<double> sorted = support_;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> fresh;
    for (double x : pts) {
      if (!contains_sorted(sorted, x)) fresh.push_back(x);
    }
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    if (fresh.empty()) return;
    const int old = static_cast<int>(support_.size());
    const int k = static_cast<int>(fresh.size());
    simplex_->add_columns(columns(fresh));
    support_.insert(support_.end(), fresh.begin(), fresh.end());
    // artificial indices sit after the real columns
    for (auto* b : {&feasible_, &last_[0], &last_[1]}) {
      for (int& j : *b) {
        if (j >= old) j += k;
      }
    }
  }

  /// Shifts artificial indices of a basis saved before add_points calls
  /// that grew the support from old_size points.
  [[nodiscard]] std::vector<int> remap(std::vector<int> basis, int old_size) const {
    const int k = static_cast<int>(support_.size()) - old_size;
    for (int& j : basis) {
      if (j >= old_size) j += k;
    }
    return basis;
  }

  /// min or max of sum_{x_i <= x0} w_i, warm-started from warm (or the last
  /// basis of the same sense when warm is empty).
  CmSolution solve(double x0, Sense sense, const std::vector<int>& warm = {}) {
    Eigen::VectorXd obj(static_cast<Eigen::Index>(support_.size()));
    for (std::size_t i = 0; i < support_.size(); ++i) obj[i] = support_[i] <= x0 + kSame ? 1.0 : 0.0;
    auto& last = last_[sense == Sense::Maximize ? 1 : 0];
    auto res = simplex_->optimize(obj, sense, warm.empty() ? last : warm, max_pivots());
    if (res.status != LpStatus::Optimal || simplex_->residual(res) > lp_tol_) {
      // restart from the phase 1 basis before giving up
      res = simplex_->optimize(obj, sense, feasible_, max_pivots());
      if (res.status != LpStatus::Optimal) throw NotConverged("cm band: simplex did not reach an optimum", 0.0);
    }
    last = res.basis;
    last_result_ = res;
    return {std::clamp(res.value, 0.0, 1.0), res.basis, res.pivots};
  }

  /// The measure behind the most recent solve.
  [[nodiscard]] DiscreteMeasure measure() const {
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < last_result_.basis.size(); ++i) {
      const int j = last_result_.basis[i];
      if (j < static_cast<int>(support_.size()) && last_result_.weights[i] > 0.0) {
        atoms.emplace_back(support_[j], last_result_.weights[i]);
      }
    }
    std::sort(atoms.begin(), atoms.end());
    DiscreteMeasure out;
    for (auto& [x, w] : atoms) {
      out.atoms.push_back(x);
      out.weights.push_back(w);
    }
    return out;
  }

  /// Largest Legendre-moment residual of the most recent solve.
  [[nodiscard]] double residual() const { return simplex_->residual(last_result_); }

  static constexpr double kSame = 1e-13;

  /// Pivot budget of one solve. Warm-started solves need a few hundred
  /// pivots per row at most; anything longer is cycling on a degenerate
  /// vertex and is reported as NotConverged.
  [[nodiscard]] int max_pivots() const { return 100 * (n_ + 1) + 2000; }

 private:
  static std::vector<double> normalize(std::vector<double> pts) {
    pts.push_back(0.0);
    pts.push_back(1.0);
    for (double x : pts) {
      if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cm band: support points must lie in [0,1]");
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
      if (out.empty() || x - out.back() > kSame) out.push_back(x);
    }
    return out;
  }

  static bool contains_sorted(const std::vector<double>& sorted, double x) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x - kSame);
    return it != sorted.end() && *it <= x + kSame;
  }

  // ell_k = int R_k dmu = sum_j (-1)^(k+j) C(k,j) C(k+j,j) m_j.
  Eigen::VectorXd legendre_moments(const MomentSequence& m) const {
    Eigen::VectorXd out(n_ + 1);
    ScopedDigits guard(std::max(working_digits(), 2 * n_ + 20));
    for (int k = 0; k <= n_; ++k) {
      XReal s(0);
      for (int j = 0; j <= k; ++j) {
        XReal c(binomial_exact(k, j) * binomial_exact(k + j, j));
        if ((k + j) % 2) c = -c;
        s += c * m[j];
      }
      out[k] = s.to_double();
    }
    return out;
  }

  Eigen::MatrixXd columns(const std::vector<double>& pts) const {
    Eigen::MatrixXd a(n_ + 1, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t c = 0; c < pts.size(); ++c) {
      const auto r = shifted_jacobi_all<double>(0.0, 0.0, n_, pts[c]);
      for (int k = 0; k <= n_; ++k) a(k, static_cast<Eigen::Index>(c)) = r[k];
    }
    return a;
  }

  int n_;
  double lp_tol_;
  std::vector<double> support_;
  std::optional<RevisedSimplex> simplex_;
  std::vector<int> feasible_;
  std::vector<int> last_[2];
  RevisedResult last_result_;
};

namespace detail {

inline std::vector<double> uniform_points(int count) {
  std::vector<double> u(count);
  for (int i = 0; i < count; ++i) u[i] = static_cast<double>(i) / (count - 1);
  return u;
}

inline void check_band_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("cm band: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw DomainError("cm band: grid points must lie in [0,1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("cm band: grid must be increasing");
  }
}

inline CMBand band_from_measure(const DiscreteMeasure& mu, const std::vector<double>& grid, double lp_tol) {
  CMBand band;
  band.grid = grid;
  band.lp_tol = lp_tol;
  for (double x : grid) {
    double below = 0.0;
    double upto = 0.0;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      if (mu.atoms[i] < x - 1e-9) below += mu.weights[i];
      if (mu.atoms[i] <= x + 1e-9) upto += mu.weights[i];
    }
    if (x >= 1.0) below = upto = 1.0;
    band.inf.push_back(std::clamp(below, 0.0, 1.0));
    band.sup.push_back(std::clamp(upto, 0.0, 1.0));
  }
  return band;
}

}  // namespace detail

/// Infimum and supremum of F(x0), x0 in grid, over all distributions with
/// moments m. Throws InfeasibleMoments for invalid sequences and
/// NoConvergence (carrying the best band) when the refinement cap is hit.
inline CMBand cm_band(const MomentSequence& m, const std::vector<double>& grid, const CmBandOptions& opt = {}) {
  detail::check_band_grid(grid);
  const auto rep = hankel_report(m);
  if (rep.classification == Validity::Invalid) throw InfeasibleMoments("cm band: not a moment sequence");
  if (rep.classification == Validity::UniqueDiscrete) {
    return detail::band_from_measure(recover_discrete(m), grid, opt.lp_tol);
  }
  if (opt.support_grid_size < 10 * (m.order() + 1)) {
    throw DomainError("cm band: support grid must have at least 10 (n+1) points");
  }
  auto support = detail::uniform_points(opt.support_grid_size);
  support.insert(support.end(), grid.begin(), grid.end());
  // the infimum puts mass just to the right of x0; F is right-continuous
  for (double x : grid) {
    if (x + kRightOffset < 1.0) support.push_back(x + kRightOffset);
  }
  CmSolver solver(m, support, opt.lp_tol);

  // bases per grid point and sense, reused after each refinement
  std::vector<std::vector<int>> warm_inf(grid.size());
  std::vector<std::vector<int>> warm_sup(grid.size());
  int warm_size = static_cast<int>(solver.support().size());
  auto envelopes = [&](CMBand& band) {
    band.inf.clear();
    band.sup.clear();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto lo = solver.solve(grid[i], Sense::Minimize, solver.remap(warm_inf[i], warm_size));
      auto hi = solver.solve(grid[i], Sense::Maximize, solver.remap(warm_sup[i], warm_size));
      band.inf.push_back(lo.value);
      band.sup.push_back(hi.value);
      warm_inf[i] = std::move(lo.basis);
      warm_sup[i] = std::move(hi.basis);
    }
    warm_size = static_cast<int>(solver.support().size());
    // optimal values are nondecreasing in x0; remove solver-tolerance jitter
    for (std::size_t i = 1; i < grid.size(); ++i) {
      band.inf[i] = std::max(band.inf[i], band.inf[i - 1]);
      band.sup[i] = std::max(band.sup[i], band.sup[i - 1]);
    }
    if (grid.back() >= 1.0) {
      band.inf.back() = 1.0;
      band.sup.back() = 1.0;
    }
  };

  CMBand band;
  band.grid = grid;
  band.lp_tol = opt.lp_tol;
  envelopes(band);
  band.support_size = static_cast<int>(solver.support().size());
  band.achieved_tol = std::numeric_limits<double>::infinity();
  int count = opt.support_grid_size;
  for (int d = 0; d < opt.max_doublings; ++d) {
    // doubling the uniform part: add the midpoints
    std::vector<double> mids;
    for (int i = 0; i + 1 < count; ++i) mids.push_back((i + 0.5) / (count - 1));
    count = 2 * count - 1;
    solver.add_points(mids);
    CMBand next = band;
    envelopes(next);
    double change = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      change = std::max({change, std::fabs(next.inf[i] - band.inf[i]), std::fabs(next.sup[i] - band.sup[i])});
    }
    band = std::move(next);
    band.achieved_tol = change;
    band.support_size = static_cast<int>(solver.support().size());
    if (change <= opt.lp_tol) {
      band.converged = true;
      return band;
    }
  }
  band.converged = false;
  throw NoConvergence(band);
}

/// sup - inf pointwise.
inline std::vector<double> band_width(const CMBand& band) {
  std::vector<double> w(band.grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = band.sup[i] - band.inf[i];
  return w;
}

/// CSV with columns x, inf, sup, width.
inline std::string band_to_csv(const CMBand& band) {
  std::ostringstream os;
  os.precision(17);
  os << "x,inf,sup,width\n";
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    os << band.grid[i] << ',' << band.inf[i] << ',' << band.sup[i] << ',' << band.sup[i] - band.inf[i] << '\n';
  }
  return os.str();
}

}  // namespace hmt
