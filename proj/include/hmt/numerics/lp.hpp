#pragma once

// Dense two-phase primal simplex. Entering columns are priced by the most
// negative reduced cost; after a long run of degenerate pivots the rule
// switches to Bland's, which cannot cycle.
//
// Problems have the standard form  min/max c.x  s.t.  A x = b,  x >= 0.
// DenseSimplex keeps its tableau between solves so a sequence of objectives
// over the same constraints (and columns appended later) can be warm-started
// from the previous optimal basis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "hmt/errors.hpp"
#include "hmt/numerics/linalg.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
enum class Sense { Minimize, Maximize };

template <class Scalar>
struct LpProblem {
  DenseMatrix<Scalar> constraints;  // m x n
  std::vector<Scalar> rhs;          // m
  std::vector<Scalar> objective;    // n
  Sense sense = Sense::Minimize;
};

template <class Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Scalar value{};
  std::vector<Scalar> solution;
  int pivots = 0;
};

namespace detail {
template <class Scalar>
Scalar lp_eps() {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return Scalar(0);
  } else if constexpr (std::is_same_v<Scalar, XReal>) {
    return pow(XReal(10), -static_cast<long>(working_digits() - 10));
  } else {
    return Scalar(1e-11);
  }
}
}  // namespace detail

template <class Scalar>
class DenseSimplex {
 public:
  DenseSimplex(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& b)
      : m_(a.rows), n_(a.cols), eps_(detail::lp_eps<Scalar>()) {
    if (static_cast<int>(b.size()) != m_) throw DomainError("lp: rhs length differs from row count");
    using std::abs;
    row_scale_.assign(m_, Scalar(1));
    for (int i = 0; i < m_; ++i) {
      if constexpr (!std::is_same_v<Scalar, Rational>) {
        Scalar mx(0);
        for (int j = 0; j < n_; ++j) mx = std::max(mx, Scalar(abs(a(i, j))));
        if (mx > Scalar(0)) row_scale_[i] = Scalar(1) / mx;
      }
      if (b[i] < Scalar(0)) row_scale_[i] = -row_scale_[i];
    }
    a_orig_ = a;
    b_orig_ = b;
    tableau_.assign(static_cast<std::size_t>(m_) * (n_ + m_), Scalar(0));
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < m_; ++i) at(i, j) = a(i, j) * row_scale_[i];
    }
    for (int i = 0; i < m_; ++i) at(i, n_ + i) = Scalar(1);
    beta_.resize(m_);
    for (int i = 0; i < m_; ++i) beta_[i] = b[i] * row_scale_[i];
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  [[nodiscard]] int rows() const { return m_; }
  [[nodiscard]] int variables() const { return n_; }
  [[nodiscard]] int total_pivots() const { return pivots_; }

  /// Phase 1. Returns false when no point satisfies the constraints within
  /// tol (componentwise, in the caller's units).
  bool find_feasible(const Scalar& tol, int max_pivots = 0) {
    std::vector<Scalar> cost(n_ + m_, Scalar(0));
    for (int i = 0; i < m_; ++i) cost[n_ + i] = Scalar(1);
    const LpStatus st = run(cost, /*allow_artificial=*/true, max_pivots);
    if (st == LpStatus::IterationLimit) return false;
    if (max_residual() > tol) return false;
    drive_out_artificials();
    feasible_ = true;
    return true;
  }

  /// Phase 2 from the current basis.
  LpResult<Scalar> optimize(const std::vector<Scalar>& objective, Sense sense, int max_pivots = 0) {
    if (!feasible_) throw Error("lp: optimize called before a feasible basis was found");
    if (static_cast<int>(objective.size()) != n_) throw DomainError("lp: objective length mismatch");
    std::vector<Scalar> cost(n_ + m_, Scalar(0));
    for (int j = 0; j < n_; ++j) cost[j] = sense == Sense::Maximize ? -objective[j] : objective[j];
    LpResult<Scalar> out;
    const int before = pivots_;
    out.status = run(cost, /*allow_artificial=*/false, max_pivots);
    out.pivots = pivots_ - before;
    out.solution = solution();
    Scalar value(0);
    for (int j = 0; j < n_; ++j) value = value + objective[j] * out.solution[j];
    out.value = value;
    return out;
  }

  /// Appends columns (m x k) to the problem; the current basis stays valid.
  void add_columns(const DenseMatrix<Scalar>& cols) {
    if (cols.rows != m_) throw DomainError("lp: appended columns have wrong height");
    const int k = cols.cols;
    std::vector<Scalar> grown(static_cast<std::size_t>(m_) * (n_ + k + m_), Scalar(0));
    auto g = [&](int i, int j) -> Scalar& { return grown[static_cast<std::size_t>(j) * m_ + i]; };
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < m_; ++i) g(i, j) = at(i, j);
    // artificial block holds B^-1 (in scaled row units)
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i < m_; ++i) g(i, n_ + k + j) = at(i, n_ + j);
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < m_; ++i) {
        Scalar s(0);
        for (int r = 0; r < m_; ++r) {
          const Scalar& binv = at(i, n_ + r);
          if (binv == Scalar(0)) continue;
          s = s + binv * cols(r, c) * row_scale_[r];
        }
        g(i, n_ + c) = s;
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) basis_[i] += k;
    }
    DenseMatrix<Scalar> a(m_, n_ + k);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) a(i, j) = a_orig_(i, j);
      for (int c = 0; c < k; ++c) a(i, n_ + c) = cols(i, c);
    }
    a_orig_ = std::move(a);
    tableau_ = std::move(grown);
    n_ += k;
  }

  [[nodiscard]] std::vector<Scalar> solution() const {
    std::vector<Scalar> x(n_, Scalar(0));
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = beta_[i] < Scalar(0) ? Scalar(0) : beta_[i];
    }
    return x;
  }

  /// Largest |A x - b| over rows, in the caller's units.
  [[nodiscard]] Scalar max_residual() const {
    using std::abs;
    const auto x = solution();
    Scalar worst(0);
    for (int i = 0; i < m_; ++i) {
      Scalar r = -b_orig_[i];
      for (int j = 0; j < n_; ++j) {
        if (x[j] != Scalar(0)) r = r + a_orig_(i, j) * x[j];
      }
      if (abs(r) > worst) worst = abs(r);
    }
    return worst;
  }

 private:
  Scalar& at(int i, int j) { return tableau_[static_cast<std::size_t>(j) * m_ + i]; }
  const Scalar& at(int i, int j) const { return tableau_[static_cast<std::size_t>(j) * m_ + i]; }

  void pivot(int r, int q) {
    const Scalar piv = at(r, q);
    std::vector<Scalar> colq(m_);
    for (int i = 0; i < m_; ++i) colq[i] = at(i, q);
    const int width = n_ + m_;
    for (int j = 0; j < width; ++j) {
      Scalar& trj = at(r, j);
      if (trj == Scalar(0)) continue;
      const Scalar t = trj / piv;
      trj = t;
      for (int i = 0; i < m_; ++i) {
        if (i == r || colq[i] == Scalar(0)) continue;
        at(i, j) = at(i, j) - colq[i] * t;
      }
    }
    const Scalar tb = beta_[r] / piv;
    beta_[r] = tb;
    for (int i = 0; i < m_; ++i) {
      if (i != r && colq[i] != Scalar(0)) beta_[i] = beta_[i] - colq[i] * tb;
    }
    for (int i = 0; i < m_; ++i) at(i, q) = i == r ? Scalar(1) : Scalar(0);
    basis_[r] = q;
    ++pivots_;
  }

  LpStatus run(const std::vector<Scalar>& cost, bool allow_artificial, int max_pivots) {
    using std::abs;
    const int width = n_ + m_;
    const int limit = max_pivots > 0 ? max_pivots : 50 * (width + m_) + 1000;
    if (pivots_ > 0) refactor();
    std::vector<char> is_basic(width, 0);
    for (int i = 0; i < m_; ++i) is_basic[basis_[i]] = 1;
    // reduced costs d_j = c_j - c_B . T_j
    std::vector<Scalar> d(width);
    for (int j = 0; j < width; ++j) {
      Scalar s = cost[j];
      for (int i = 0; i < m_; ++i) {
        const Scalar& cb = cost[basis_[i]];
        if (cb != Scalar(0) && at(i, j) != Scalar(0)) s = s - cb * at(i, j);
      }
      d[j] = s;
    }
    int degenerate_run = 0;
    bool bland = false;
    for (int iter = 0; iter < limit; ++iter) {
      int q = -1;
      const int candidates = allow_artificial ? width : n_;
      for (int j = 0; j < candidates; ++j) {
        if (is_basic[j] || !(d[j] < -eps_)) continue;
        if (bland) {
          q = j;
          break;
        }
        if (q < 0 || d[j] < d[q]) q = j;
      }
      if (q < 0) return LpStatus::Optimal;
      int r = -1;
      Scalar best_ratio(0);
      for (int i = 0; i < m_; ++i) {
        const Scalar& tiq = at(i, q);
        if (!(tiq > eps_)) continue;
        const Scalar ratio = (beta_[i] < Scalar(0) ? Scalar(0) : beta_[i]) / tiq;
        if (r < 0 || ratio < best_ratio - eps_ ||
            (!(ratio > best_ratio + eps_) && basis_[i] < basis_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r < 0) return LpStatus::Unbounded;
      if (best_ratio > eps_) {
        degenerate_run = 0;
      } else if (++degenerate_run > 2 * m_ + 20) {
        bland = true;
      }
      const Scalar dq = d[q];
      const Scalar piv = at(r, q);
      is_basic[basis_[r]] = 0;
      // row r of the tableau after the pivot is T_r / piv
      for (int j = 0; j < width; ++j) {
        if (j == q) continue;
        const Scalar& trj = at(r, j);
        if (trj != Scalar(0)) d[j] = d[j] - dq * trj / piv;
      }
      d[q] = Scalar(0);
      pivot(r, q);
      is_basic[q] = 1;
      if (pivots_ % kRefactorInterval == 0) {
        refactor();
        for (int j = 0; j < width; ++j) {
          Scalar s = cost[j];
          for (int i = 0; i < m_; ++i) {
            const Scalar& cb = cost[basis_[i]];
            if (cb != Scalar(0) && at(i, j) != Scalar(0)) s = s - cb * at(i, j);
          }
          d[j] = s;
        }
      }
    }
    return LpStatus::IterationLimit;
  }

  // Rebuilds the tableau and basic values from the original columns, which
  // removes the rounding that accumulates over many pivots.
  void refactor() {
    if constexpr (std::is_same_v<Scalar, double>) {
      const int width = n_ + m_;
      Eigen::MatrixXd basis(m_, m_);
      for (int c = 0; c < m_; ++c) {
        const int j = basis_[c];
        for (int i = 0; i < m_; ++i) basis(i, c) = j < n_ ? a_orig_(i, j) * row_scale_[i] : (j - n_ == i ? 1.0 : 0.0);
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
      Eigen::MatrixXd full(m_, width);
      for (int j = 0; j < width; ++j)
        for (int i = 0; i < m_; ++i) full(i, j) = j < n_ ? a_orig_(i, j) * row_scale_[i] : (j - n_ == i ? 1.0 : 0.0);
      Eigen::VectorXd rhs(m_);
      for (int i = 0; i < m_; ++i) rhs[i] = b_orig_[i] * row_scale_[i];
      const Eigen::MatrixXd t = lu.solve(full);
      const Eigen::VectorXd bt = lu.solve(rhs);
      if (!t.allFinite() || !bt.allFinite()) return;
      for (int j = 0; j < width; ++j)
        for (int i = 0; i < m_; ++i) at(i, j) = t(i, j);
      for (int c = 0; c < m_; ++c) {
        for (int i = 0; i < m_; ++i) at(i, basis_[c]) = i == c ? 1.0 : 0.0;
        beta_[c] = bt[c];
      }
    }
  }

  void drive_out_artificials() {
    using std::abs;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      beta_[i] = Scalar(0);
      int best = -1;
      Scalar best_mag(0);
      std::vector<char> is_basic(n_ + m_, 0);
      for (int k = 0; k < m_; ++k) is_basic[basis_[k]] = 1;
      for (int j = 0; j < n_; ++j) {
        if (is_basic[j]) continue;
        const Scalar mag = abs(at(i, j));
        if (mag > eps_ && mag > best_mag) {
          best = j;
          best_mag = mag;
        }
      }
      if (best >= 0) pivot(i, best);
      // otherwise the row is redundant; its artificial stays basic at zero
    }
  }

  static constexpr int kRefactorInterval = 64;

  int m_;
  int n_;
  Scalar eps_;
  DenseMatrix<Scalar> a_orig_;
  std::vector<Scalar> b_orig_;
  std::vector<Scalar> row_scale_;
  std::vector<Scalar> tableau_;  // column-major, m x (n + m)
  std::vector<Scalar> beta_;
  std::vector<int> basis_;
  int pivots_ = 0;
  bool feasible_ = false;
};

/// One-shot solve.
template <class Scalar>
LpResult<Scalar> lp_solve(const LpProblem<Scalar>& p, const Scalar& tol) {
  const auto& a = p.constraints;
  if (static_cast<int>(p.rhs.size()) != a.rows || static_cast<int>(p.objective.size()) != a.cols) {
    throw DomainError("lp_solve: inconsistent problem dimensions");
  }
  DenseSimplex<Scalar> simplex(a, p.rhs);
  if (!simplex.find_feasible(tol)) {
    LpResult<Scalar> out;
    out.status = LpStatus::Infeasible;
    out.pivots = simplex.total_pivots();
    return out;
  }
  auto out = simplex.optimize(p.objective, p.sense);
  out.pivots = simplex.total_pivots();
  return out;
}

}  // namespace hmt
