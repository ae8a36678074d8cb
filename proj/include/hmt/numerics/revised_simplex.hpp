#pragma once

// Revised primal simplex in double precision for problems with few rows and
// many columns:  min c.x  s.t.  A x = b,  x >= 0.
//
// The basis is an explicit list of column indices. Every iteration factors
// the basis matrix afresh, so rounding does not accumulate across pivots,
// and the ratio test uses Harris' two-pass rule. Callers may hand in any
// basis from an earlier solve as a warm start; columns appended later keep
// old indices valid.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/lp.hpp"

namespace hmt {

struct RevisedResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<int> basis;       // column indices; indices >= cols() are artificial
  std::vector<double> weights;  // basic values, aligned with basis
  int pivots = 0;
};

class RevisedSimplex {
 public:
  RevisedSimplex(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != b_.size()) throw DomainError("lp: rhs length differs from row count");
  }

  [[nodiscard]] int rows() const { return static_cast<int>(a_.rows()); }
  [[nodiscard]] int cols() const { return static_cast<int>(a_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return a_; }

  void add_columns(const Eigen::MatrixXd& extra) {
    if (extra.rows() != a_.rows()) throw DomainError("lp: appended columns have wrong height");
    const auto old = a_.cols();
    a_.conservativeResize(Eigen::NoChange, old + extra.cols());
    a_.rightCols(extra.cols()) = extra;
  }

  /// Phase 1 from the all-artificial basis. Returns a basis whose basic
  /// values reproduce b within tol, or an empty basis when none is found.
  std::vector<int> find_feasible(double tol, int max_pivots = 0) {
    const int m = rows();
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = cols() + i;
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols());
    auto res = run(cost, 1.0, basis, true, max_pivots);
    if (res.status != LpStatus::Optimal || residual(res) > tol) return {};
    drive_out_artificials(res.basis);
    return res.basis;
  }

  /// Phase 2 over the real columns from a feasible basis.
  RevisedResult optimize(const Eigen::VectorXd& objective, Sense sense, std::vector<int> basis,
                         int max_pivots = 0) {
    if (objective.size() != a_.cols()) throw DomainError("lp: objective length mismatch");
    if (static_cast<int>(basis.size()) != rows()) throw DomainError("lp: basis size differs from row count");
    const double sign = sense == Sense::Maximize ? -1.0 : 1.0;
    auto res = run(sign * objective, 0.0, std::move(basis), false, max_pivots);
    res.value = 0.0;
    for (std::size_t i = 0; i < res.basis.size(); ++i) {
      if (res.basis[i] < cols()) res.value += objective[res.basis[i]] * res.weights[i];
    }
    return res;
  }

  /// Largest |A x - b| for the basic solution of res.
  [[nodiscard]] double residual(const RevisedResult& res) const {
    Eigen::VectorXd r = -b_;
    for (std::size_t i = 0; i < res.basis.size(); ++i) {
      const int j = res.basis[i];
      if (j < cols()) r += a_.col(j) * res.weights[i];
    }
    return r.cwiseAbs().maxCoeff();
  }

 private:
  [[nodiscard]] Eigen::VectorXd column(int j) const {
    if (j < cols()) return a_.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(rows());
    e[j - cols()] = b_[j - cols()] < 0.0 ? -1.0 : 1.0;
    return e;
  }

  RevisedResult run(const Eigen::VectorXd& cost, double artificial_cost, std::vector<int> basis, bool phase1,
                    int max_pivots) {
    const int m = rows();
    const int n = cols();
    const int limit = max_pivots > 0 ? max_pivots : 20 * (n + m) + 1000;
    RevisedResult out;
    std::vector<char> is_basic(n + m, 0);
    for (int j : basis) is_basic[j] = 1;
    Eigen::MatrixXd bmat(m, m);
    Eigen::VectorXd cb(m);
    Eigen::VectorXd xb;
    int degenerate_run = 0;
    bool bland = false;
    for (int iter = 0;; ++iter) {
      for (int c = 0; c < m; ++c) {
        bmat.col(c) = column(basis[c]);
        cb[c] = basis[c] < n ? cost[basis[c]] : artificial_cost;
      }
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
      xb = lu.solve(b_);
      const Eigen::VectorXd y = lu.transpose().solve(cb);
      if (!xb.allFinite() || !y.allFinite()) {
        out.status = LpStatus::IterationLimit;
        break;
      }
      if (iter >= limit) {
        out.status = LpStatus::IterationLimit;
        break;
      }
      const Eigen::VectorXd d = cost - a_.transpose() * y;
      int q = -1;
      double best = -kOptTol;
      for (int j = 0; j < n; ++j) {
        if (is_basic[j] || !(d[j] < -kOptTol)) continue;
        if (bland) {
          q = j;
          break;
        }
        if (d[j] < best) {
          best = d[j];
          q = j;
        }
      }
      if (q < 0 && phase1) {
        // artificials may re-enter during phase 1
        for (int i = 0; i < m && q < 0; ++i) {
          const int j = n + i;
          const double sgn = b_[i] < 0.0 ? -1.0 : 1.0;
          if (!is_basic[j] && artificial_cost - sgn * y[i] < -kOptTol) q = j;
        }
      }
      if (q < 0) {
        out.status = LpStatus::Optimal;
        break;
      }
      const Eigen::VectorXd u = lu.solve(column(q));
      // Harris: largest step allowed with slack, then the biggest pivot within it
      double theta_max = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (u[i] > kPivotTol) theta_max = std::min(theta_max, (std::max(xb[i], 0.0) + kFeasTol) / u[i]);
      }
      if (!std::isfinite(theta_max)) {
        out.status = LpStatus::Unbounded;
        break;
      }
      int r = -1;
      double theta = 0.0;
      for (int i = 0; i < m; ++i) {
        if (!(u[i] > kPivotTol)) continue;
        const double ratio = std::max(xb[i], 0.0) / u[i];
        if (ratio > theta_max) continue;
        const bool better = r < 0 || (bland ? basis[i] < basis[r] : u[i] > u[r]);
        if (better) {
          r = i;
          theta = ratio;
        }
      }
      if (theta <= kFeasTol) {
        if (++degenerate_run > 2 * m + 20) bland = true;
      } else {
        degenerate_run = 0;
      }
      is_basic[basis[r]] = 0;
      is_basic[q] = 1;
      basis[r] = q;
      ++out.pivots;
    }
    out.basis = std::move(basis);
    out.weights.resize(m);
    for (int i = 0; i < m; ++i) out.weights[i] = std::max(xb.size() == m ? xb[i] : 0.0, 0.0);
    return out;
  }

  void drive_out_artificials(std::vector<int>& basis) const {
    const int m = rows();
    const int n = cols();
    for (int r = 0; r < m; ++r) {
      if (basis[r] < n) continue;
      Eigen::MatrixXd bmat(m, m);
      for (int c = 0; c < m; ++c) bmat.col(c) = column(basis[c]);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
      // row r of B^-1 A
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e[r] = 1.0;
      const Eigen::VectorXd row = lu.transpose().solve(e);
      const Eigen::VectorXd t = a_.transpose() * row;
      std::vector<char> is_basic(n, 0);
      for (int j : basis) {
        if (j < n) is_basic[j] = 1;
      }
      int best = -1;
      for (int j = 0; j < n; ++j) {
        if (is_basic[j] || !(std::fabs(t[j]) > 1e-9)) continue;
        if (best < 0 || std::fabs(t[j]) > std::fabs(t[best])) best = j;
      }
      // no candidate: the row is redundant and its artificial stays at zero
      if (best >= 0) basis[r] = best;
    }
  }

  static constexpr double kOptTol = 1e-10;
  static constexpr double kFeasTol = 1e-12;
  static constexpr double kPivotTol = 1e-9;

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

}  // namespace hmt
