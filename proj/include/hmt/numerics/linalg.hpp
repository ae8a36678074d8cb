#pragma once

// Small dense linear algebra over exact and extended-precision scalars.
// Matrices are row-major std::vector<T> with an explicit dimension.

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

template <class T>
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, T(0)) {}

  T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Fraction-free Bareiss elimination; exact for Rational and integer input.
inline Rational determinant_bareiss(DenseMatrix<Rational> a) {
  const int n = a.rows;
  if (n == 0) return Rational(1);
  Rational sign = 1;
  Rational prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (a(i, k) != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row < 0) return Rational(0);
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// LU with partial pivoting.
template <class Real>
Real determinant_lu(DenseMatrix<Real> a) {
  using std::abs;
  const int n = a.rows;
  Real det(1);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (abs(a(i, k)) > abs(a(piv, k))) piv = i;
    }
    if (a(piv, k) == Real(0)) return Real(0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det = det * a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Real f = a(i, k) / a(k, k);
      if (f == Real(0)) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
    }
  }
  return det;
}

/// Exact for Rational. For XReal the elimination runs with 2 size + 10 guard
/// digits, since the forward error of LU grows with the condition number,
/// and the result is rounded back to the working precision.
template <class T>
T determinant(const DenseMatrix<T>& a) {
  if constexpr (std::is_same_v<T, Rational>) {
    return determinant_bareiss(a);
  } else if constexpr (std::is_same_v<T, XReal>) {
    XReal wide;
    {
      ScopedDigits guard(working_digits() + 2 * a.rows + 10);
      wide = determinant_lu(a);
    }
    return rounded(wide);
  } else {
    return determinant_lu(a);
  }
}

/// Solves a x = b by Gaussian elimination with partial pivoting.
template <class Real>
std::vector<Real> solve_linear(DenseMatrix<Real> a, std::vector<Real> b) {
  using std::abs;
  const int n = a.rows;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (abs(a(i, k)) > abs(a(piv, k))) piv = i;
    }
    if (a(piv, k) == Real(0)) throw Error("solve_linear: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const Real f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
      b[i] = b[i] - f * b[k];
    }
  }
  std::vector<Real> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Real s = b[i];
    for (int j = i + 1; j < n; ++j) s = s - a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off`, by Sturm-sequence bisection.
template <class Real>
std::vector<Real> tridiagonal_eigenvalues(const std::vector<Real>& diag, const std::vector<Real>& off,
                                          int iterations) {
  using std::abs;
  const int n = static_cast<int>(diag.size());
  Real lo = diag[0];
  Real hi = diag[0];
  for (int i = 0; i < n; ++i) {
    Real r(0);
    if (i > 0) r = r + abs(off[i - 1]);
    if (i + 1 < n) r = r + abs(off[i]);
    if (diag[i] - r < lo) lo = diag[i] - r;
    if (diag[i] + r > hi) hi = diag[i] + r;
  }
  // number of eigenvalues strictly below x
  auto count_below = [&](const Real& x) {
    int count = 0;
    Real q = diag[0] - x;
    if (q < Real(0)) ++count;
    for (int i = 1; i < n; ++i) {
      Real denom = q;
      if (denom == Real(0)) denom = Real(1e-300);
      q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
      if (q < Real(0)) ++count;
    }
    return count;
  };
  std::vector<Real> eig;
  eig.reserve(n);
  for (int k = 0; k < n; ++k) {
    Real a = lo;
    Real b = hi;
    for (int it = 0; it < iterations; ++it) {
      const Real mid = (a + b) / Real(2);
      if (count_below(mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    eig.push_back((a + b) / Real(2));
  }
  return eig;
}

}  // namespace hmt
