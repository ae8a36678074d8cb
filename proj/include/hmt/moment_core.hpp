#pragma once

// Moment sequences on [0,1]: Hankel validity classification, the range of
// the next moment given a prefix, and canonical moments.

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/numerics/linalg.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

/// m_0..m_n. Only m_0 = 1 is enforced on construction; whether the rest is a
/// valid moment sequence is what hankel_report decides.
template <class T>
class BasicMomentSequence {
 public:
  using value_type = T;

  BasicMomentSequence() : values_{T(1)} {}
  explicit BasicMomentSequence(std::vector<T> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("moment sequence needs m_0");
    using std::abs;
    if (abs(values_[0] - T(1)) > T(1e-12)) throw DomainError("moment sequence must start with m_0 = 1");
  }

  [[nodiscard]] int order() const { return static_cast<int>(values_.size()) - 1; }
  const T& operator[](int k) const { return values_[k]; }
  [[nodiscard]] const std::vector<T>& values() const { return values_; }

  /// m_0..m_k.
  [[nodiscard]] BasicMomentSequence prefix(int k) const {
    return BasicMomentSequence(std::vector<T>(values_.begin(), values_.begin() + k + 1));
  }

 private:
  std::vector<T> values_;
};

using MomentSequence = BasicMomentSequence<XReal>;
using RationalMoments = BasicMomentSequence<Rational>;

template <class To, class From>
BasicMomentSequence<To> convert_moments(const BasicMomentSequence<From>& m) {
  std::vector<To> out;
  out.reserve(m.values().size());
  for (const auto& v : m.values()) {
    if constexpr (std::is_same_v<To, double>) {
      out.push_back(to_double(v));
    } else {
      out.push_back(To(v));
    }
  }
  return BasicMomentSequence<To>(std::move(out));
}

enum class Validity { Invalid, UniqueDiscrete, Interior };

template <class T>
struct HankelReport {
  std::vector<T> lower;  // lower[l-1] is the lower determinant of order l
  std::vector<T> upper;
  Validity classification = Validity::Interior;
  int first_zero = 0;  // order of the first vanishing determinant (UniqueDiscrete)

  [[nodiscard]] bool interior() const { return classification == Validity::Interior; }
  /// True when every determinant of order <= l is strictly positive.
  [[nodiscard]] bool interior_through(int l) const {
    if (classification == Validity::Interior) return true;
    return classification == Validity::UniqueDiscrete && l < first_zero;
  }
};

template <class T>
struct MomentBounds {
  T lower;
  T upper;
};

namespace detail {

/// Relative zero threshold used for inexact determinants.
template <class T>
T hankel_zero_tol() {
  if constexpr (std::is_same_v<T, Rational>) {
    return T(0);
  } else if constexpr (std::is_same_v<T, XReal>) {
    return pow(XReal(10), static_cast<long>(8 - working_digits()));
  } else {
    return T(1e-8);
  }
}

// Moment m_k as a matrix entry; H(upper) entries are differences.
template <class T>
DenseMatrix<T> hankel_matrix(const std::vector<T>& m, int l, bool upper) {
  if (!upper) {
    const int size = l / 2 + 1;
    const int shift = l % 2;
    DenseMatrix<T> h(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) h(i, j) = m[i + j + shift];
    return h;
  }
  const int size = (l + 1) / 2;
  const int shift = l % 2 == 0 ? 1 : 0;
  DenseMatrix<T> h(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) h(i, j) = m[i + j + shift] - m[i + j + shift + 1];
  return h;
}

template <class T>
T hankel_det(const std::vector<T>& m, int l, bool upper) {
  if (l <= 0) return T(1);
  return determinant(hankel_matrix(m, l, upper));
}

// Determinant of order l with its bottom-right entry replaced by zero.
template <class T>
T hankel_det_corner_zero(const std::vector<T>& m, int l, bool upper) {
  auto h = hankel_matrix(m, l, upper);
  h(h.rows - 1, h.cols - 1) = T(0);
  return determinant(h);
}

// Bounds for m_n from m_0..m_{n-1} without checking that the prefix is
// interior. Both order-n determinants are affine in m_n with the order-(n-2)
// determinant as the coefficient.
template <class T>
MomentBounds<T> moment_bounds_unchecked(const std::vector<T>& prefix) {
  const int n = static_cast<int>(prefix.size());
  std::vector<T> m = prefix;
  m.push_back(T(0));
  const T lower_cof = hankel_det(m, n - 2, false);
  const T upper_cof = hankel_det(m, n - 2, true);
  if (!(lower_cof > T(0)) || !(upper_cof > T(0))) throw DegeneratePrefix(n - 1);
  const T d0 = hankel_det_corner_zero(m, n, false);
  const T e0 = hankel_det_corner_zero(m, n, true);
  return {-d0 / lower_cof, prefix[n - 1] + e0 / upper_cof};
}

}  // namespace detail

/// Lower and upper Hankel determinants of orders 1..n and the resulting
/// classification. Exact for Rational input.
///
/// For inexact input the zero test is relative. While the prefix is interior,
/// H_l / H_{l-2} is the distance from m_l to the lower (upper) end of its
/// feasible range and the two distances sum to the range width W. H_l counts
/// as zero when its distance is <= 10^(8-p) max(W, m_{l/2}), p the working
/// digits; rounding noise in that distance scales with the moments in the
/// new pivot row, not with W. Past the first zero the determinants are
/// compared with |H_{l-2}| instead: the ratio is a new pivot, which is
/// rounding noise of order 10^-p for a singular matrix with entries in [0,1].
template <class T>
HankelReport<T> hankel_report(const BasicMomentSequence<T>& seq) {
  using std::abs;
  const auto& m = seq.values();
  const int n = seq.order();
  HankelReport<T> rep;
  rep.lower.reserve(n);
  rep.upper.reserve(n);
  for (int l = 1; l <= n; ++l) {
    rep.lower.push_back(detail::hankel_det(m, l, false));
    rep.upper.push_back(detail::hankel_det(m, l, true));
  }
  const T tol = detail::hankel_zero_tol<T>();
  // H_{l-2}, with H_{-1} = H_0 = 1
  auto before = [](const std::vector<T>& dets, int l) { return l >= 3 ? dets[l - 3] : T(1); };
  int first_zero = 0;
  bool negative = false;
  T scale_lo(1);
  T scale_hi(1);
  for (int l = 1; l <= n; ++l) {
    const T& d_lo = rep.lower[l - 1];
    const T& d_hi = rep.upper[l - 1];
    bool zero_lo = false;
    bool zero_hi = false;
    if (first_zero == 0) {
      const T r_lo = d_lo / before(rep.lower, l);
      const T r_hi = d_hi / before(rep.upper, l);
      T scale = abs(r_lo + r_hi);
      if (abs(m[l / 2]) > scale) scale = abs(m[l / 2]);
      zero_lo = abs(r_lo) <= tol * scale;
      zero_hi = abs(r_hi) <= tol * scale;
    } else {
      const T p_lo = abs(before(rep.lower, l));
      const T p_hi = abs(before(rep.upper, l));
      if (p_lo > T(0)) scale_lo = p_lo;
      if (p_hi > T(0)) scale_hi = p_hi;
      zero_lo = abs(d_lo) <= tol * scale_lo;
      zero_hi = abs(d_hi) <= tol * scale_hi;
    }
    if ((!zero_lo && d_lo < T(0)) || (!zero_hi && d_hi < T(0))) negative = true;
    if ((zero_lo || zero_hi) && first_zero == 0) first_zero = l;
  }
  if (negative) {
    rep.classification = Validity::Invalid;
  } else if (first_zero) {
    rep.classification = Validity::UniqueDiscrete;
    rep.first_zero = first_zero;
  } else {
    rep.classification = Validity::Interior;
  }
  return rep;
}

/// Feasible range (m_n^-, m_n^+) of the next moment after an interior prefix
/// m_0..m_{n-1}.
template <class T>
MomentBounds<T> moment_bounds(const BasicMomentSequence<T>& prefix) {
  const auto rep = hankel_report(prefix);
  if (!rep.interior()) throw DegeneratePrefix(prefix.order());
  return detail::moment_bounds_unchecked(prefix.values());
}

/// p_k = (m_k - m_k^-) / (m_k^+ - m_k^-), k = 1..n.
template <class T>
std::vector<T> canonical_moments(const BasicMomentSequence<T>& seq) {
  const int n = seq.order();
  const auto rep = hankel_report(seq);
  if (rep.classification == Validity::Invalid) throw DegeneratePrefix(n);
  std::vector<T> p;
  p.reserve(n);
  const auto& m = seq.values();
  for (int k = 1; k <= n; ++k) {
    if (!rep.interior_through(k - 1)) throw DegeneratePrefix(k - 1);
    const auto b = detail::moment_bounds_unchecked(std::vector<T>(m.begin(), m.begin() + k));
    p.push_back((m[k] - b.lower) / (b.upper - b.lower));
  }
  return p;
}

/// m_k = sum_i w_i x_i^k, k = 0..n.
template <class T>
BasicMomentSequence<T> discrete_moments(const std::vector<T>& atoms, const std::vector<T>& weights, int n) {
  if (atoms.size() != weights.size() || atoms.empty()) throw DomainError("discrete_moments: size mismatch");
  T total(0);
  for (const auto& w : weights) {
    if (!(w > T(0))) throw WeightSumError("discrete_moments: weights must be positive");
    total = total + w;
  }
  if (std::fabs(to_double(total) - 1.0) > 1e-12) throw WeightSumError("discrete_moments: weights must sum to 1");
  std::vector<T> m(n + 1, T(0));
  m[0] = T(1);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    T power(1);
    for (int k = 1; k <= n; ++k) {
      power = power * atoms[i];
      m[k] = m[k] + weights[i] * power;
    }
  }
  return BasicMomentSequence<T>(std::move(m));
}

}  // namespace hmt
