#pragma once

// Truncated Taylor series of the characteristic function from integer
// moments: phi(s) ~ sum_{k<=N} (js)^k m_k / k!. The alternating terms grow
// to about e^s before they cancel, so about s log10(e) digits are lost.

#include <cmath>

#include "hmt/errors.hpp"
#include "hmt/moment_core.hpp"
#include "hmt/numerics/special.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

/// Digits needed to evaluate the series at s with 16 significant digits left.
inline int char_series_digits(double s) { return static_cast<int>(std::ceil(std::fabs(s) * std::log10(std::exp(1.0)))) + 16; }

/// The truncation bound sqrt(2 / (pi N)) only holds for N >= ceil(s e).
inline bool char_truncation_sufficient(int n, double s) { return n >= static_cast<int>(std::ceil(std::fabs(s) * std::exp(1.0))); }

inline ComplexX char_from_integer_moments(const MomentSequence& m, double s) {
  const int need = char_series_digits(s);
  int have = working_digits();
  for (const auto& v : m.values()) have = std::min(have, v.digits());
  if (have < need) throw PrecisionInsufficient(have, need);
  const XReal sx(s);
  XReal term(1);  // s^k / k!
  XReal re(0);
  XReal im(0);
  for (int k = 0; k <= m.order(); ++k) {
    if (k > 0) term = term * sx / XReal(k);
    const XReal t = term * m[k];
    switch (k % 4) {
      case 0: re = re + t; break;
      case 1: im = im + t; break;
      case 2: re = re - t; break;
      default: im = im - t; break;
    }
  }
  return {re, im};
}

}  // namespace hmt
