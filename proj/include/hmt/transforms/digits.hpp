#pragma once

// Decimal digits needed by the linear transforms and by c.m. moments.

#include <algorithm>
#include <cmath>

#include "hmt/errors.hpp"
#include "hmt/generators/decay.hpp"
#include "hmt/transforms/matrices.hpp"

namespace hmt {

inline constexpr int kGuardDigits = 10;

/// BM: n/2 - log10 n digits; FL and FC: 0.9 n digits; plus the guard.
inline int required_digits(MatrixKind method, int n) {
  if (n < 1) throw DomainError("required_digits: n must be >= 1");
  double need = 0.0;
  if (method == MatrixKind::BM) {
    need = n / 2.0 - std::log10(static_cast<double>(n));
  } else {
    need = 0.9 * n;
  }
  return std::max(0, static_cast<int>(std::ceil(need - 1e-12))) + kGuardDigits;
}

/// Digits needed to carry m_n of one c.m. term: s log10((n+a)/a) for power
/// decay, s n / 2 for exponential decay, and -log10 of the term itself for
/// the other classes; plus the guard.
inline int required_moment_digits(DecayClass cls, double s, double a, double b, int n) {
  if (n < 1) throw DomainError("required_moment_digits: n must be >= 1");
  double need = 0.0;
  switch (cls) {
    case DecayClass::Power:
      need = s * std::log10((n + a) / a);
      break;
    case DecayClass::Exponential:
      need = s * n / 2.0;
      break;
    default:
      need = -std::log10(detail::cm_function<double>(cls, static_cast<double>(n), a, b, s));
      break;
  }
  return std::max(0, static_cast<int>(std::ceil(need - 1e-12))) + kGuardDigits;
}

/// Largest requirement over the components of a spec.
inline int required_moment_digits(const DecaySpec& spec, int n) {
  int out = kGuardDigits;
  for (const auto& k : spec.components) out = std::max(out, required_moment_digits(spec.cls, k.s, k.a, k.b, n));
  return out;
}

}  // namespace hmt
