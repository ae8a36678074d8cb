#pragma once

// Moment sequences from mixtures of completely monotone functions with a
// prescribed rate of decay. The same formulas continue analytically to
// complex arguments, which gives the imaginary moments m_{js}.

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "hmt/errors.hpp"
#include "hmt/generators/rng.hpp"
#include "hmt/moment_core.hpp"
#include "hmt/numerics/special.hpp"
#include "hmt/numerics/xreal.hpp"

namespace hmt {

enum class DecayClass { SubPower, Power, SoftPower, Intermediate, SoftExponential, Exponential };

inline constexpr DecayClass kAllDecayClasses[] = {DecayClass::SubPower,     DecayClass::Power,
                                                  DecayClass::SoftPower,    DecayClass::Intermediate,
                                                  DecayClass::SoftExponential, DecayClass::Exponential};

inline std::string_view decay_class_name(DecayClass c) {
  switch (c) {
    case DecayClass::SubPower: return "sub-power";
    case DecayClass::Power: return "power";
    case DecayClass::SoftPower: return "soft-power";
    case DecayClass::Intermediate: return "intermediate";
    case DecayClass::SoftExponential: return "soft-exponential";
    case DecayClass::Exponential: return "exponential";
  }
  return "?";
}

inline DecayClass parse_decay_class(std::string_view name) {
  for (auto c : kAllDecayClasses) {
    if (decay_class_name(c) == name) return c;
  }
  throw DomainError("unknown decay class: " + std::string(name));
}

struct DecayComponent {
  double s = 1.0;  // rate
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;  // mixture weight
};

struct DecaySpec {
  DecayClass cls = DecayClass::Power;
  double s = 1.0;
  std::vector<DecayComponent> components;

  void validate() const {
    if (components.empty()) throw DomainError("decay spec needs at least one component");
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
      const auto& k = components[i];
      if (!(k.s > 0.0) || !(k.a > 0.0) || !(k.b > 0.0) || !(k.c > 0.0)) {
        throw DomainError("decay spec parameters must be positive");
      }
      if (cls == DecayClass::Exponential && i > 0 && k.s < s) {
        throw DomainError("exponential decay: component rates must not be below s");
      }
      total += k.c;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw WeightSumError("decay spec weights must sum to 1");
  }
};

namespace detail {

template <class Num>
Num lift(double x) {
  if constexpr (std::is_same_v<Num, ComplexX>) {
    return ComplexX(XReal(x));
  } else {
    return Num(x);
  }
}

// One c.m. function F_class(z; a, b, s). Num is a real or complex type with
// exp, log and sqrt found by argument-dependent or std lookup.
template <class Num>
Num cm_function(DecayClass cls, const Num& z, double a, double b, double s) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const Num one = lift<Num>(1.0);
  const Num na = lift<Num>(a);
  const Num nb = lift<Num>(b);
  const Num ns = lift<Num>(s);
  const Num log_a = lift<Num>(std::log(a));
  switch (cls) {
    case DecayClass::SubPower:
      return exp(ns * log_a - ns * log(log(z + one) + na));
    case DecayClass::Power:
      return exp(ns * log_a - ns * log(z + na));
    case DecayClass::SoftPower:
      return exp(ns * log_a - ns * log(z + na)) * nb / (log(z + one) + nb);
    case DecayClass::Intermediate:
      return exp(ns * sqrt(na) - ns * sqrt(z + na));
    case DecayClass::SoftExponential:
      return exp(-(ns * z)) * na / (z + na);
    case DecayClass::Exponential:
      return exp(-(ns * z));
  }
  return one;
}

}  // namespace detail

/// m_z = sum_i c_i F_class(z; a_i, b_i, s_i). Num may be double, XReal,
/// std::complex<double> or ComplexX.
template <class Num>
Num cm_moment(const DecaySpec& spec, const Num& z) {
  Num total = detail::lift<Num>(0.0);
  for (const auto& k : spec.components) {
    total = total + detail::lift<Num>(k.c) * detail::cm_function(spec.cls, z, k.a, k.b, k.s);
  }
  return total;
}

/// Integer moments m_0..m_n at the working precision, with m_0 = 1 exactly.
inline MomentSequence cm_moments(const DecaySpec& spec, int n) {
  std::vector<XReal> m(n + 1);
  XReal weight_sum(0);
  for (const auto& k : spec.components) weight_sum = weight_sum + XReal(k.c);
  m[0] = XReal(1);
  for (int j = 1; j <= n; ++j) m[j] = cm_moment(spec, XReal(j)) / weight_sum;
  return MomentSequence(std::move(m));
}

/// Random spec of the given class: s ~ U(0,10) (s = -log U(0,1) for the two
/// exponential classes), N ~ U{1..10}, a_i, b_i, c_i ~ U(0,10), c normalized;
/// for exponential decay s_i = -log U(0, e^-s) for i >= 2.
inline DecaySpec random_decay_spec(DecayClass cls, Rng& rng) {
  DecaySpec spec;
  spec.cls = cls;
  const bool exp_like = cls == DecayClass::Exponential || cls == DecayClass::SoftExponential;
  spec.s = exp_like ? -std::log(rng.uniform()) : rng.uniform(0.0, 10.0);
  const int n = static_cast<int>(rng.uniform_int(1, 10));
  spec.components.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& k = spec.components[i];
    k.s = spec.s;
    if (cls == DecayClass::Exponential && i > 0) k.s = -std::log(rng.uniform() * std::exp(-spec.s));
  }
  for (auto& k : spec.components) k.a = rng.uniform(0.0, 10.0);
  for (auto& k : spec.components) k.b = rng.uniform(0.0, 10.0);
  double total = 0.0;
  for (auto& k : spec.components) total += (k.c = rng.uniform(0.0, 10.0));
  for (auto& k : spec.components) k.c /= total;
  return spec;
}

}  // namespace hmt
