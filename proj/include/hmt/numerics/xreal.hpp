#pragma once

// Extended-precision real numbers backed by MPFR.
//
// Every arithmetic result is produced at the calling thread's working
// precision (see ScopedDigits). Values remember the precision they were
// created with, so a moment sequence generated at 120 digits keeps reporting
// 120 digits after it has been copied around.

#include <mpfr.h>

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hmt {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline constexpr int kDefaultDigits = 64;
inline constexpr int kMinDigits = 16;

namespace detail {
inline int& thread_digits() {
  thread_local int digits = kDefaultDigits;
  return digits;
}

inline mpfr_prec_t digits_to_bits(int digits) {
  // 2^-bits <= 10^-digits / 2, so one rounding stays below 10^(1-digits).
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 2;
}

inline int bits_to_digits(mpfr_prec_t bits) {
  return static_cast<int>(std::floor(static_cast<double>(bits - 2) * 0.30102999566398120));
}
}  // namespace detail

inline int working_digits() { return detail::thread_digits(); }

/// Sets the working precision of the current thread for the lifetime of the
/// guard. Precision below kMinDigits is raised to kMinDigits.
class ScopedDigits {
 public:
  explicit ScopedDigits(int digits) : previous_(detail::thread_digits()) {
    detail::thread_digits() = digits < kMinDigits ? kMinDigits : digits;
  }
  ~ScopedDigits() { detail::thread_digits() = previous_; }
  ScopedDigits(const ScopedDigits&) = delete;
  ScopedDigits& operator=(const ScopedDigits&) = delete;

 private:
  int previous_;
};

class XReal {
 public:
  XReal() {
    mpfr_init2(v_, detail::digits_to_bits(working_digits()));
    mpfr_set_zero(v_, 1);
  }

  template <std::floating_point F>
  XReal(F value) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, detail::digits_to_bits(working_digits()));
    mpfr_set_d(v_, static_cast<double>(value), MPFR_RNDN);
  }

  template <std::integral I>
  XReal(I value) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, detail::digits_to_bits(working_digits()));
    if constexpr (std::is_signed_v<I>) {
      mpfr_set_sj(v_, static_cast<intmax_t>(value), MPFR_RNDN);
    } else {
      mpfr_set_uj(v_, static_cast<uintmax_t>(value), MPFR_RNDN);
    }
  }

  XReal(const Rational& q) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, detail::digits_to_bits(working_digits()));
    mpfr_set_q(v_, q.backend().data(), MPFR_RNDN);
  }

  XReal(const BigInt& z) {  // NOLINT(google-explicit-constructor)
    mpfr_init2(v_, detail::digits_to_bits(working_digits()));
    mpfr_set_z(v_, z.backend().data(), MPFR_RNDN);
  }

  /// Parses a decimal string, or an exact fraction "p/q".
  static XReal parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      return XReal(Rational(std::string(text)));
    }
    XReal out;
    const std::string s(text);
    if (mpfr_set_str(out.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      throw std::invalid_argument("not a decimal number: " + s);
    }
    return out;
  }

  XReal(const XReal& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  XReal(XReal&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  XReal& operator=(const XReal& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  XReal& operator=(XReal&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~XReal() { mpfr_clear(v_); }

  /// Decimal digits this value carries.
  [[nodiscard]] int digits() const { return detail::bits_to_digits(mpfr_get_prec(v_)); }

  [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  explicit operator double() const { return to_double(); }

  /// Scientific decimal text. digits == 0 prints enough to round-trip.
  [[nodiscard]] std::string to_string(int digits = 0) const {
    if (digits <= 0) digits = this->digits() + 3;
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(v_) != 0; }
  [[nodiscard]] int sign() const { return mpfr_sgn(v_); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  XReal& operator+=(const XReal& rhs) { return *this = *this + rhs; }
  XReal& operator-=(const XReal& rhs) { return *this = *this - rhs; }
  XReal& operator*=(const XReal& rhs) { return *this = *this * rhs; }
  XReal& operator/=(const XReal& rhs) { return *this = *this / rhs; }

  friend XReal operator+(const XReal& a, const XReal& b) {
    XReal r;
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend XReal operator-(const XReal& a, const XReal& b) {
    XReal r;
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend XReal operator*(const XReal& a, const XReal& b) {
    XReal r;
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend XReal operator/(const XReal& a, const XReal& b) {
    XReal r;
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend XReal operator-(const XReal& a) {
    XReal r;
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const XReal& a, const XReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const XReal& a, const XReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const XReal& a, const XReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const XReal& a, const XReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const XReal& a, const XReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

  friend std::ostream& operator<<(std::ostream& os, const XReal& x) {
    const auto p = os.precision();
    return os << x.to_string(p > 0 ? static_cast<int>(p) : 17);
  }

 private:
  mpfr_t v_;
};

namespace detail {
template <int (*Fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline XReal unary(const XReal& x) {
  XReal r;
  Fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline XReal abs(const XReal& x) { return detail::unary<mpfr_abs>(x); }
inline XReal sqrt(const XReal& x) { return detail::unary<mpfr_sqrt>(x); }
inline XReal exp(const XReal& x) { return detail::unary<mpfr_exp>(x); }
inline XReal expm1(const XReal& x) { return detail::unary<mpfr_expm1>(x); }
inline XReal log(const XReal& x) { return detail::unary<mpfr_log>(x); }
inline XReal log1p(const XReal& x) { return detail::unary<mpfr_log1p>(x); }
inline XReal log10(const XReal& x) { return detail::unary<mpfr_log10>(x); }
inline XReal sin(const XReal& x) { return detail::unary<mpfr_sin>(x); }
inline XReal cos(const XReal& x) { return detail::unary<mpfr_cos>(x); }
inline XReal tgamma(const XReal& x) { return detail::unary<mpfr_gamma>(x); }

inline XReal lgamma(const XReal& x) {
  XReal r;
  int sign = 0;
  mpfr_lgamma(r.get(), &sign, x.get(), MPFR_RNDN);
  return r;
}

inline XReal floor(const XReal& x) {
  XReal r;
  mpfr_floor(r.get(), x.get());
  return r;
}

inline XReal pow(const XReal& x, const XReal& y) {
  XReal r;
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

inline XReal pow(const XReal& x, long n) {
  XReal r;
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

inline XReal atan2(const XReal& y, const XReal& x) {
  XReal r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

/// x rounded to the current working precision.
inline XReal rounded(const XReal& x) {
  XReal out;
  mpfr_set(out.get(), x.get(), MPFR_RNDN);
  return out;
}

inline XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }
inline XReal min(const XReal& a, const XReal& b) { return b < a ? b : a; }

inline bool isfinite(const XReal& x) { return x.is_finite(); }

inline XReal const_pi() {
  XReal r;
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

inline double to_double(const XReal& x) { return x.to_double(); }
inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact conversion of a finite XReal to a rational.
inline Rational to_rational(const XReal& x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x.get());
  return q;
}

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace hmt
