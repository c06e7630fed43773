#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace graeffe {

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown by renplus_limit when both operands have the same magnitude, so the
/// limit sum has no well-defined dominant term.
struct tie_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A complex value w stored at renormalization depth k as
///   mag = 2^-k * ln|w|,  arg = Arg w  (principal, in (-pi, pi]).
/// w = 0 is represented by mag = -infinity (arg is then conventionally 0).
struct RenValue {
  double mag = 0.0;
  double arg = 0.0;
  int k = 0;
};

inline bool is_ren_zero(const RenValue& x) {
  return x.mag == -std::numeric_limits<double>::infinity();
}

inline RenValue ren_zero(int k) {
  return {-std::numeric_limits<double>::infinity(), 0.0, k};
}

inline RenValue ren_one(int k) {
  return {0.0, 0.0, k};
}

/// Reduce an angle to the principal range (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w == -kPi) w = kPi;
  return w;
}

namespace detail {

inline void require_same_index(const RenValue& x, const RenValue& y,
                               const char* op) {
  if (x.k != y.k) {
    throw std::invalid_argument(std::string(op) +
                                ": renormalization index mismatch (k=" +
                                std::to_string(x.k) + " vs k=" +
                                std::to_string(y.k) + ")");
  }
}

// Below this value of 2^k*(b - a) the smaller addend cannot move the larger
// one by even an ulp, so renplus returns the larger operand unchanged.
inline const double kRenplusShortcut =
    std::log(std::numeric_limits<double>::epsilon()) - 1.0;

}  // namespace detail

/// Convert a complex number into renormalized log-polar form at depth k.
inline RenValue logpolar(std::complex<double> w, int k = 0) {
  if (w.real() == 0.0 && w.imag() == 0.0) return ren_zero(k);
  return {std::ldexp(std::log(std::abs(w)), -k), wrap_angle(std::arg(w)), k};
}

/// Inverse of logpolar. Throws std::range_error when 2^k*mag exceeds the
/// representable exponent range of double.
inline std::complex<double> unlogpolar(const RenValue& x) {
  if (is_ren_zero(x)) return {0.0, 0.0};
  const double t = std::ldexp(x.mag, x.k);
  if (t > std::log(std::numeric_limits<double>::max())) {
    throw std::range_error("unlogpolar: 2^k*mag = " + std::to_string(t) +
                           " overflows double");
  }
  return std::polar(std::exp(t), x.arg);
}

/// Re-express x at a different renormalization depth (same underlying value).
inline RenValue reindex(const RenValue& x, int k_new) {
  if (k_new < 0) throw std::invalid_argument("reindex: negative index");
  if (is_ren_zero(x)) return ren_zero(k_new);
  return {std::ldexp(x.mag, x.k - k_new), x.arg, k_new};
}

/// Renormalized product: magnitudes add, arguments add.
inline RenValue rentimes(const RenValue& x, const RenValue& y) {
  detail::require_same_index(x, y, "rentimes");
  if (is_ren_zero(x) || is_ren_zero(y)) return ren_zero(x.k);
  return {x.mag + y.mag, wrap_angle(x.arg + y.arg), x.k};
}

/// Renormalized real power x^lambda.
inline RenValue renpow(const RenValue& x, double lambda) {
  if (is_ren_zero(x)) return x;
  return {lambda * x.mag, wrap_angle(lambda * x.arg), x.k};
}

/// Multiply by an ordinary complex scalar. renscal(0, x) gives the zero value.
inline RenValue renscal(std::complex<double> z, const RenValue& x) {
  if (z.real() == 0.0 && z.imag() == 0.0) return ren_zero(x.k);
  if (is_ren_zero(x)) return x;
  return {x.mag + std::ldexp(std::log(std::abs(z)), -x.k),
          wrap_angle(x.arg + std::arg(z)), x.k};
}

/// Renormalized sum. Writing the operands as (a, alpha) and (b, beta) with
/// a >= b, the exact sum is e^{2^k a}(e^{i alpha} + e^{i beta + 2^k (b-a)})
/// up to the common factor, so
///   s = e^{i alpha} + e^{t + i beta},  t = 2^k (b - a) <= 0,
///   result = (a + 2^-k ln|s|, Arg s).
/// Equal magnitudes with exactly opposite arguments cancel to the zero value;
/// floating point alone cannot reproduce that cancellation, so it is handled
/// up front.
inline RenValue renplus(const RenValue& x, const RenValue& y) {
  detail::require_same_index(x, y, "renplus");
  if (is_ren_zero(x)) return y;
  if (is_ren_zero(y)) return x;
  double a, alpha, b, beta;
  if (x.mag > y.mag) {
    a = x.mag; alpha = x.arg; b = y.mag; beta = y.arg;
  } else {
    a = y.mag; alpha = y.arg; b = x.mag; beta = x.arg;
  }
  if (a == b && wrap_angle(alpha - beta) == kPi) return ren_zero(x.k);
  const double t = std::ldexp(b - a, x.k);
  if (t < detail::kRenplusShortcut) return {a, alpha, x.k};
  const double et = std::exp(t);
  const double re = std::cos(alpha) + et * std::cos(beta);
  const double im = std::sin(alpha) + et * std::sin(beta);
  if (re == 0.0 && im == 0.0) return ren_zero(x.k);
  return {a + std::ldexp(std::log(std::hypot(re, im)), -x.k),
          wrap_angle(std::atan2(im, re)), x.k};
}

/// Limit (k -> infinity) form of renplus: the strictly larger magnitude wins.
/// A tie carries no information about the limit and raises tie_error.
inline RenValue renplus_limit(const RenValue& x, const RenValue& y) {
  detail::require_same_index(x, y, "renplus_limit");
  if (x.mag == y.mag) {
    if (is_ren_zero(x)) return x;
    throw tie_error("renplus_limit: tie at mag = " + std::to_string(x.mag));
  }
  return x.mag > y.mag ? x : y;
}

}  // namespace graeffe
