#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "graeffe/renvalue.hpp"

namespace graeffe {

/// Dense univariate polynomial, coeffs[i] multiplying x^i.
struct Poly {
  std::vector<std::complex<double>> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// The same polynomial with every coefficient in renormalized log-polar form,
/// all at the common depth k.
struct RenPoly {
  std::vector<RenValue> coeffs;
  int k = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

inline void validate(const Poly& f) {
  if (f.degree() < 1) throw std::invalid_argument("degree must be at least 1");
  const auto& lead = f.coeffs.back();
  if (lead.real() == 0.0 && lead.imag() == 0.0) {
    throw std::invalid_argument("degenerate leading coefficient");
  }
}

inline void validate(const RenPoly& f) {
  if (f.degree() < 1) throw std::invalid_argument("degree must be at least 1");
  if (is_ren_zero(f.coeffs.back())) {
    throw std::invalid_argument("degenerate leading coefficient");
  }
  for (const auto& c : f.coeffs) {
    if (c.k != f.k) {
      throw std::invalid_argument("inconsistent renormalization index");
    }
  }
}

/// Coefficient-wise logpolar lift at depth k.
inline RenPoly to_renpoly(const Poly& f, int k = 0) {
  validate(f);
  RenPoly r;
  r.k = k;
  r.coeffs.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) r.coeffs.push_back(logpolar(c, k));
  return r;
}

/// Re-express every coefficient at depth k_new (value-preserving).
inline RenPoly reindex_poly(const RenPoly& f, int k_new) {
  RenPoly r;
  r.k = k_new;
  r.coeffs.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) r.coeffs.push_back(reindex(c, k_new));
  return r;
}

/// Coefficient magnitudes at the polynomial's depth (mag fields only).
inline std::vector<double> mags(const RenPoly& f) {
  std::vector<double> m;
  m.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) m.push_back(c.mag);
  return m;
}

/// Given the limit magnitude vector (r_0, ..., r_d) of a fully iterated
/// polynomial, successive differences recover the root moduli in ascending
/// order: out[j] = exp(r_j - r_{j+1}) = |zeta_{d-j}|.
/// Leading -inf entries map to exact zero moduli; -inf entries elsewhere
/// (transient cancellations) do not describe a converged limit and the
/// corresponding ratios are not meaningful.
inline std::vector<double> moduli_from_limits(std::span<const double> r) {
  if (r.size() < 2) {
    throw std::invalid_argument("moduli_from_limits: need degree >= 1");
  }
  std::vector<double> out;
  out.reserve(r.size() - 1);
  for (size_t j = 0; j + 1 < r.size(); ++j) {
    out.push_back(std::exp(r[j] - r[j + 1]));
  }
  return out;
}

/// Horner evaluation.
inline std::complex<double> eval(const Poly& f, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (int i = f.degree(); i >= 0; --i) acc = acc * z + f.coeffs[i];
  return acc;
}

/// Expand leading * prod (x - roots[j]).
inline Poly poly_from_roots(std::complex<double> leading,
                            std::span<const std::complex<double>> roots) {
  Poly f;
  f.coeffs.assign(1, leading);
  for (const auto& r : roots) {
    f.coeffs.push_back(0.0);
    for (int i = static_cast<int>(f.coeffs.size()) - 1; i >= 1; --i) {
      f.coeffs[i] = f.coeffs[i - 1] - r * f.coeffs[i];
    }
    f.coeffs[0] *= -r;
  }
  return f;
}

}  // namespace graeffe
