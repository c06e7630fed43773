#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graeffe/newton_diagram.hpp"
#include "graeffe/poly.hpp"
#include "graeffe/renvalue.hpp"

namespace graeffe {

/// One classical Graeffe root-squaring step in coefficient space:
/// h(x^2) = (-1)^d f(x) f(-x), so the roots of h are the squared roots of f.
///   h_i = (-1)^{d+i} f_i^2 + 2 * sum_{j=1..min(i,d-i)} (-1)^{d+i-j} f_{i-j} f_{i+j}
inline Poly graeffe_step_classical(const Poly& f) {
  validate(f);
  const int d = f.degree();
  auto sgn = [](int n) { return (n % 2 == 0) ? 1.0 : -1.0; };
  Poly h;
  h.coeffs.resize(d + 1);
  for (int i = 0; i <= d; ++i) {
    std::complex<double> acc = sgn(d + i) * f.coeffs[i] * f.coeffs[i];
    std::complex<double> cross = 0.0;
    const int m = std::min(i, d - i);
    for (int j = 1; j <= m; ++j) {
      cross += sgn(d + i - j) * f.coeffs[i - j] * f.coeffs[i + j];
    }
    h.coeffs[i] = acc + 2.0 * cross;
  }
  return h;
}

namespace detail {

inline RenValue apply_sign(double s, RenValue v) {
  if (s < 0.0 && !is_ren_zero(v)) v.arg = wrap_angle(v.arg + kPi);
  return v;
}

}  // namespace detail

/// The same step performed entirely on renormalized coefficients. Inputs are
/// first re-expressed at depth k+1 (their magnitudes halve), which keeps the
/// output magnitudes in the same bounded range as the input's: the result
/// holds 2^-(k+1) * ln of the step-(k+1) coefficients.
inline RenPoly graeffe_step_ren(const RenPoly& f) {
  validate(f);
  const int d = f.degree();
  const int kk = f.k + 1;
  auto sgn = [](int n) { return (n % 2 == 0) ? 1.0 : -1.0; };

  std::vector<RenValue> in;
  in.reserve(d + 1);
  for (const auto& c : f.coeffs) in.push_back(reindex(c, kk));

  RenPoly h;
  h.k = kk;
  h.coeffs.resize(d + 1);
  for (int i = 0; i <= d; ++i) {
    RenValue square = detail::apply_sign(sgn(d + i), renpow(in[i], 2.0));
    const int m = std::min(i, d - i);
    if (m == 0) {
      h.coeffs[i] = square;
      continue;
    }
    RenValue cross =
        detail::apply_sign(sgn(d + i - 1), rentimes(in[i - 1], in[i + 1]));
    for (int j = 2; j <= m; ++j) {
      cross = renplus(cross, detail::apply_sign(
                                 sgn(d + i - j),
                                 rentimes(in[i - j], in[i + j])));
    }
    h.coeffs[i] = renplus(square, renscal(2.0, cross));
  }
  return h;
}

/// Iteration count sufficient for b bits of output accuracy with failure
/// probability delta, following k >= c1 + c2*log2(b) - c3*log2(delta).
inline int required_iterations(double b, double delta, int d, double c1,
                               double c2 = 1.0, double c3 = 1.0) {
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  if (!(b >= 1.0 + std::log2(static_cast<double>(d)))) {
    throw std::invalid_argument("bits must satisfy b >= 1 + log2(d)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  return static_cast<int>(
      std::ceil(c1 + c2 * std::log2(b) + c3 * std::log2(1.0 / delta)));
}

/// Default c1; scales like 2*log2(d), with slack so the bound is not tight
/// for unlucky instances.
inline double default_c1(int d) {
  return 2.0 * std::log2(static_cast<double>(d)) + 8.0;
}

struct IterOptions {
  double tol = std::ldexp(1.0, -46);  // residual target per coefficient
  int max_iter = 0;      // 0: derive from bits/delta via required_iterations
  double bits = 0.0;     // 0: derive from tol
  double delta = 1e-3;
  double c1 = std::numeric_limits<double>::quiet_NaN();  // NaN: default_c1(d)
  double c2 = 1.0;
  double c3 = 1.0;
  std::optional<double> sigma{};  // cluster threshold; default choose_sigma
};

struct ModuliResult {
  std::vector<double> log_moduli;  // ln|zeta_i|, descending, size d
  ClusterReport clusters;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  double range_bound = 0.0;  // max over iterations of max_i |mag_i|
  std::vector<double> residual_trace;  // residual after each step
  std::vector<double> range_trace;     // max_i |mag_i| before/after each step
};

namespace detail {

inline double max_finite_abs_mag(const RenPoly& f) {
  double r = 0.0;
  for (const auto& c : f.coeffs) {
    if (std::isfinite(c.mag)) r = std::max(r, std::abs(c.mag));
  }
  return r;
}

}  // namespace detail

/// Run renormalized Graeffe steps until the coefficient magnitudes settle
/// (residual below tol on two consecutive steps) or the iteration budget is
/// exhausted, then read the root moduli off the final Newton diagram.
/// The residual compares magnitudes that are finite at both ends of a step;
/// coefficients that are exactly zero on either side carry no limit
/// information for that step.
inline ModuliResult iterate_ren(RenPoly rp, const IterOptions& opts = {}) {
  validate(rp);
  const int d = rp.degree();
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  const double bits =
      opts.bits > 0.0
          ? opts.bits
          : std::max(1.0 + std::log2(static_cast<double>(d)),
                     std::round(-std::log2(opts.tol)));
  const double c1 = std::isnan(opts.c1) ? default_c1(d) : opts.c1;
  const int k_max = opts.max_iter > 0
                        ? opts.max_iter
                        : required_iterations(bits, opts.delta, d, c1,
                                              opts.c2, opts.c3);

  ModuliResult res;
  res.range_trace.push_back(detail::max_finite_abs_mag(rp));
  int consecutive = 0;
  for (int it = 1; it <= k_max; ++it) {
    RenPoly next = graeffe_step_ren(rp);
    double r = 0.0;
    for (int i = 0; i <= d; ++i) {
      if (std::isfinite(next.coeffs[i].mag) &&
          std::isfinite(rp.coeffs[i].mag)) {
        r = std::max(r, std::abs(next.coeffs[i].mag - rp.coeffs[i].mag));
      }
    }
    rp = std::move(next);
    res.residual_trace.push_back(r);
    res.range_trace.push_back(detail::max_finite_abs_mag(rp));
    res.iterations = it;
    res.residual = r;
    consecutive = (r < opts.tol) ? consecutive + 1 : 0;
    if (consecutive >= 2) {
      res.converged = true;
      break;
    }
  }
  res.range_bound =
      *std::max_element(res.range_trace.begin(), res.range_trace.end());

  res.clusters =
      detect_clusters(build_diagram(rp), choose_sigma(rp.k, opts.sigma));
  for (const auto& c : res.clusters.clusters) {
    res.log_moduli.insert(res.log_moduli.end(), c.size, c.ln_modulus);
  }
  std::sort(res.log_moduli.begin(), res.log_moduli.end(),
            std::greater<double>());
  return res;
}

inline ModuliResult iterate(const Poly& f, const IterOptions& opts = {}) {
  return iterate_ren(to_renpoly(f, 0), opts);
}

}  // namespace graeffe
