#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "graeffe/poly.hpp"

namespace graeffe {

struct OracleRoots {
  std::vector<std::complex<double>> roots;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

namespace detail {

inline std::complex<double> horner(const std::vector<std::complex<double>>& c,
                                   std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline double horner_envelope(const std::vector<std::complex<double>>& c,
                              double au) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * au + std::abs(*it);
  }
  return acc;
}

/// Backward error of z as a root of g: |g(z)| / sum_i |g_i||z|^i. For |z| > 1
/// both numerator and denominator are evaluated through the reversed
/// polynomial at 1/z; the |z|^deg factors cancel, so nothing overflows.
inline double backward_error(const std::vector<std::complex<double>>& g,
                             const std::vector<std::complex<double>>& grev,
                             std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    return std::numeric_limits<double>::infinity();
  }
  const bool inside = std::abs(z) <= 1.0;
  const auto& c = inside ? g : grev;
  const std::complex<double> u = inside ? z : 1.0 / z;
  const double den = horner_envelope(c, std::abs(u));
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(horner(c, u)) / den;
}

struct NewtonCorrection {
  std::complex<double> value{0.0};
  bool exact_root = false;
  bool stationary = false;
};

/// g(z)/g'(z) without overflow: direct Horner inside the unit disk, through
/// the reversed polynomial outside, using
///   g(z) = z^n r(w), g'(z) = z^{n-1} (n r(w) - w r'(w)), w = 1/z.
inline NewtonCorrection newton_correction(
    const std::vector<std::complex<double>>& g,
    const std::vector<std::complex<double>>& dg,
    const std::vector<std::complex<double>>& grev,
    const std::vector<std::complex<double>>& dgrev, std::complex<double> z) {
  NewtonCorrection out;
  std::complex<double> num, den;
  if (std::abs(z) <= 1.0) {
    num = horner(g, z);
    den = horner(dg, z);
  } else {
    const std::complex<double> w = 1.0 / z;
    const std::complex<double> r = horner(grev, w);
    const std::complex<double> rp = horner(dgrev, w);
    const double n = static_cast<double>(g.size() - 1);
    num = z * r;
    den = n * r - w * rp;
  }
  if (num == std::complex<double>(0.0)) {
    out.exact_root = true;
    return out;
  }
  if (den == std::complex<double>(0.0)) {
    out.stationary = true;
    return out;
  }
  out.value = num / den;
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag())) {
    out.stationary = true;
    out.value = 0.0;
  }
  return out;
}

/// Starting points on the annuli suggested by the Newton polygon: for each
/// edge of the upper convex hull of (i, ln|g_i|) spanning c indices, place c
/// points on the circle of radius |g_lo/g_hi|^{1/c}, angles spread with a
/// per-annulus twist so distinct annuli never line up.
inline std::vector<std::complex<double>> polygon_start_points(
    const std::vector<std::complex<double>>& g) {
  const int n = static_cast<int>(g.size()) - 1;
  std::vector<int> xs;
  std::vector<double> ys;
  for (int i = 0; i <= n; ++i) {
    if (g[i] != std::complex<double>(0.0)) {
      xs.push_back(i);
      ys.push_back(std::log(std::abs(g[i])));
    }
  }
  std::vector<size_t> hull;
  for (size_t t = 0; t < xs.size(); ++t) {
    while (hull.size() >= 2) {
      const size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross =
          static_cast<double>(xs[b] - xs[a]) * (ys[t] - ys[a]) -
          static_cast<double>(xs[t] - xs[a]) * (ys[b] - ys[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(t);
  }

  std::vector<std::complex<double>> z;
  z.reserve(n);
  for (size_t e = 0; e + 1 < hull.size(); ++e) {
    const size_t a = hull[e], b = hull[e + 1];
    const int count = xs[b] - xs[a];
    const double radius = std::min(
        std::exp((ys[a] - ys[b]) / count), 1e300);
    for (int t = 0; t < count; ++t) {
      z.push_back(std::polar(
          radius, 2.0 * kPi * t / count + 0.4 + 0.25 * static_cast<double>(e)));
    }
  }
  return z;
}

}  // namespace detail

/// Aberth-Ehrlich simultaneous root finder, used as the independent reference
/// for moduli computed through the Graeffe pipeline. Exact zero roots
/// (trailing zero coefficients) are deflated first; the remaining roots start
/// on the annuli given by the Newton polygon of the coefficient magnitudes,
/// and the reported residual is the largest per-root backward error
/// |g(z)| / sum_i|g_i||z|^i. Applicable up to degree 512.
inline OracleRoots find_roots(const Poly& f, double tol = 1e-10,
                              int max_iter = 200) {
  validate(f);
  const int d = f.degree();
  if (d > 512) {
    throw std::invalid_argument("find_roots supports degree <= 512");
  }

  OracleRoots out;

  int m = 0;
  while (m < d && f.coeffs[m] == std::complex<double>(0.0)) ++m;
  out.roots.assign(m, 0.0);

  const int n = d - m;
  std::vector<std::complex<double>> g(f.coeffs.begin() + m, f.coeffs.end());
  if (n == 1) {
    out.roots.push_back(-g[0] / g[1]);
  } else if (n > 1) {
    std::vector<std::complex<double>> dg(n);
    for (int i = 1; i <= n; ++i) dg[i - 1] = static_cast<double>(i) * g[i];
    std::vector<std::complex<double>> grev(g.rbegin(), g.rend());
    std::vector<std::complex<double>> dgrev(n);
    for (int i = 1; i <= n; ++i) {
      dgrev[i - 1] = static_cast<double>(i) * grev[i];
    }

    std::vector<std::complex<double>> z = detail::polygon_start_points(g);
    const double step_tol = std::max(1e-14, tol * 1e-3);
    for (int it = 0; it < max_iter; ++it) {
      double max_step = 0.0;
      for (int j = 0; j < n; ++j) {
        const detail::NewtonCorrection nc =
            detail::newton_correction(g, dg, grev, dgrev, z[j]);
        if (nc.exact_root) continue;
        if (nc.stationary) {
          z[j] += std::complex<double>(1e-6, 1e-6) *
                  std::max(1.0, std::abs(z[j]));
          max_step = std::numeric_limits<double>::infinity();
          continue;
        }
        std::complex<double> s = 0.0;
        for (int l = 0; l < n; ++l) {
          if (l == j) continue;
          const std::complex<double> diff = z[j] - z[l];
          if (diff != std::complex<double>(0.0)) s += 1.0 / diff;
        }
        const std::complex<double> denom = 1.0 - nc.value * s;
        std::complex<double> w =
            (denom == std::complex<double>(0.0)) ? nc.value : nc.value / denom;
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
          w = nc.value;
        }
        const std::complex<double> next = z[j] - w;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) {
          z[j] += std::complex<double>(1e-6, 1e-6) *
                  std::max(1.0, std::abs(z[j]));
          max_step = std::numeric_limits<double>::infinity();
          continue;
        }
        z[j] = next;
        max_step =
            std::max(max_step, std::abs(w) / std::max(1.0, std::abs(z[j])));
      }
      if (max_step < step_tol) break;
    }
    out.roots.insert(out.roots.end(), z.begin(), z.end());
  }

  out.residual = 0.0;
  if (n >= 1) {
    std::vector<std::complex<double>> grev(g.rbegin(), g.rend());
    for (int j = m; j < d; ++j) {
      const double e = detail::backward_error(g, grev, out.roots[j]);
      out.residual = std::isfinite(e)
                         ? std::max(out.residual, e)
                         : std::numeric_limits<double>::infinity();
    }
  }
  out.converged = out.residual < tol;
  return out;
}

/// ln|root| for each root, sorted descending (-inf for exact zero roots).
/// Meaningful as a reference only when the oracle converged.
inline std::vector<double> sorted_log_moduli(const OracleRoots& r) {
  std::vector<double> lm;
  lm.reserve(r.roots.size());
  for (const auto& z : r.roots) {
    const double a = std::abs(z);
    lm.push_back(a == 0.0 ? -std::numeric_limits<double>::infinity()
                          : std::log(a));
  }
  std::sort(lm.begin(), lm.end(), std::greater<double>());
  return lm;
}

}  // namespace graeffe
