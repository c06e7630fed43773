#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graeffe/oracle.hpp"
#include "graeffe/poly.hpp"

namespace graeffe {

enum class Kind { real, complex };

inline const char* kind_name(Kind k) {
  return k == Kind::real ? "real" : "complex";
}

/// Identifies the coefficient sampler so generated files are reproducible
/// across versions: mt19937_64 driving an explicit Box-Muller transform
/// (std::normal_distribution is not specified bit-for-bit across library
/// implementations).
inline constexpr const char* kGeneratorId = "kostlan-mt19937_64-boxmuller-v1";

/// Standard normal pairs from mt19937_64 via Box-Muller.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  std::pair<double, double> next_pair() {
    const double u1 = 1.0 - (eng_() >> 11) * 0x1.0p-53;  // (0, 1]
    const double u2 = (eng_() >> 11) * 0x1.0p-53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * kPi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  std::mt19937_64 eng_;
};

inline double ln_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Kostlan-distributed degree-d polynomial: coefficient i has variance
/// binom(d, i). Complex kind uses independent real and imaginary Gaussians
/// scaled by 1/sqrt(2) so E|f_i|^2 = binom(d, i); real kind uses a single
/// Gaussian. One Gaussian pair is consumed per coefficient for either kind so
/// real and complex streams stay aligned with the log-space generator below.
inline Poly gen_kostlan(int d, std::uint64_t seed, Kind kind) {
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  GaussianStream g(seed);
  Poly f;
  f.coeffs.reserve(d + 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i <= d; ++i) {
    const double amp = std::exp(0.5 * ln_binomial(d, i));
    const auto [g1, g2] = g.next_pair();
    if (kind == Kind::complex) {
      f.coeffs.emplace_back(amp * g1 * inv_sqrt2, amp * g2 * inv_sqrt2);
    } else {
      f.coeffs.emplace_back(amp * g1, 0.0);
    }
  }
  return f;
}

/// Same distribution and same random stream, but the coefficients are
/// produced directly in log-polar form, so degrees far beyond the overflow
/// threshold of sqrt(binom(d, i)) are representable.
inline RenPoly gen_kostlan_ren(int d, std::uint64_t seed,
                               Kind kind = Kind::complex) {
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  GaussianStream g(seed);
  RenPoly f;
  f.k = 0;
  f.coeffs.reserve(d + 1);
  const double half_ln2 = 0.5 * std::log(2.0);
  for (int i = 0; i <= d; ++i) {
    const double half_lnc = 0.5 * ln_binomial(d, i);
    const auto [g1, g2] = g.next_pair();
    if (kind == Kind::complex) {
      const double h = std::hypot(g1, g2);
      if (h == 0.0) {
        f.coeffs.push_back(ren_zero(0));
      } else {
        f.coeffs.push_back(
            {half_lnc + std::log(h) - half_ln2, std::atan2(g2, g1), 0});
      }
    } else {
      if (g1 == 0.0) {
        f.coeffs.push_back(ren_zero(0));
      } else {
        f.coeffs.push_back(
            {half_lnc + std::log(std::abs(g1)), g1 < 0.0 ? kPi : 0.0, 0});
      }
    }
  }
  return f;
}

/// Weyl (Bombieri) norm of a coefficient vector viewed in the degree-d space:
/// sqrt(sum |f_i|^2 / binom(d, i)), computed in log space so it survives
/// coefficients near the double range limits.
inline double weyl_norm(std::span<const std::complex<double>> coeffs, int d) {
  if (static_cast<int>(coeffs.size()) != d + 1) {
    throw std::invalid_argument("weyl_norm: coefficient count != degree + 1");
  }
  double max_t = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(coeffs.size());
  for (int i = 0; i <= d; ++i) {
    const double a = std::abs(coeffs[i]);
    terms[i] = (a == 0.0) ? -std::numeric_limits<double>::infinity()
                          : 2.0 * std::log(a) - ln_binomial(d, i);
    max_t = std::max(max_t, terms[i]);
  }
  if (max_t == -std::numeric_limits<double>::infinity()) return 0.0;
  double s = 0.0;
  for (double t : terms) {
    if (t != -std::numeric_limits<double>::infinity()) s += std::exp(t - max_t);
  }
  return std::exp(0.5 * (max_t + std::log(s)));
}

inline double weyl_norm(const Poly& f) {
  validate(f);
  return weyl_norm(f.coeffs, f.degree());
}

/// Projective (Fubini-Study style) distance derived from the Weyl inner
/// product: sqrt(1 - |<f,g>|^2 / (||f||^2 ||g||^2)). Scale-invariant in both
/// arguments; 0 for proportional polynomials, 1 for orthogonal ones. Both
/// polynomials are read in the coefficient space of the larger degree.
inline double weyl_distance_proj(const Poly& f, const Poly& g) {
  validate(f);
  validate(g);
  const int d = std::max(f.degree(), g.degree());
  auto at = [](const Poly& p, int i) {
    return i <= p.degree() ? p.coeffs[i] : std::complex<double>(0.0);
  };
  double nf = 0.0, ng = 0.0;
  std::complex<double> ip = 0.0;
  for (int i = 0; i <= d; ++i) {
    const double w = std::exp(-ln_binomial(d, i));
    nf += std::norm(at(f, i)) * w;
    ng += std::norm(at(g, i)) * w;
    ip += at(f, i) * std::conj(at(g, i)) * w;
  }
  const double cos2 = std::norm(ip) / (nf * ng);
  return std::sqrt(std::max(0.0, 1.0 - cos2));
}

/// Modulus-separation statistics of a root multiset.
///   rho     = min over modulus-adjacent pairs with |zi| < |zj| of 1 - |zi|/|zj|
///   rel_sep = min over the same pairs of (|zj| - |zi|) / sqrt(1 + |zi|^2)
/// all_equal flags the degenerate case of a single shared modulus (both
/// statistics are then 0).
struct SeparationStats {
  double rho = 0.0;
  double rel_sep = 0.0;
  bool all_equal = false;
};

inline SeparationStats separation_from_moduli(std::vector<double> r) {
  if (r.size() < 2) {
    throw std::invalid_argument("separation: need at least two roots");
  }
  std::sort(r.begin(), r.end());
  SeparationStats st;
  st.rho = std::numeric_limits<double>::infinity();
  st.rel_sep = std::numeric_limits<double>::infinity();
  bool any = false;
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i] == r[i + 1]) continue;
    any = true;
    st.rho = std::min(st.rho, 1.0 - r[i] / r[i + 1]);
    st.rel_sep = std::min(st.rel_sep,
                          (r[i + 1] - r[i]) / std::sqrt(1.0 + r[i] * r[i]));
  }
  if (!any) {
    st.rho = 0.0;
    st.rel_sep = 0.0;
    st.all_equal = true;
  }
  return st;
}

inline SeparationStats separation(
    std::span<const std::complex<double>> roots) {
  std::vector<double> r;
  r.reserve(roots.size());
  for (const auto& z : roots) r.push_back(std::abs(z));
  return separation_from_moduli(std::move(r));
}

/// Constructive check that rho lower-bounds the relative Weyl distance to the
/// nearest polynomial with two roots of equal modulus: shrink the larger root
/// of the pair attaining rho onto the modulus of the smaller, rebuild h from
/// the perturbed roots, and compare ||f - h|| / ||f|| against rho * sqrt(d).
struct CntCheck {
  double rho = 0.0;
  double lhs = 0.0;  // ||f - h||_W / ||f||_W
  double rhs = 0.0;  // rho * sqrt(d)
  bool ok = true;
};

inline CntCheck cnt_constructive_check(
    const Poly& f, std::span<const std::complex<double>> roots) {
  validate(f);
  const int d = f.degree();
  if (static_cast<int>(roots.size()) != d) {
    throw std::invalid_argument("cnt check: root count != degree");
  }
  std::vector<std::complex<double>> sorted(roots.begin(), roots.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              return std::abs(a) < std::abs(b);
            });

  CntCheck chk;
  int big = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < d; ++i) {
    const double ri = std::abs(sorted[i]);
    const double rj = std::abs(sorted[i + 1]);
    if (ri == rj) continue;
    const double cand = 1.0 - ri / rj;
    if (cand < best) {
      best = cand;
      big = i + 1;
    }
  }
  if (big < 0) {
    // All moduli already coincide: f sits on the equal-modulus set.
    return chk;
  }
  chk.rho = best;
  sorted[big] *= 1.0 - chk.rho;
  const Poly h = poly_from_roots(f.coeffs.back(), sorted);

  std::vector<std::complex<double>> diff(d + 1);
  for (int i = 0; i <= d; ++i) diff[i] = f.coeffs[i] - h.coeffs[i];
  chk.lhs = weyl_norm(diff, d) / weyl_norm(f);
  chk.rhs = chk.rho * std::sqrt(static_cast<double>(d));
  chk.ok = chk.lhs <= chk.rhs;
  return chk;
}

/// Monte Carlo tail of the minimal modulus ratio under the Kostlan
/// distribution: for each sample, the smallest ratio |z_(i+1)|/|z_(i)| over
/// modulus-adjacent distinct pairs; points record how often that ratio
/// exceeds 1 + eps. A tail bounded by M * eps shows up as slope ~1 in
/// log(1 - p_hat) against log(eps).
struct TailPoint {
  double eps = 0.0;
  long exceed_count = 0;
  double p_hat = 0.0;  // fraction of samples with min ratio > 1 + eps
};

struct TailEstimate {
  std::vector<TailPoint> points;
  int samples = 0;
  int failed_samples = 0;  // oracle non-convergence, excluded from counts
  double slope = std::numeric_limits<double>::quiet_NaN();
  double m_hat = std::numeric_limits<double>::quiet_NaN();
};

inline TailEstimate separation_tail_estimate(int d, int samples,
                                         std::span<const double> eps_grid,
                                         std::uint64_t seed,
                                         double oracle_tol = 1e-10) {
  if (d < 2) throw std::invalid_argument("degree must be at least 2");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  TailEstimate est;
  est.samples = samples;
  for (double e : eps_grid) est.points.push_back({e, 0, 0.0});

  std::vector<double> min_ratios;
  min_ratios.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    const Poly f = gen_kostlan(d, seed + static_cast<std::uint64_t>(s),
                               Kind::complex);
    const OracleRoots r = find_roots(f, oracle_tol);
    if (!r.converged) {
      ++est.failed_samples;
      continue;
    }
    std::vector<double> mod;
    mod.reserve(d);
    for (const auto& z : r.roots) mod.push_back(std::abs(z));
    std::sort(mod.begin(), mod.end());
    double mr = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < d; ++i) {
      if (mod[i] > 0.0 && mod[i + 1] > mod[i]) {
        mr = std::min(mr, mod[i + 1] / mod[i]);
      }
    }
    if (!std::isfinite(mr)) mr = 1.0;  // no usable pair: count as unseparated
    min_ratios.push_back(mr);
  }

  const double n = static_cast<double>(min_ratios.size());
  if (n == 0.0) return est;
  for (auto& pt : est.points) {
    for (double mr : min_ratios) {
      if (mr > 1.0 + pt.eps) ++pt.exceed_count;
    }
    pt.p_hat = pt.exceed_count / n;
  }

  // Least-squares fit of log(tail) vs log(eps) over usable points.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int cnt = 0;
  double log_m_sum = 0.0;
  for (const auto& pt : est.points) {
    const double tail = 1.0 - pt.p_hat;
    if (!(pt.eps > 0.0) || !(tail > 0.0)) continue;
    const double x = std::log(pt.eps);
    const double y = std::log(tail);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    log_m_sum += y - x;
    ++cnt;
  }
  if (cnt >= 2) {
    est.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    est.m_hat = std::exp(log_m_sum / cnt);
  }
  return est;
}

}  // namespace graeffe
