#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graeffe/poly.hpp"

namespace graeffe {

/// Renormalized Newton diagram of a RenPoly: values[i] = -mag_i, with +inf
/// standing in for zero coefficients. slopes[i] = values[i+1] - values[i];
/// after enough iterations the slope over [i, i+1] approaches
/// 2^-k * ln of the 2^k-th power of |zeta_{d-i}|, i.e. ln|zeta_{d-i}| with
/// roots ordered by descending modulus. Slopes touching infinite values are
/// informational only.
struct NewtonDiagram {
  std::vector<double> values;
  std::vector<double> slopes;
  int k = 0;
};

/// One group of roots sharing a common modulus. Roots are indexed 0..d-1 in
/// descending modulus order; the cluster covers start_root_index ..
/// start_root_index + size - 1 and ln_modulus is the shared ln|zeta|
/// (-inf for the cluster of exact zero roots).
struct Cluster {
  int start_root_index = 0;
  int size = 0;
  double ln_modulus = 0.0;
};

struct ClusterReport {
  std::vector<Cluster> clusters;  // descending modulus order
  double sigma_used = 0.0;
};

inline NewtonDiagram build_diagram(const RenPoly& f) {
  validate(f);
  NewtonDiagram dg;
  dg.k = f.k;
  dg.values.reserve(f.coeffs.size());
  for (const auto& c : f.coeffs) {
    dg.values.push_back(is_ren_zero(c)
                            ? std::numeric_limits<double>::infinity()
                            : -c.mag);
  }
  dg.slopes.reserve(f.coeffs.size() - 1);
  for (size_t i = 0; i + 1 < dg.values.size(); ++i) {
    dg.slopes.push_back(dg.values[i + 1] - dg.values[i]);
  }
  return dg;
}

/// Default split threshold at depth k: well above the 2^-k * ln 4 convexity
/// gap that equal-modulus groups cannot exceed, floored away from zero so the
/// criterion stays meaningful once 2^-k underflows the rounding noise.
inline double choose_sigma(int k, std::optional<double> prior = {}) {
  if (prior) {
    if (!(*prior > 0.0)) {
      throw std::invalid_argument("sigma must be positive");
    }
    return *prior;
  }
  return std::max(8.0 * std::ldexp(std::log(4.0), -k), 1e-6);
}

/// Segment the diagram into equal-modulus clusters: breakpoint i splits when
/// the discrete convexity gap values[i+1] - 2*values[i] + values[i-1] reaches
/// sigma, and merges when the gap is below sigma (in particular across
/// interior zero coefficients, whose gap is -inf conceptually). A cluster
/// spanning columns [lo, hi] has r = hi - lo roots of common
/// ln_modulus = (values[hi] - values[lo]) / r. A leading run of zero
/// coefficients becomes the terminal cluster of exact zero roots.
inline ClusterReport detect_clusters(const NewtonDiagram& dg, double sigma) {
  const int d = static_cast<int>(dg.values.size()) - 1;
  if (d < 1) throw std::invalid_argument("degree must be at least 1");
  const double floor_gap = std::ldexp(std::log(4.0), -dg.k);
  if (!(sigma > floor_gap)) {
    throw std::invalid_argument(
        "sigma must exceed 2^-k * ln 4; equal-modulus groups are not "
        "separable below that gap");
  }
  const double inf = std::numeric_limits<double>::infinity();

  ClusterReport rep;
  rep.sigma_used = sigma;

  int m = 0;  // length of the leading run of zero coefficients
  while (m < d && dg.values[m] == inf) ++m;

  std::vector<std::pair<int, int>> spans;
  int lo = m;
  for (int i = m + 1; i < d; ++i) {
    bool merge;
    if (dg.values[i] == inf) {
      merge = true;
    } else {
      const double gap = (dg.values[i + 1] - dg.values[i]) +
                         (dg.values[i - 1] - dg.values[i]);
      merge = gap < sigma;  // NaN gap (cannot arise from finite mags) splits
    }
    if (!merge) {
      spans.emplace_back(lo, i);
      lo = i;
    }
  }
  if (m < d) spans.emplace_back(lo, d);

  for (auto it = spans.rbegin(); it != spans.rend(); ++it) {
    const int r = it->second - it->first;
    rep.clusters.push_back(
        {d - it->second, r,
         (dg.values[it->second] - dg.values[it->first]) / r});
  }
  if (m > 0) {
    rep.clusters.push_back({d - m, m, -inf});
  }
  return rep;
}

}  // namespace graeffe
