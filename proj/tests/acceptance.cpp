// End-to-end acceptance gate. Each check prints one [PASS]/[FAIL] line;
// the exit code is the number of failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "graeffe/graeffe.hpp"
#include "graeffe/oracle.hpp"
#include "graeffe/randpoly.hpp"

using namespace graeffe;
using std::complex;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

void report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", num, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// 1. Solver ln-moduli agree with the simultaneous-iteration oracle to 1e-6 on
// at least 95% of 200 complex Kostlan instances, degrees 8..128; any misses
// must be near-degenerate (rel_sep < 1e-5). Whole sweep under five minutes.
void check_oracle_equivalence() {
  const auto t0 = clock_type::now();
  const int degrees[] = {8, 16, 32, 64, 128};
  int matched = 0, total = 0, excused = 0, unexcused = 0;
  double worst = 0.0;
  std::uint64_t seed = 100000;
  for (int d : degrees) {
    for (int rep = 0; rep < 40; ++rep, ++seed) {
      const Poly f = gen_kostlan(d, seed, Kind::complex);
      const ModuliResult res = iterate(f);
      const OracleRoots orc = find_roots(f);
      ++total;
      if (!orc.converged) {
        ++unexcused;
        continue;
      }
      const std::vector<double> want = sorted_log_moduli(orc);
      double err = 0.0;
      for (int i = 0; i <= d - 1; ++i) {
        err = std::max(err, std::abs(res.log_moduli[i] - want[i]));
      }
      worst = std::max(worst, err);
      if (err <= 1e-6) {
        ++matched;
        continue;
      }
      std::vector<double> mods;
      mods.reserve(want.size());
      for (double lm : want) mods.push_back(std::exp(lm));
      if (separation_from_moduli(mods).rel_sep < 1e-5) {
        ++excused;
      } else {
        ++unexcused;
      }
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = matched >= 190 && unexcused == 0 && dt < 300.0;
  report(1, "oracle equivalence", ok,
         strf("%d/%d within 1e-6 (worst %.3g, %d near-degenerate, %d "
              "unexcused) in %.1f s",
              matched, total, worst, excused, unexcused, dt));
}

// 2. Renormalized and classical iterations commute with the log-polar lift
// through six steps for every degree up to 16.
void check_commutation() {
  std::mt19937_64 rng(20202);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst_mag = 0.0, worst_arg = 0.0;
  int cases = 0, bad = 0;
  for (int d = 2; d <= 16; ++d) {
    Poly f;
    for (int i = 0; i <= d; ++i) f.coeffs.emplace_back(gauss(rng), gauss(rng));
    if (std::abs(f.coeffs.back()) < 1e-3) f.coeffs.back() = 1.0;

    Poly classical = f;
    RenPoly ren = to_renpoly(f);
    for (int step = 1; step <= 6; ++step) {
      classical = graeffe_step_classical(classical);
      ren = graeffe_step_ren(ren);
      const RenPoly want = to_renpoly(classical, step);
      for (int i = 0; i <= d; ++i) {
        ++cases;
        const RenValue &a = ren.coeffs[i], &b = want.coeffs[i];
        if (is_ren_zero(a) && is_ren_zero(b)) continue;
        const double dm = std::abs(a.mag - b.mag);
        const double da = std::abs(wrap_angle(a.arg - b.arg));
        worst_mag = std::max(worst_mag, dm);
        worst_arg = std::max(worst_arg, da);
        if (!(dm <= 1e-8 * std::max(1.0, std::abs(b.mag)) && da <= 1e-8)) {
          ++bad;
        }
      }
    }
  }
  report(2, "commutation with the classical path", bad == 0,
         strf("%d coefficient checks, worst mag gap %.3g, worst arg gap %.3g",
              cases, worst_mag, worst_arg));
}

// 3. Median solve time scales quadratically with the degree: log-log slope in
// [1.8, 2.3] over degrees 100..1000, five seeds each.
void check_quadratic_scaling() {
  std::vector<double> logs_d, logs_t;
  for (int d = 100; d <= 1000; d += 100) {
    std::vector<double> times;
    for (int rep = 0; rep < 5; ++rep) {
      const RenPoly rf =
          gen_kostlan_ren(d, 3000 + static_cast<std::uint64_t>(d) * 10 + rep,
                          Kind::real);
      const auto t0 = clock_type::now();
      const ModuliResult res = iterate_ren(rf);
      times.push_back(seconds_since(t0));
      (void)res;
    }
    std::sort(times.begin(), times.end());
    logs_d.push_back(std::log(static_cast<double>(d)));
    logs_t.push_back(std::log(times[times.size() / 2]));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(logs_d.size());
  for (size_t i = 0; i < logs_d.size(); ++i) {
    sx += logs_d[i];
    sy += logs_t[i];
    sxx += logs_d[i] * logs_d[i];
    sxy += logs_d[i] * logs_t[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report(3, "quadratic time scaling", slope >= 1.8 && slope <= 2.3,
         strf("log-log slope %.3f over degrees 100..1000", slope));
}

// 4. Iterations needed for b output bits grow like log b: doubling the
// target bits adds at most two iterations at degree 64. k(b) is the number
// of steps until every reported log-modulus stays within 2^-b of the
// iteration's own fixed point, taken as the ensemble median so that the
// probability-delta exceptional set of near-ties cannot dominate.
void check_iteration_law() {
  constexpr int kInstances = 20, kSteps = 45;
  const int bits[] = {16, 24, 32, 48, 64};
  std::vector<std::vector<int>> per_bit(5);

  auto moduli_at = [](const RenPoly& rp) {
    const auto rep =
        detect_clusters(build_diagram(rp), choose_sigma(rp.k, {}));
    std::vector<double> lm;
    for (const auto& c : rep.clusters) {
      lm.insert(lm.end(), c.size, c.ln_modulus);
    }
    std::sort(lm.begin(), lm.end(), std::greater<double>());
    return lm;
  };

  for (int inst = 0; inst < kInstances; ++inst) {
    const Poly f =
        gen_kostlan(64, 64000 + static_cast<std::uint64_t>(inst),
                    Kind::complex);
    RenPoly rp = to_renpoly(f);
    std::vector<std::vector<double>> snaps;
    snaps.reserve(kSteps);
    for (int k = 0; k < kSteps; ++k) {
      rp = graeffe_step_ren(rp);
      snaps.push_back(moduli_at(rp));
    }
    const std::vector<double>& ref = snaps.back();
    std::vector<double> tail(kSteps, 0.0);
    double run = 0.0;
    for (int k = kSteps - 1; k >= 0; --k) {
      double e = 0.0;
      for (size_t i = 0; i < ref.size(); ++i) {
        e = std::max(e, std::abs(snaps[k][i] - ref[i]));
      }
      run = std::max(run, e);
      tail[k] = run;
    }
    for (size_t bi = 0; bi < 5; ++bi) {
      int kb = kSteps + 1;
      for (int k = 0; k < kSteps; ++k) {
        if (tail[k] <= std::ldexp(1.0, -bits[bi])) {
          kb = k + 1;
          break;
        }
      }
      per_bit[bi].push_back(kb);
    }
  }

  auto median = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
  };
  int med[5];
  for (size_t bi = 0; bi < 5; ++bi) med[bi] = median(per_bit[bi]);
  // Pairs (b, 2b): (16,32), (24,48), (32,64).
  const int d1 = med[2] - med[0], d2 = med[3] - med[1], d3 = med[4] - med[2];
  const bool ok = d1 <= 2 && d2 <= 2 && d3 <= 2;
  report(4, "iteration growth in target bits", ok,
         strf("median k at b=16/24/32/48/64: %d/%d/%d/%d/%d, doubling gaps "
              "%d/%d/%d over %d instances",
              med[0], med[1], med[2], med[3], med[4], d1, d2, d3,
              kInstances));
}

// 5. Renormalized coefficient magnitudes stay bounded along the orbit: from
// iteration 3 on, the range never exceeds twice its value after one step.
void check_bounded_range() {
  int bad = 0;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const Kind kind = inst < 50 ? Kind::real : Kind::complex;
    const RenPoly rf =
        gen_kostlan_ren(256, 256000 + static_cast<std::uint64_t>(inst), kind);
    const ModuliResult res = iterate_ren(rf);
    if (res.range_trace.size() < 4) {
      ++bad;
      continue;
    }
    double late = 0.0;
    for (size_t k = 3; k < res.range_trace.size(); ++k) {
      late = std::max(late, res.range_trace[k]);
    }
    const double ratio = late / res.range_trace[1];
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 2.0) ++bad;
  }
  report(5, "bounded magnitude range", bad == 0,
         strf("100 instances d=256, worst late/step-1 range ratio %.3f",
              worst_ratio));
}

// 6. On real instances every conjugate pair surfaces as a size-2 cluster and
// all cluster moduli agree with the oracle to 1e-5.
void check_cluster_detection() {
  int bad_instances = 0, pairs_total = 0;
  double worst_err = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const Poly f =
        gen_kostlan(50, 50000 + static_cast<std::uint64_t>(inst), Kind::real);
    const ModuliResult res = iterate(f);
    const OracleRoots orc = find_roots(f);
    if (!orc.converged) {
      ++bad_instances;
      continue;
    }
    bool inst_ok = true;
    const std::vector<double> want = sorted_log_moduli(orc);
    for (size_t i = 0; i < want.size(); ++i) {
      const double err = std::abs(res.log_moduli[i] - want[i]);
      worst_err = std::max(worst_err, err);
      if (err > 1e-5) inst_ok = false;
    }
    for (const auto& z : orc.roots) {
      if (z.imag() <= 1e-8 * (1.0 + std::abs(z))) continue;  // one per pair
      ++pairs_total;
      const double target = std::log(std::abs(z));
      const Cluster* nearest = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : res.clusters.clusters) {
        const double dist = std::abs(c.ln_modulus - target);
        if (dist < best) {
          best = dist;
          nearest = &c;
        }
      }
      if (!nearest || best > 1e-5 || nearest->size != 2) inst_ok = false;
    }
    if (!inst_ok) ++bad_instances;
  }
  report(6, "conjugate-pair cluster detection", bad_instances == 0,
         strf("100 instances d=50, %d conjugate pairs, worst modulus gap "
              "%.3g, %d bad instances",
              pairs_total, worst_err, bad_instances));
}

// 7. The constructive separation certificate lhs <= rho*sqrt(d) holds on
// every random instance; the inequality is exact, so one failure is a bug.
void check_cnt_bound() {
  int failures = 0, oracle_failures = 0;
  double worst_margin = 0.0;
  for (int inst = 0; inst < 1000; ++inst) {
    const Poly f =
        gen_kostlan(20, 20000 + static_cast<std::uint64_t>(inst),
                    Kind::complex);
    const OracleRoots orc = find_roots(f, 1e-11);
    if (!orc.converged) {
      ++oracle_failures;
      continue;
    }
    const CntCheck chk = cnt_constructive_check(f, orc.roots);
    if (!chk.ok) ++failures;
    if (chk.rhs > 0.0) {
      worst_margin = std::max(worst_margin, chk.lhs / chk.rhs);
    }
  }
  report(7, "separation distance certificate",
         failures == 0 && oracle_failures == 0,
         strf("1000 instances d=20, %d bound failures, %d oracle failures, "
              "worst lhs/rhs %.3f",
              failures, oracle_failures, worst_margin));
}

// 8. Randomized property sweep of the log-polar arithmetic: product/power/
// scaling homomorphisms, sum consistency against complex arithmetic, angle
// normalization, and absence of NaNs, 1e5 cases per family.
void check_renarith_properties() {
  constexpr int kCases = 100000;
  std::mt19937_64 rng(8801);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
  };

  int bad_hom = 0;
  for (int i = 0; i < kCases; ++i) {
    const int k = static_cast<int>(rng() % 9);
    const double u1 = uniform(-20.0, 20.0), u2 = uniform(-20.0, 20.0);
    const double a1 = uniform(-kPi, kPi), a2 = uniform(-kPi, kPi);
    const complex<double> w1 = std::polar(std::exp(u1), a1);
    const complex<double> w2 = std::polar(std::exp(u2), a2);
    const RenValue x = logpolar(w1, k), y = logpolar(w2, k);

    const RenValue prod = rentimes(x, y);
    const RenValue want_prod = logpolar(w1 * w2, k);
    bool ok = std::abs(prod.mag - want_prod.mag) <= 1e-12 &&
              std::abs(wrap_angle(prod.arg - want_prod.arg)) <= 1e-9;

    const double lam = uniform(0.25, 4.0);
    const RenValue pw = renpow(x, lam);
    const RenValue want_pw = logpolar(std::pow(w1, lam), k);
    ok = ok && std::abs(pw.mag - want_pw.mag) <= 1e-12 &&
         std::abs(wrap_angle(pw.arg - want_pw.arg)) <= 1e-9;

    const complex<double> z = std::polar(std::exp(uniform(-5.0, 5.0)),
                                         uniform(-kPi, kPi));
    const RenValue sc = renscal(z, x);
    const RenValue want_sc = logpolar(z * w1, k);
    ok = ok && std::abs(sc.mag - want_sc.mag) <= 1e-12 &&
         std::abs(wrap_angle(sc.arg - want_sc.arg)) <= 1e-9;
    if (!ok) ++bad_hom;
  }

  int bad_sum = 0;
  for (int i = 0; i < kCases; ++i) {
    const int k = static_cast<int>(rng() % 5);
    const double u1 = uniform(-25.0, 25.0), u2 = uniform(-25.0, 25.0);
    const double a1 = uniform(-kPi, kPi), a2 = uniform(-kPi, kPi);
    const complex<double> w1 = std::polar(std::exp(u1), a1);
    const complex<double> w2 = std::polar(std::exp(u2), a2);
    const complex<double> s = w1 + w2;
    const RenValue sum = renplus(logpolar(w1, k), logpolar(w2, k));
    const double scale = std::abs(w1) + std::abs(w2);
    if (is_ren_zero(sum)) {
      if (std::abs(s) > 1e-9 * scale) ++bad_sum;
    } else if (std::abs(unlogpolar(sum) - s) > 1e-9 * scale) {
      ++bad_sum;
    }
  }

  int bad_angle = 0;
  for (int i = 0; i < kCases; ++i) {
    const int k = static_cast<int>(rng() % 6);
    RenValue x = rng() % 20 == 0
                     ? ren_zero(k)
                     : RenValue{uniform(-50.0, 50.0),
                                wrap_angle(uniform(-10.0, 10.0)), k};
    for (int step = 0; step < 4; ++step) {
      const RenValue y{uniform(-50.0, 50.0),
                       wrap_angle(uniform(-10.0, 10.0)), k};
      switch (rng() % 4) {
        case 0: x = rentimes(x, y); break;
        case 1: x = renplus(x, y); break;
        case 2: x = renpow(x, uniform(0.25, 4.0)); break;
        default: x = renscal(complex<double>(uniform(-3.0, 3.0),
                                             uniform(-3.0, 3.0)), x);
      }
      const bool norm = is_ren_zero(x) ? x.arg == 0.0
                                       : (x.arg > -kPi && x.arg <= kPi);
      if (!norm || x.k != k) ++bad_angle;
    }
  }

  int bad_nan = 0;
  for (int i = 0; i < kCases; ++i) {
    const int k = static_cast<int>(rng() % 12);
    auto value = [&]() {
      if (rng() % 16 == 0) return ren_zero(k);
      return RenValue{uniform(-1e8, 1e8), wrap_angle(uniform(-40.0, 40.0)), k};
    };
    RenValue x = value();
    const RenValue y = value();
    switch (rng() % 4) {
      case 0: x = rentimes(x, y); break;
      case 1: x = renplus(x, y); break;
      case 2: x = renpow(x, uniform(-4.0, 4.0)); break;
      default: x = renscal(complex<double>(uniform(-2.0, 2.0),
                                           uniform(-2.0, 2.0)), x);
    }
    if (std::isnan(x.mag) || std::isnan(x.arg)) ++bad_nan;
  }

  report(8, "log-polar arithmetic properties",
         bad_hom + bad_sum + bad_angle + bad_nan == 0,
         strf("1e5 cases each: %d homomorphism, %d sum, %d angle, %d NaN "
              "violations",
              bad_hom, bad_sum, bad_angle, bad_nan));
}

// 9. The minimal-ratio tail is linear in eps: log-log slope 1 +- 0.3 on
// eps in [1e-4, 1e-2] at degree 10.
void check_tail_exponent() {
  const std::vector<double> grid = {1e-4, 3.16e-4, 1e-3, 3.16e-3, 1e-2};
  const TailEstimate est = separation_tail_estimate(10, 10000, grid, 424242);
  const bool ok = std::isfinite(est.slope) && std::abs(est.slope - 1.0) <= 0.3;
  report(9, "separation tail exponent", ok,
         strf("slope %.3f over eps in [1e-4, 1e-2], %d samples, %d oracle "
              "failures",
              est.slope, est.samples, est.failed_samples));
}

}  // namespace

int main() {
  const auto t0 = clock_type::now();
  check_oracle_equivalence();
  check_commutation();
  check_quadratic_scaling();
  check_iteration_law();
  check_bounded_range();
  check_cluster_detection();
  check_cnt_bound();
  check_renarith_properties();
  check_tail_exponent();
  std::printf("%d/9 checks passed in %.1f s\n", 9 - g_failures,
              seconds_since(t0));
  return g_failures;
}
