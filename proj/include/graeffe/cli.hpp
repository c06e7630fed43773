#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "graeffe/graeffe.hpp"
#include "graeffe/oracle.hpp"
#include "graeffe/poly_io.hpp"
#include "graeffe/randpoly.hpp"

namespace graeffe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

struct SolverFlags {
  double tol = std::ldexp(1.0, -46);
  double bits = 0.0;
  double delta = 1e-3;
  std::optional<double> sigma{};
  int max_iter = 0;
};

inline IterOptions to_iter_options(const SolverFlags& s) {
  IterOptions o;
  o.tol = s.tol;
  o.bits = s.bits;
  o.delta = s.delta;
  o.sigma = s.sigma;
  o.max_iter = s.max_iter;
  return o;
}

namespace detail {

inline std::string fmt_g(double v, int prec = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

/// Run fn(stream) with stream bound to the file at `out`, or to std::cout
/// when `out` is empty.
template <typename F>
int with_output(const std::string& out, F&& fn) {
  if (out.empty()) return fn(std::cout);
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return kExitInputError;
  }
  const int rc = fn(f);
  f.flush();
  if (!f) {
    std::cerr << "error: write failed for " << out << "\n";
    return kExitInputError;
  }
  return rc;
}

inline nlohmann::json json_finite(double v) {
  // nlohmann serializes non-finite numbers as null already; make it explicit.
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string input;
  SolverFlags solver{};
  std::string format = "csv";
  std::string out;  // empty: stdout
};

inline int cmd_solve(const SolveArgs& args) {
  ParsedPoly parsed{Poly{}};
  try {
    parsed = parse_poly_file(args.input);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  ModuliResult res;
  int degree = 0;
  try {
    if (std::holds_alternative<Poly>(parsed)) {
      const Poly& f = std::get<Poly>(parsed);
      degree = f.degree();
      res = iterate(f, to_iter_options(args.solver));
    } else {
      const RenPoly& f = std::get<RenPoly>(parsed);
      degree = f.degree();
      res = iterate_ren(f, to_iter_options(args.solver));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const int rc = detail::with_output(args.out, [&](std::ostream& os) {
    if (args.format == "json") {
      nlohmann::json j;
      j["degree"] = degree;
      j["converged"] = res.converged;
      j["iterations"] = res.iterations;
      j["residual"] = res.residual;
      j["range_bound"] = res.range_bound;
      j["sigma"] = res.clusters.sigma_used;
      nlohmann::json lm = nlohmann::json::array();
      for (double v : res.log_moduli) lm.push_back(detail::json_finite(v));
      j["log_moduli"] = std::move(lm);
      nlohmann::json cl = nlohmann::json::array();
      for (const auto& c : res.clusters.clusters) {
        cl.push_back({{"start_root", c.start_root_index},
                      {"size", c.size},
                      {"ln_modulus", detail::json_finite(c.ln_modulus)},
                      {"modulus", std::exp(c.ln_modulus)}});
      }
      j["clusters"] = std::move(cl);
      os << j.dump(2) << "\n";
    } else {
      os << "cluster,start_root,size,ln_modulus,modulus\n";
      for (size_t i = 0; i < res.clusters.clusters.size(); ++i) {
        const auto& c = res.clusters.clusters[i];
        os << i << "," << c.start_root_index << "," << c.size << ","
           << detail::fmt_g(c.ln_modulus) << ","
           << detail::fmt_g(std::exp(c.ln_modulus)) << "\n";
      }
    }
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  std::cerr << "degree " << degree << ": " << res.iterations
            << " iterations, residual " << detail::fmt_g(res.residual, 6)
            << ", " << (res.converged ? "converged" : "not converged")
            << "\n";
  return res.converged ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// random

struct RandomArgs {
  int degree = 0;
  std::uint64_t seed = 1;
  Kind kind = Kind::complex;
  int count = 1;
  std::string out_dir = ".";
};

inline int cmd_random(const RandomArgs& args) {
  if (args.degree < 1) {
    std::cerr << "error: degree must be at least 1\n";
    return kExitInputError;
  }
  if (args.count < 1) {
    std::cerr << "error: count must be at least 1\n";
    return kExitInputError;
  }
  for (int i = 0; i < args.count; ++i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    nlohmann::json j;
    // Coefficient-space files stay oracle-compatible; past the oracle ceiling
    // the coefficients may overflow double anyway, so switch to log form.
    if (args.degree <= 512) {
      j = poly_to_json(gen_kostlan(args.degree, seed, args.kind), args.kind);
    } else {
      j = renpoly_to_json(gen_kostlan_ren(args.degree, seed, args.kind));
    }
    j["kind"] = kind_name(args.kind);
    j["seed"] = seed;
    j["generator"] = kGeneratorId;
    const auto path = std::filesystem::path(args.out_dir) /
                      ("poly_d" + std::to_string(args.degree) + "_s" +
                       std::to_string(seed) + ".json");
    try {
      write_json_file(path, j);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInputError;
    }
    std::cout << path.string() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<int> degrees;
  int repetitions = 5;
  std::uint64_t seed = 1;
  Kind kind = Kind::real;
  bool validate = false;
  int jobs = 1;
  SolverFlags solver{};
  std::string format = "csv";
  std::string out;
};

struct BenchRow {
  int degree = 0;
  std::uint64_t seed = 0;
  Kind kind = Kind::real;
  int iterations = 0;
  double wall_time_s = 0.0;
  double residual = 0.0;
  double rel_sep = 0.0;
  double oracle_err = std::numeric_limits<double>::quiet_NaN();
  bool validated = false;
  double range_bound = 0.0;
};

struct BenchSummary {
  std::vector<int> degrees;
  std::vector<double> mean_wall;
  std::vector<double> median_wall;
  double slope = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline BenchRow bench_one(int degree, std::uint64_t seed, Kind kind,
                          const IterOptions& opts, bool validate) {
  BenchRow row;
  row.degree = degree;
  row.seed = seed;
  row.kind = kind;

  const RenPoly rp = gen_kostlan_ren(degree, seed, kind);
  const auto t0 = std::chrono::steady_clock::now();
  const ModuliResult res = iterate_ren(rp, opts);
  const auto t1 = std::chrono::steady_clock::now();
  row.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  row.iterations = res.iterations;
  row.residual = res.residual;
  row.range_bound = res.range_bound;

  std::vector<double> moduli;
  moduli.reserve(res.log_moduli.size());
  for (double lm : res.log_moduli) moduli.push_back(std::exp(lm));
  row.rel_sep = separation_from_moduli(std::move(moduli)).rel_sep;

  if (validate && degree <= 512) {
    row.validated = true;
    const Poly f = gen_kostlan(degree, seed, kind);
    const OracleRoots oracle = find_roots(f);
    if (oracle.converged) {
      const std::vector<double> ref = sorted_log_moduli(oracle);
      double err = 0.0;
      for (size_t i = 0; i < ref.size(); ++i) {
        const double a = res.log_moduli[i], b = ref[i];
        if (std::isinf(a) && std::isinf(b)) continue;
        err = std::max(err, std::abs(a - b));
      }
      row.oracle_err = err;
    }
  }
  return row;
}

}  // namespace detail

/// Timing sweep over a degree grid. Rows come back in deterministic
/// (degree, repetition) order regardless of the worker count; wall time
/// covers the solve only.
inline std::vector<BenchRow> run_bench(const BenchArgs& args) {
  std::vector<std::pair<int, std::uint64_t>> tasks;
  for (int d : args.degrees) {
    for (int r = 0; r < args.repetitions; ++r) {
      tasks.emplace_back(d, args.seed + static_cast<std::uint64_t>(r));
    }
  }
  std::vector<BenchRow> rows(tasks.size());
  const IterOptions opts = to_iter_options(args.solver);

  const int jobs = std::max(1, args.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < tasks.size(); ++i) {
      rows[i] = detail::bench_one(tasks[i].first, tasks[i].second, args.kind,
                                  opts, args.validate);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < tasks.size();
           i = next.fetch_add(1)) {
        rows[i] = detail::bench_one(tasks[i].first, tasks[i].second,
                                    args.kind, opts, args.validate);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline BenchSummary summarize_bench(const BenchArgs& args,
                                    const std::vector<BenchRow>& rows) {
  BenchSummary s;
  for (int d : args.degrees) {
    std::vector<double> walls;
    for (const auto& r : rows) {
      if (r.degree == d) walls.push_back(r.wall_time_s);
    }
    if (walls.empty()) continue;
    s.degrees.push_back(d);
    s.mean_wall.push_back(std::accumulate(walls.begin(), walls.end(), 0.0) /
                          walls.size());
    s.median_wall.push_back(detail::median(walls));
  }
  const size_t n = s.degrees.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
      const double x = std::log(static_cast<double>(s.degrees[i]));
      const double y = std::log(s.median_wall[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return s;
}

inline int cmd_bench(const BenchArgs& args) {
  if (args.degrees.empty()) {
    std::cerr << "error: no degrees given\n";
    return kExitInputError;
  }
  if (args.repetitions < 1) {
    std::cerr << "error: repetitions must be at least 1\n";
    return kExitInputError;
  }
  std::vector<BenchRow> rows;
  try {
    rows = run_bench(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  const BenchSummary summary = summarize_bench(args, rows);

  auto row_csv = [](const BenchRow& r) {
    std::string line = std::to_string(r.degree) + "," +
                       std::to_string(r.seed) + "," + kind_name(r.kind) + "," +
                       std::to_string(r.iterations) + "," +
                       detail::fmt_g(r.wall_time_s, 6) + "," +
                       detail::fmt_g(r.residual) + "," +
                       detail::fmt_g(r.rel_sep) + ",";
    if (r.validated) line += detail::fmt_g(r.oracle_err);
    line += "," + detail::fmt_g(r.range_bound);
    return line;
  };

  const int rc = detail::with_output(args.out, [&](std::ostream& os) {
    if (args.format == "json") {
      nlohmann::json j;
      nlohmann::json jr = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json e = {{"degree", r.degree},
                            {"seed", r.seed},
                            {"kind", kind_name(r.kind)},
                            {"iterations", r.iterations},
                            {"wall_time_s", r.wall_time_s},
                            {"residual", r.residual},
                            {"rel_sep", r.rel_sep},
                            {"range_bound", r.range_bound}};
        if (r.validated) e["oracle_err"] = detail::json_finite(r.oracle_err);
        jr.push_back(std::move(e));
      }
      j["rows"] = std::move(jr);
      j["summary"] = {{"degrees", summary.degrees},
                      {"mean_wall_s", summary.mean_wall},
                      {"median_wall_s", summary.median_wall},
                      {"log_log_slope", detail::json_finite(summary.slope)}};
      os << j.dump(2) << "\n";
    } else {
      os << "degree,seed,kind,iterations,wall_time_s,residual,rel_sep,"
            "oracle_err,range_bound\n";
      for (const auto& r : rows) os << row_csv(r) << "\n";
    }
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  for (size_t i = 0; i < summary.degrees.size(); ++i) {
    std::cerr << "degree " << summary.degrees[i] << ": mean "
              << detail::fmt_g(summary.mean_wall[i], 6) << " s, median "
              << detail::fmt_g(summary.median_wall[i], 6) << " s\n";
  }
  if (std::isfinite(summary.slope)) {
    std::cerr << "log-log slope (median wall time vs degree): "
              << detail::fmt_g(summary.slope, 6) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// separation

struct SeparationArgs {
  std::string input;  // when set: stats of this polynomial's roots
  int degree = 10;    // Monte Carlo mode otherwise
  int samples = 0;
  std::uint64_t seed = 1;
  std::vector<double> eps_grid = {1e-4, 3.162e-4, 1e-3, 3.162e-3, 1e-2};
  double oracle_tol = 1e-10;
  std::string format = "csv";
  std::string out;
};

inline int cmd_separation(const SeparationArgs& args) {
  if (!args.input.empty()) {
    Poly f;
    try {
      ParsedPoly parsed = parse_poly_file(args.input);
      if (std::holds_alternative<Poly>(parsed)) {
        f = std::get<Poly>(parsed);
      } else {
        const RenPoly& rp = std::get<RenPoly>(parsed);
        f.coeffs.reserve(rp.coeffs.size());
        for (const auto& c : rp.coeffs) f.coeffs.push_back(unlogpolar(c));
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInputError;
    }

    OracleRoots roots;
    SeparationStats st;
    try {
      roots = find_roots(f, args.oracle_tol);
      st = separation(roots.roots);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInputError;
    }

    const int rc = detail::with_output(args.out, [&](std::ostream& os) {
      if (args.format == "json") {
        nlohmann::json j = {{"degree", f.degree()},
                            {"rho", st.rho},
                            {"rel_sep", st.rel_sep},
                            {"all_equal", st.all_equal},
                            {"oracle_residual", roots.residual},
                            {"oracle_converged", roots.converged}};
        os << j.dump(2) << "\n";
      } else {
        os << "rho,rel_sep,all_equal\n"
           << detail::fmt_g(st.rho) << "," << detail::fmt_g(st.rel_sep) << ","
           << (st.all_equal ? 1 : 0) << "\n";
      }
      return kExitOk;
    });
    if (rc != kExitOk) return rc;
    return roots.converged ? kExitOk : kExitNotConverged;
  }

  if (args.samples < 1) {
    std::cerr << "error: separation needs --input or --samples\n";
    return kExitInputError;
  }
  TailEstimate est;
  try {
    est = separation_tail_estimate(args.degree, args.samples, args.eps_grid,
                               args.seed, args.oracle_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const int rc = detail::with_output(args.out, [&](std::ostream& os) {
    if (args.format == "json") {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : est.points) {
        pts.push_back({{"eps", p.eps},
                       {"exceed_count", p.exceed_count},
                       {"p_hat", p.p_hat},
                       {"tail", 1.0 - p.p_hat}});
      }
      nlohmann::json j = {{"degree", args.degree},
                          {"samples", est.samples},
                          {"failed_samples", est.failed_samples},
                          {"points", std::move(pts)},
                          {"slope", detail::json_finite(est.slope)},
                          {"m_hat", detail::json_finite(est.m_hat)}};
      os << j.dump(2) << "\n";
    } else {
      os << "eps,exceed_count,p_hat,tail\n";
      for (const auto& p : est.points) {
        os << detail::fmt_g(p.eps) << "," << p.exceed_count << ","
           << detail::fmt_g(p.p_hat) << "," << detail::fmt_g(1.0 - p.p_hat)
           << "\n";
      }
    }
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  std::cerr << "samples " << est.samples << " (oracle failures "
            << est.failed_samples << "), tail slope "
            << detail::fmt_g(est.slope, 6) << ", M-hat "
            << detail::fmt_g(est.m_hat, 6) << "\n";
  return est.failed_samples < est.samples ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// check-cnt

struct CheckCntArgs {
  int degree = 20;
  int count = 100;
  std::uint64_t seed = 1;
  Kind kind = Kind::complex;
  double oracle_tol = 1e-10;
  std::string format = "csv";
  std::string out;
};

inline int cmd_check_cnt(const CheckCntArgs& args) {
  if (args.degree < 2 || args.count < 1) {
    std::cerr << "error: need degree >= 2 and count >= 1\n";
    return kExitInputError;
  }
  struct Row {
    std::uint64_t seed;
    bool oracle_ok;
    CntCheck chk;
  };
  std::vector<Row> rows;
  rows.reserve(args.count);
  int failures = 0, oracle_failures = 0;
  for (int i = 0; i < args.count; ++i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    const Poly f = gen_kostlan(args.degree, seed, args.kind);
    const OracleRoots roots = find_roots(f, args.oracle_tol);
    Row row{seed, roots.converged, {}};
    if (roots.converged) {
      row.chk = cnt_constructive_check(f, roots.roots);
      if (!row.chk.ok) ++failures;
    } else {
      ++oracle_failures;
    }
    rows.push_back(row);
  }

  const int rc = detail::with_output(args.out, [&](std::ostream& os) {
    if (args.format == "json") {
      nlohmann::json jr = nlohmann::json::array();
      for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        jr.push_back({{"sample", i},
                      {"seed", r.seed},
                      {"oracle_converged", r.oracle_ok},
                      {"rho", r.chk.rho},
                      {"lhs", r.chk.lhs},
                      {"rhs", r.chk.rhs},
                      {"ok", r.chk.ok}});
      }
      nlohmann::json j = {{"degree", args.degree},
                          {"count", args.count},
                          {"failures", failures},
                          {"oracle_failures", oracle_failures},
                          {"rows", std::move(jr)}};
      os << j.dump(2) << "\n";
    } else {
      os << "sample,seed,rho,lhs,rhs,ok\n";
      for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!r.oracle_ok) {
          os << i << "," << r.seed << ",nan,nan,nan,oracle_failure\n";
          continue;
        }
        os << i << "," << r.seed << "," << detail::fmt_g(r.chk.rho) << ","
           << detail::fmt_g(r.chk.lhs) << "," << detail::fmt_g(r.chk.rhs)
           << "," << (r.chk.ok ? 1 : 0) << "\n";
      }
    }
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  std::cerr << "checked " << (args.count - oracle_failures) << "/"
            << args.count << " samples, " << failures << " bound failures, "
            << oracle_failures << " oracle failures\n";
  if (failures > 0) return kExitNotConverged;
  if (oracle_failures == args.count) return kExitNotConverged;
  return kExitOk;
}

}  // namespace graeffe
