#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graeffe/cli.hpp"

namespace {

// Shared solver/output flags; every flag can also come from a GRAEFFE_*
// environment variable, with the command line taking precedence.
void add_solver_flags(CLI::App* cmd, graeffe::SolverFlags* s,
                      double* sigma_storage) {
  cmd->add_option("--tol", s->tol, "residual tolerance per coefficient")
      ->envname("GRAEFFE_TOL");
  cmd->add_option("--bits", s->bits,
                  "target output bits b (default: derived from --tol)")
      ->envname("GRAEFFE_BITS");
  cmd->add_option("--delta", s->delta, "failure probability budget")
      ->envname("GRAEFFE_DELTA");
  cmd->add_option("--sigma", *sigma_storage,
                  "Newton diagram split threshold (default: depth-based)")
      ->envname("GRAEFFE_SIGMA");
  cmd->add_option("--max-iter", s->max_iter,
                  "iteration cap (default: derived from bits/delta)")
      ->envname("GRAEFFE_MAX_ITER");
}

void add_io_flags(CLI::App* cmd, std::string* format, std::string* out) {
  cmd->add_option("--format", *format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname("GRAEFFE_FORMAT");
  cmd->add_option("--out", *out, "output file (default: stdout)")
      ->envname("GRAEFFE_OUT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moduli of polynomial roots via renormalized Graeffe iteration"};
  app.require_subcommand(1);

  graeffe::SolveArgs solve;
  double solve_sigma = 0.0;
  auto* c_solve = app.add_subcommand("solve", "compute root moduli of a polynomial file");
  c_solve->add_option("input", solve.input, "polynomial JSON file")->required();
  add_solver_flags(c_solve, &solve.solver, &solve_sigma);
  add_io_flags(c_solve, &solve.format, &solve.out);

  graeffe::RandomArgs random;
  std::string random_kind = "complex";
  auto* c_random = app.add_subcommand("random", "generate Kostlan-distributed polynomial files");
  c_random->add_option("--degree", random.degree, "degree")->required();
  c_random->add_option("--seed", random.seed, "base seed")
      ->envname("GRAEFFE_SEED");
  c_random->add_option("--kind", random_kind, "coefficient kind")
      ->check(CLI::IsMember({"real", "complex"}));
  c_random->add_option("--count", random.count, "number of files");
  c_random->add_option("--out-dir", random.out_dir, "output directory");

  graeffe::BenchArgs bench;
  double bench_sigma = 0.0;
  std::string bench_kind = "real";
  auto* c_bench = app.add_subcommand("bench", "timing sweep over a degree grid");
  c_bench->add_option("--degrees", bench.degrees, "degree grid")
      ->required()
      ->delimiter(',');
  c_bench->add_option("--repetitions,--reps", bench.repetitions,
                      "instances per degree");
  c_bench->add_option("--seed", bench.seed, "base seed")
      ->envname("GRAEFFE_SEED");
  c_bench->add_option("--kind", bench_kind, "coefficient kind")
      ->check(CLI::IsMember({"real", "complex"}));
  c_bench->add_flag("--validate", bench.validate,
                    "cross-check moduli against the root-finding oracle");
  c_bench->add_option("--jobs", bench.jobs, "worker threads");
  add_solver_flags(c_bench, &bench.solver, &bench_sigma);
  add_io_flags(c_bench, &bench.format, &bench.out);

  graeffe::SeparationArgs sep;
  auto* c_sep = app.add_subcommand(
      "separation", "root modulus separation of a file, or its Monte Carlo tail");
  c_sep->add_option("--input", sep.input, "polynomial JSON file");
  c_sep->add_option("--degree", sep.degree, "degree (Monte Carlo mode)");
  c_sep->add_option("--samples", sep.samples, "sample count (Monte Carlo mode)");
  c_sep->add_option("--seed", sep.seed, "base seed")->envname("GRAEFFE_SEED");
  c_sep->add_option("--eps-grid", sep.eps_grid, "epsilon grid")->delimiter(',');
  c_sep->add_option("--oracle-tol", sep.oracle_tol, "oracle residual tolerance");
  add_io_flags(c_sep, &sep.format, &sep.out);

  graeffe::CheckCntArgs cnt;
  std::string cnt_kind = "complex";
  auto* c_cnt = app.add_subcommand(
      "check-cnt", "constructive condition-number bound check on random instances");
  c_cnt->add_option("--degree", cnt.degree, "degree");
  c_cnt->add_option("--count", cnt.count, "sample count");
  c_cnt->add_option("--seed", cnt.seed, "base seed")->envname("GRAEFFE_SEED");
  c_cnt->add_option("--kind", cnt_kind, "coefficient kind")
      ->check(CLI::IsMember({"real", "complex"}));
  c_cnt->add_option("--oracle-tol", cnt.oracle_tol, "oracle residual tolerance");
  add_io_flags(c_cnt, &cnt.format, &cnt.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : graeffe::kExitInputError;
  }

  auto kind_of = [](const std::string& s) {
    return s == "real" ? graeffe::Kind::real : graeffe::Kind::complex;
  };

  if (c_solve->parsed()) {
    if (c_solve->count("--sigma") > 0) solve.solver.sigma = solve_sigma;
    return graeffe::cmd_solve(solve);
  }
  if (c_random->parsed()) {
    random.kind = kind_of(random_kind);
    return graeffe::cmd_random(random);
  }
  if (c_bench->parsed()) {
    if (c_bench->count("--sigma") > 0) bench.solver.sigma = bench_sigma;
    bench.kind = kind_of(bench_kind);
    return graeffe::cmd_bench(bench);
  }
  if (c_sep->parsed()) {
    return graeffe::cmd_separation(sep);
  }
  if (c_cnt->parsed()) {
    cnt.kind = kind_of(cnt_kind);
    return graeffe::cmd_check_cnt(cnt);
  }
  return graeffe::kExitInputError;
}
