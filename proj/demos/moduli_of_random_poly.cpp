// Generates one random degree-16 polynomial, runs the renormalized Graeffe
// solver, and compares the recovered moduli against a direct root finder.

#include <cstdio>

#include "graeffe/graeffe.hpp"
#include "graeffe/oracle.hpp"
#include "graeffe/randpoly.hpp"

int main() {
  using namespace graeffe;

  const int d = 16;
  const Poly f = gen_kostlan(d, 42, Kind::complex);

  const ModuliResult res = iterate(f);
  std::printf("degree %d: %d iterations, residual %.3g, %s\n", d,
              res.iterations, res.residual,
              res.converged ? "converged" : "not converged");

  const OracleRoots oracle = find_roots(f);
  const std::vector<double> ref = sorted_log_moduli(oracle);

  std::printf("%6s %18s %18s %12s\n", "root", "ln|z| (graeffe)",
              "ln|z| (oracle)", "abs diff");
  for (int i = 0; i < d; ++i) {
    std::printf("%6d %18.12f %18.12f %12.3g\n", i, res.log_moduli[i], ref[i],
                std::abs(res.log_moduli[i] - ref[i]));
  }

  std::printf("clusters:");
  for (const auto& c : res.clusters.clusters) {
    std::printf(" [start %d size %d ln|z| %.6f]", c.start_root_index, c.size,
                c.ln_modulus);
  }
  std::printf("\n");
  return 0;
}
