// Timing comparison: OpenMP kernel assembly/sandwich/apply vs the serial
// reference loops. Prints one table row per size; wall times in ms, best of
// three repeats. Usage: bench_kernels [n1 n2 ...] (default 512 1024 2048).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "mslab/grid.hpp"
#include "mslab/kernelop.hpp"
#include "mslab/operators.hpp"

using namespace mslab;
using clk = std::chrono::steady_clock;

namespace {

template <typename F>
double best_ms(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clk::now();
    fn();
    auto t1 = clk::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes;
  for (int k = 1; k < argc; ++k) sizes.push_back(std::strtoul(argv[k], nullptr, 10));
  if (sizes.empty()) sizes = {512, 1024, 2048};

  std::printf("%6s | %12s %12s | %12s %12s | %12s %12s\n", "n", "asm omp",
              "asm serial", "sand omp", "sand serial", "apply omp", "apply serial");
  std::printf("-------+---------------------------+---------------------------+--"
              "-------------------------\n");

  for (std::size_t n : sizes) {
    Grid g = make_grid(20.0, n);
    MatrixPotential mp = build_power_nls_potential(g, 1.0);
    FactoredPotential fp = factorize(g, mp);
    NodeMat2 v2 = v_matrix(g, fp);
    NodeMat2 v1 = v1_matrix(g, fp);

    const double s0 = std::sqrt(2.0);
    auto p11 = [](double r) { return cd{-0.5 * r, 0.0}; };
    auto p22 = [s0](double r) { return cd{-std::exp(-s0 * r) / (2.0 * s0), 0.0}; };
    const cd sl11{-0.5, 0.0};
    const cd sl22{0.5, 0.0};

    KernelOp K;
    double t_asm_p = best_ms([&] { K = diagonal_profile_kernel(g, p11, sl11, p22, sl22); });
    KernelOp Ks;
    double t_asm_s =
        best_ms([&] { Ks = serialref::diagonal_profile_kernel(g, p11, sl11, p22, sl22); });

    KernelOp S;
    double t_sand_p = best_ms([&] { S = sandwich(v2, K, v1); });
    KernelOp Ss;
    double t_sand_s = best_ms([&] { Ss = serialref::sandwich(v2, Ks, v1); });

    Field2 f(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
      f.v[k] = std::exp(-g.x[k] * g.x[k] / 4.0);
      f.v[g.n + k] = std::exp(-g.x[k] * g.x[k] / 6.0) * g.x[k];
    }
    Field2 out;
    double t_app_p = best_ms([&] { out = S.apply(f); }, 10);
    Field2 outs;
    double t_app_s = best_ms([&] { outs = serialref::apply(Ss, f); }, 10);

    // Guard: the two paths must agree or the timings are meaningless.
    double dev = 0.0;
    for (std::size_t k = 0; k < out.v.size(); ++k)
      dev = std::max(dev, std::abs(out.v[k] - outs.v[k]));
    if (dev > 1e-12) {
      std::fprintf(stderr, "bench: omp/serial mismatch %.3e at n=%zu\n", dev, n);
      return 1;
    }

    std::printf("%6zu | %12.3f %12.3f | %12.3f %12.3f | %12.3f %12.3f\n", n, t_asm_p,
                t_asm_s, t_sand_p, t_sand_s, t_app_p, t_app_s);
  }
  return 0;
}
