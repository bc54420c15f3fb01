// Serial reference vs OpenMP for the two data-parallel kernels: a Delta-tau
// sweep (independent cells) and correlation-kernel sampling (independent
// time points). Also checks that both backends produce identical output.
//
//   ddchain_bench [workers] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "ddchain/experiments.hpp"
#include "ddchain/pq_kernel.hpp"

using namespace ddchain;
using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

int main(int argc, char** argv) {
  const int workers = argc > 1 ? std::atoi(argv[1]) : 0;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const Execution serial{Backend::serial, 1};
  const Execution omp{Backend::openmp, workers};
  std::printf("workers: %d\n", omp.resolved_workers());

  ChainSpec chain;
  chain.n_sites = 130;
  const Axis delta{"delta", linspace(0.05, 2.0, 24)};
  const Axis tau{"tau", linspace(0.06, 2.5, 24)};

  SweepResult a, b;
  const double ts = best_of(repeats, [&] { a = sweep_delta_tau(chain, 8.0, 128, delta, tau, serial); });
  const double tp = best_of(repeats, [&] { b = sweep_delta_tau(chain, 8.0, 128, delta, tau, omp); });
  const bool same_sweep =
      std::memcmp(a.fidelities.data(), b.fidelities.data(), a.fidelities.size() * sizeof(double)) == 0;
  std::printf("sweep_delta_tau 24x24 N=130 m=128: serial %.4f s  openmp %.4f s  speedup %.2fx  identical=%s\n", ts,
              tp, ts / tp, same_sweep ? "yes" : "NO");

  const auto env = environment_block(build_free_hamiltonian(chain));
  KernelTrace ka, kb;
  const double ks = best_of(repeats, [&] { ka = correlation_kernel(env, 1.0, 1e-3, 50.0, serial); });
  const double kp = best_of(repeats, [&] { kb = correlation_kernel(env, 1.0, 1e-3, 50.0, omp); });
  const bool same_kernel = ka.samples == kb.samples;
  std::printf("correlation_kernel N=130 50001 samples: serial %.4f s  openmp %.4f s  speedup %.2fx  identical=%s\n",
              ks, kp, ks / kp, same_kernel ? "yes" : "NO");

  return same_sweep && same_kernel ? 0 : 1;
}
