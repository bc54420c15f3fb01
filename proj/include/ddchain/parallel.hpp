#pragma once

// Data-parallel kernels. Each kernel has an OpenMP implementation and a
// plain serial reference; both write results by index so the output is
// identical for any thread count.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace ddchain {

enum class Backend { serial, openmp };

struct Execution {
  Backend backend = Backend::openmp;
  int workers = 0;  // 0: hardware concurrency

  int resolved_workers() const;
};

namespace kernels {

using IndexBody = std::function<void(std::size_t)>;

// out[j] = scale * sum_k weights[k] * exp(-i energies[k] * j * dt)
void spectral_sum_serial(std::span<const double> weights, std::span<const double> energies, double scale,
                         double dt, std::span<std::complex<double>> out);
void spectral_sum_omp(std::span<const double> weights, std::span<const double> energies, double scale,
                      double dt, std::span<std::complex<double>> out, int workers);

// Calls body(i) for i in [0, count). If bodies throw, the exception from the
// lowest index is rethrown after all work finishes.
void for_each_index_serial(std::size_t count, const IndexBody& body);
void for_each_index_omp(std::size_t count, int workers, const IndexBody& body);

}  // namespace kernels

void spectral_sum(std::span<const double> weights, std::span<const double> energies, double scale, double dt,
                  std::span<std::complex<double>> out, const Execution& exec);

void for_each_index(std::size_t count, const Execution& exec, const kernels::IndexBody& body);

}  // namespace ddchain
