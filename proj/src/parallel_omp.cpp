#include <omp.h>

#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

#include "ddchain/parallel.hpp"

namespace ddchain::kernels {

void spectral_sum_omp(std::span<const double> weights, std::span<const double> energies, double scale,
                      double dt, std::span<std::complex<double>> out, int workers) {
  const auto count = static_cast<std::ptrdiff_t>(out.size());
  const std::size_t terms = weights.size();
  // Same per-sample summation order as the serial reference.
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const double t = static_cast<double>(j) * dt;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      const double phase = energies[k] * t;
      re += weights[k] * std::cos(phase);
      im -= weights[k] * std::sin(phase);
    }
    out[static_cast<std::size_t>(j)] = {scale * re, scale * im};
  }
}

void for_each_index_omp(std::size_t count, int workers, const IndexBody& body) {
  std::mutex guard;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (static_cast<std::size_t>(i) < failed_index) {
        failed_index = static_cast<std::size_t>(i);
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ddchain::kernels
