#include <thread>

#include "ddchain/parallel.hpp"

namespace ddchain {

int Execution::resolved_workers() const {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace kernels {

void spectral_sum_serial(std::span<const double> weights, std::span<const double> energies, double scale,
                         double dt, std::span<std::complex<double>> out) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double t = static_cast<double>(j) * dt;
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      const double phase = energies[k] * t;
      re += weights[k] * std::cos(phase);
      im -= weights[k] * std::sin(phase);
    }
    out[j] = {scale * re, scale * im};
  }
}

void for_each_index_serial(std::size_t count, const IndexBody& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace kernels

void spectral_sum(std::span<const double> weights, std::span<const double> energies, double scale, double dt,
                  std::span<std::complex<double>> out, const Execution& exec) {
  if (exec.backend == Backend::serial) {
    kernels::spectral_sum_serial(weights, energies, scale, dt, out);
  } else {
    kernels::spectral_sum_omp(weights, energies, scale, dt, out, exec.resolved_workers());
  }
}

void for_each_index(std::size_t count, const Execution& exec, const kernels::IndexBody& body) {
  if (exec.backend == Backend::serial) {
    kernels::for_each_index_serial(count, body);
  } else {
    kernels::for_each_index_omp(count, exec.resolved_workers(), body);
  }
}

}  // namespace ddchain
