#include "ddchain/pq_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ddchain/errors.hpp"

namespace ddchain {

namespace {

std::size_t grid_steps(double t_max, double dt, const char* who) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument(std::string(who) + ": dt must be > 0");
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw std::invalid_argument(std::string(who) + ": t_max must be >= 0");
  return static_cast<std::size_t>(std::llround(t_max / dt));
}

}  // namespace

Complex KernelSpectrum::operator()(double t) const {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    re += weights[k] * std::cos(energies[k] * t);
    im -= weights[k] * std::sin(energies[k] * t);
  }
  const double j2 = coupling * coupling;
  return {j2 * re, j2 * im};
}

TridiagonalHamiltonian environment_block(const TridiagonalHamiltonian& full) {
  full.validate();
  if (full.size() < 2) throw std::invalid_argument("environment_block: need at least two sites");
  TridiagonalHamiltonian env;
  env.diagonal.assign(full.diagonal.begin() + 1, full.diagonal.end());
  env.off_diagonal.assign(full.off_diagonal.begin() + 1, full.off_diagonal.end());
  return env;
}

KernelSpectrum kernel_spectrum(const TridiagonalHamiltonian& env, double coupling) {
  if (!std::isfinite(coupling)) throw std::invalid_argument("kernel_spectrum: coupling must be finite");
  const SpectralDecomposition spec = decompose(env);
  KernelSpectrum out;
  out.coupling = coupling;
  out.energies = spec.eigenvalues;
  out.weights.resize(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double l1k = spec.component(0, k);
    out.weights[k] = l1k * l1k;
  }
  return out;
}

KernelTrace correlation_kernel(const TridiagonalHamiltonian& env, double coupling, double dt, double t_max,
                               const Execution& exec) {
  const std::size_t steps = grid_steps(t_max, dt, "correlation_kernel");
  const KernelSpectrum spectrum = kernel_spectrum(env, coupling);

  KernelTrace trace;
  trace.dt = dt;
  trace.coupling = coupling;
  trace.samples.resize(steps + 1);
  spectral_sum(spectrum.weights, spectrum.energies, coupling * coupling, dt, trace.samples, exec);
  // exact at t = 0: the weights sum to one up to rounding, g(0) is J^2 by unitarity
  trace.samples[0] = {coupling * coupling, 0.0};

  try {
    trace.lifetime = estimate_lifetime(trace);
  } catch (const NotFound&) {
    trace.lifetime.reset();
  }
  return trace;
}

double estimate_lifetime(const KernelTrace& trace, double threshold, double hold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("estimate_lifetime: threshold must be in (0, 1)");
  if (!(trace.dt > 0.0)) throw std::invalid_argument("estimate_lifetime: trace dt must be > 0");
  if (!(hold >= trace.dt)) throw std::invalid_argument("estimate_lifetime: hold must be >= dt");
  const double norm = trace.coupling * trace.coupling;
  if (!(norm > 0.0)) throw NotFound("estimate_lifetime: kernel has zero coupling");

  const auto window = static_cast<std::size_t>(std::llround(hold / trace.dt));
  const std::size_t n = trace.samples.size();
  // run = number of consecutive samples ending at j that are below threshold
  std::size_t run = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (trace.samples[j].real() / norm <= threshold) {
      if (++run == window + 1) return trace.time(j - window);
    } else {
      run = 0;
    }
  }
  throw NotFound("estimate_lifetime: kernel never stays below threshold for the hold window");
}

PTrace solve_p_equation(const KernelTrace& kernel, const std::optional<PulseSpec>& control, double t_max,
                        double dt, double site_energy) {
  const std::size_t steps = grid_steps(t_max, dt, "solve_p_equation");
  if (control) control->validate();
  if (!(kernel.dt > 0.0)) throw std::invalid_argument("solve_p_equation: kernel dt must be > 0");
  const double ratio = dt / kernel.dt;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
    throw std::invalid_argument("solve_p_equation: kernel spacing must divide dt");
  }
  if (kernel.samples.empty() || (kernel.samples.size() - 1) < steps * stride) {
    throw std::invalid_argument("solve_p_equation: kernel does not cover [0, t_max]");
  }
  auto g = [&](std::size_t lag) { return kernel.samples[lag * stride]; };

  const Complex i{0.0, 1.0};
  const double half = 0.5 * dt;
  auto h_avg = [&](std::size_t n) {
    const double a = static_cast<double>(n) * dt;
    const double b = static_cast<double>(n + 1) * dt;
    return site_energy + (control ? control_average(*control, a, b) : 0.0);
  };

  PTrace out;
  out.dt = dt;
  out.values.resize(steps + 1);
  std::vector<Complex>& p = out.values;
  p[0] = 1.0;

  // memory[n] = trapezoid of integral_0^{t_n} g(t_n - s) P(s) ds
  Complex memory_prev{0.0, 0.0};
  for (std::size_t n = 0; n < steps; ++n) {
    // Known part of the trapezoid at t_{n+1}: all history except the P_{n+1} endpoint.
    Complex history = 0.5 * g(n + 1) * p[0];
    for (std::size_t j = 1; j <= n; ++j) history += g(n + 1 - j) * p[j];
    history *= dt;

    const Complex hn = h_avg(n);
    // P_{n+1} - P_n = dt * [-i h (P_n + P_{n+1})/2 - (M_n + M_{n+1})/2],
    // M_{n+1} = history + (dt/2) g(0) P_{n+1}.
    const Complex lhs = 1.0 + half * i * hn + half * half * g(0);
    const Complex rhs = p[n] * (1.0 - half * i * hn) - half * (memory_prev + history);
    p[n + 1] = rhs / lhs;

    memory_prev = history + half * g(0) * p[n + 1];
    if (!(std::abs(p[n + 1]) <= 1.05)) {
      throw NumericalFailure("solve_p_equation: |P| exceeded 1.05 at step " + std::to_string(n + 1), n + 1);
    }
  }
  return out;
}

}  // namespace ddchain
