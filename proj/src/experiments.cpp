#include "ddchain/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ddchain/eigensolver.hpp"
#include "ddchain/errors.hpp"
#include "ddchain/propagator.hpp"
#include "ddchain/rng.hpp"
#include "ddchain/version.hpp"

namespace ddchain {

namespace {

using Clock = std::chrono::steady_clock;

void validate_axis(const Axis& axis) {
  if (axis.values.empty()) throw std::invalid_argument("axis '" + axis.name + "' is empty");
  for (std::size_t i = 0; i < axis.values.size(); ++i) {
    if (!std::isfinite(axis.values[i])) throw std::invalid_argument("axis '" + axis.name + "' has a non-finite value");
    if (i > 0 && !(axis.values[i] > axis.values[i - 1]))
      throw std::invalid_argument("axis '" + axis.name + "' must be strictly increasing");
  }
}

RunMetadata finish(std::uint64_t seed, Clock::time_point start) {
  return {seed, kVersion, std::chrono::duration<double>(Clock::now() - start).count()};
}

// Decompositions shared by every cell of a noise-free sweep.
struct ChainSpectra {
  StaticDisorder disorder;
  SpectralDecomposition free;
};

ChainSpectra chain_spectra(const ChainSpec& chain) {
  ChainSpectra out;
  out.disorder = sample_static_disorder(chain);
  out.free = decompose(build_free_hamiltonian(chain, out.disorder.bond_offsets, out.disorder.site_offsets));
  return out;
}

SpectralDecomposition pulsed_spectrum(const ChainSpec& chain, const StaticDisorder& disorder, double psi) {
  const PulseSpec probe{psi, 1.0, 0.0, 1};
  return decompose(build_controlled_hamiltonian(chain, probe, disorder.bond_offsets, disorder.site_offsets));
}

std::string format_fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void SweepGrid::validate() const {
  validate_axis(axis1);
  validate_axis(axis2);
}

std::size_t SweepResult::infeasible_count() const {
  std::size_t count = 0;
  for (double f : fidelities) count += std::isnan(f) ? 1 : 0;
  return count;
}

std::uint64_t replicate_seed(std::uint64_t seed, int replicate) {
  if (replicate == 0) return seed;
  return derive_seed(seed, RngStream::replicate, static_cast<std::uint64_t>(replicate));
}

SweepResult sweep_delta_tau(const ChainSpec& chain, double psi, int periods, const Axis& delta, const Axis& tau,
                            const Execution& exec) {
  const auto start = Clock::now();
  chain.validate();
  if (periods < 1) throw std::invalid_argument("sweep_delta_tau: periods must be >= 1");

  SweepResult result;
  result.grid = {delta, tau, {{"psi", format_fixed(psi)}, {"n", std::to_string(chain.n_sites)},
                              {"m", std::to_string(periods)}}};
  result.grid.validate();
  for (double d : delta.values)
    if (d < 0.0) throw std::invalid_argument("sweep_delta_tau: delta values must be >= 0");
  for (double t : tau.values)
    if (!(t > 0.0)) throw std::invalid_argument("sweep_delta_tau: tau values must be > 0");

  const std::size_t cols = tau.values.size();
  result.fidelities.assign(result.grid.cells(), kInfeasible);

  const bool noisy = chain.per_period_noise > 0.0;
  ChainSpectra spectra;
  SpectralDecomposition pulsed;
  if (!noisy) {
    spectra = chain_spectra(chain);
    pulsed = pulsed_spectrum(chain, spectra.disorder, psi);
  }

  for_each_index(result.grid.cells(), exec, [&](std::size_t cell) {
    const double d = delta.values[cell / cols];
    const double t = tau.values[cell % cols];
    if (d > t) return;
    const PulseSpec pulse{psi, t, d, periods};
    result.fidelities[cell] = noisy ? run_protocol(chain, pulse, periods).fidelities.back()
                                    : final_fidelity(pulsed, spectra.free, pulse);
  });

  result.metadata = finish(chain.seed, start);
  return result;
}

std::vector<SizeRow> sweep_size(const ChainSpec& chain, const PulseSpec& pulse, std::span<const int> n_values,
                                const Execution& exec) {
  pulse.validate();
  if (n_values.empty()) throw std::invalid_argument("sweep_size: n_values is empty");
  std::vector<SizeRow> rows(n_values.size());
  // two cells per N: free then controlled
  for_each_index(2 * n_values.size(), exec, [&](std::size_t cell) {
    const std::size_t row = cell / 2;
    ChainSpec c = chain;
    c.n_sites = n_values[row];
    c.site_energies.clear();
    PulseSpec p = pulse;
    if (cell % 2 == 0) p.strength = 0.0;
    const double f = run_protocol(c, p, p.periods).fidelities.back();
    rows[row].n_sites = c.n_sites;
    (cell % 2 == 0 ? rows[row].fidelity_free : rows[row].fidelity_controlled) = f;
  });
  return rows;
}

ChainSpec variant_chain(const ChainSpec& chain, TraceVariant variant) {
  ChainSpec c = chain;
  c.static_coupling_disorder = 0.0;
  c.band_broadening = 0.0;
  c.per_period_noise = 0.0;
  switch (variant) {
    case TraceVariant::free:
    case TraceVariant::constant:
      break;
    case TraceVariant::band_broadening:
      c.band_broadening = chain.band_broadening;
      break;
    case TraceVariant::static_random:
      c.static_coupling_disorder = chain.static_coupling_disorder;
      break;
    case TraceVariant::period_noise:
      c.per_period_noise = chain.per_period_noise;
      break;
  }
  return c;
}

TraceTable trace_variants(const ChainSpec& chain, const PulseSpec& pulse, int record_every, int replicates,
                          const Execution& exec) {
  chain.validate();
  pulse.validate();
  if (replicates < 1) throw std::invalid_argument("trace_variants: replicates must be >= 1");

  const std::size_t reps = static_cast<std::size_t>(replicates);
  const std::size_t jobs = kTraceVariants.size() * reps;
  std::vector<EvolutionRecord> records(jobs);

  for_each_index(jobs, exec, [&](std::size_t job) {
    const TraceVariant variant = kTraceVariants[job / reps];
    const int rep = static_cast<int>(job % reps);
    const bool clean = variant == TraceVariant::free || variant == TraceVariant::constant;
    if (clean && rep > 0) return;
    ChainSpec c = variant_chain(chain, variant);
    c.seed = replicate_seed(chain.seed, rep);
    PulseSpec p = pulse;
    if (variant == TraceVariant::free) p.strength = 0.0;
    records[job] = run_protocol(c, p, record_every);
  });

  TraceTable table;
  table.times = records.front().times;
  for (std::size_t v = 0; v < kTraceVariants.size(); ++v) {
    const bool clean = kTraceVariants[v] == TraceVariant::free || kTraceVariants[v] == TraceVariant::constant;
    const std::size_t used = clean ? 1 : reps;
    std::vector<double> avg(table.times.size(), 0.0);
    for (std::size_t r = 0; r < used; ++r) {
      const auto& f = records[v * reps + r].fidelities;
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += f[k];
    }
    if (used > 1)
      for (double& x : avg) x /= static_cast<double>(used);
    table.columns[v] = std::move(avg);
  }
  return table;
}

SweepResult sweep_ratio_psi(const ChainSpec& chain, double delta, int periods, const Axis& ratio, const Axis& psi,
                            const Execution& exec) {
  const auto start = Clock::now();
  chain.validate();
  if (periods < 1) throw std::invalid_argument("sweep_ratio_psi: periods must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sweep_ratio_psi: delta must be > 0");

  SweepResult result;
  result.grid = {ratio, psi, {{"delta", format_fixed(delta)}, {"n", std::to_string(chain.n_sites)},
                              {"m", std::to_string(periods)}}};
  result.grid.validate();
  for (double r : ratio.values)
    if (r < 1.0) throw std::invalid_argument("sweep_ratio_psi: ratios must be >= 1");

  const std::size_t cols = psi.values.size();
  result.fidelities.assign(result.grid.cells(), kInfeasible);

  const bool noisy = chain.per_period_noise > 0.0;
  ChainSpectra spectra;
  std::vector<SpectralDecomposition> pulsed(noisy ? 0 : cols);
  if (!noisy) {
    spectra = chain_spectra(chain);
    for_each_index(cols, exec,
                   [&](std::size_t j) { pulsed[j] = pulsed_spectrum(chain, spectra.disorder, psi.values[j]); });
  }

  for_each_index(result.grid.cells(), exec, [&](std::size_t cell) {
    const std::size_t i = cell / cols;
    const std::size_t j = cell % cols;
    const PulseSpec pulse{psi.values[j], ratio.values[i] * delta, delta, periods};
    result.fidelities[cell] = noisy ? run_protocol(chain, pulse, periods).fidelities.back()
                                    : final_fidelity(pulsed[j], spectra.free, pulse);
  });

  result.metadata = finish(chain.seed, start);
  return result;
}

KernelStudy kernel_study(const ChainSpec& chain, double dt, double t_max, double threshold, double hold,
                         int replicates, const Execution& exec) {
  chain.validate();
  if (replicates < 1) throw std::invalid_argument("kernel_study: replicates must be >= 1");

  auto make = [&](const ChainSpec& c) {
    const StaticDisorder d = sample_static_disorder(c);
    const auto env = environment_block(build_free_hamiltonian(c, d.bond_offsets, d.site_offsets));
    KernelTrace trace = correlation_kernel(env, chain.coupling, dt, t_max, exec);
    try {
      trace.lifetime = estimate_lifetime(trace, threshold, hold);
    } catch (const NotFound&) {
      trace.lifetime.reset();
    }
    return trace;
  };

  KernelStudy study;
  ChainSpec clean = variant_chain(chain, TraceVariant::constant);
  study.clean = make(clean);
  if (chain.static_coupling_disorder > 0.0 || chain.band_broadening > 0.0) {
    for (int r = 0; r < replicates; ++r) {
      ChainSpec c = chain;
      c.per_period_noise = 0.0;
      c.seed = replicate_seed(chain.seed, r);
      study.disordered.push_back(make(c));
    }
  }
  return study;
}

PqCheck pq_check(const ChainSpec& chain, const std::optional<PulseSpec>& pulse, double dt, double t_max,
                 const Execution& exec) {
  chain.validate();
  if (chain.per_period_noise != 0.0) throw std::invalid_argument("pq_check: per-period noise is not supported");
  if (!(dt > 0.0)) throw std::invalid_argument("pq_check: dt must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));

  const StaticDisorder d = sample_static_disorder(chain);
  const auto h0 = build_free_hamiltonian(chain, d.bond_offsets, d.site_offsets);
  const KernelTrace kernel = correlation_kernel(environment_block(h0), h0.off_diagonal[0], dt, t_max, exec);
  const PTrace p = solve_p_equation(kernel, pulse, t_max, dt, h0.diagonal[0]);

  const PulseSpec drive = pulse ? *pulse : PulseSpec{0.0, std::max(t_max, dt), 0.0, 1};
  const std::vector<Complex> direct = survival_amplitudes(chain, drive, dt, steps);

  PqCheck out;
  out.times.resize(steps + 1);
  out.abs_p.resize(steps + 1);
  out.fidelity_direct.resize(steps + 1);
  out.abs_error.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    out.times[j] = static_cast<double>(j) * dt;
    out.abs_p[j] = std::abs(p.values[j]);
    out.fidelity_direct[j] = std::abs(direct[j]);
    out.abs_error[j] = std::abs(out.abs_p[j] - out.fidelity_direct[j]);
    out.max_abs_error = std::max(out.max_abs_error, out.abs_error[j]);
  }
  return out;
}

}  // namespace ddchain
