#include "ddchain/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddchain {

MagnonState MagnonState::localized(std::size_t n_sites, std::size_t site) {
  if (site >= n_sites) throw std::invalid_argument("MagnonState: site out of range");
  MagnonState s;
  s.amplitudes.assign(n_sites, Complex{0.0, 0.0});
  s.amplitudes[site] = 1.0;
  return s;
}

double MagnonState::norm() const {
  double sum = 0.0;
  for (const Complex& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

SpectralPropagator::SpectralPropagator(const SpectralDecomposition& spectrum, double duration)
    : spectrum_(&spectrum), phases_(spectrum.size()) {
  if (!std::isfinite(duration)) throw std::invalid_argument("SpectralPropagator: duration must be finite");
  for (std::size_t k = 0; k < phases_.size(); ++k) {
    phases_[k] = std::polar(1.0, -spectrum.eigenvalues[k] * duration);
  }
}

void SpectralPropagator::apply(std::span<Complex> state, std::span<Complex> scratch) const {
  const std::size_t n = size();
  if (state.size() != n || scratch.size() != n) {
    throw std::invalid_argument("SpectralPropagator: dimension mismatch");
  }
  // coefficients in the eigenbasis, times the phase
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = spectrum_->vector(k);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      re += v[i] * state[i].real();
      im += v[i] * state[i].imag();
    }
    scratch[k] = phases_[k] * Complex{re, im};
  }
  std::fill(state.begin(), state.end(), Complex{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = spectrum_->vector(k);
    const Complex c = scratch[k];
    for (std::size_t i = 0; i < n; ++i) state[i] += v[i] * c;
  }
}

MagnonState evolve_interval(const MagnonState& state, const SpectralDecomposition& spectrum, double duration) {
  if (state.amplitudes.size() != spectrum.size()) {
    throw std::invalid_argument("evolve_interval: state and spectrum dimensions differ");
  }
  MagnonState out = state;
  if (duration == 0.0) return out;
  std::vector<Complex> scratch(spectrum.size());
  SpectralPropagator(spectrum, duration).apply(out.amplitudes, scratch);
  return out;
}

double fidelity(const MagnonState& state) {
  if (state.amplitudes.empty()) throw std::invalid_argument("fidelity: empty state");
  return std::abs(state.amplitudes.front());
}

namespace {

bool should_record(int period, int record_every, int periods) {
  return period % record_every == 0 || period == periods;
}

void check_record_every(int record_every) {
  if (record_every < 1) throw std::invalid_argument("run_protocol: record_every must be >= 1");
}

std::vector<double> combined(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

}  // namespace

EvolutionRecord run_protocol(const SpectralDecomposition& pulsed, const SpectralDecomposition& free,
                             const PulseSpec& pulse, int record_every) {
  pulse.validate();
  check_record_every(record_every);
  if (pulsed.size() != free.size()) throw std::invalid_argument("run_protocol: spectra dimensions differ");

  const std::size_t n = free.size();
  const SpectralPropagator on(pulsed, pulse.width);
  const SpectralPropagator off(free, pulse.period - pulse.width);
  MagnonState state = MagnonState::localized(n);
  std::vector<Complex> scratch(n);

  EvolutionRecord rec;
  rec.times.push_back(0.0);
  rec.fidelities.push_back(1.0);
  for (int k = 1; k <= pulse.periods; ++k) {
    on.apply(state.amplitudes, scratch);
    off.apply(state.amplitudes, scratch);
    if (should_record(k, record_every, pulse.periods)) {
      rec.times.push_back(k * pulse.period);
      rec.fidelities.push_back(std::min(1.0, fidelity(state)));
    }
  }
  return rec;
}

EvolutionRecord run_protocol(const ChainSpec& chain, const PulseSpec& pulse, int record_every) {
  chain.validate();
  pulse.validate();
  check_record_every(record_every);

  const StaticDisorder disorder = sample_static_disorder(chain);
  if (chain.per_period_noise == 0.0) {
    const auto free = decompose(build_free_hamiltonian(chain, disorder.bond_offsets, disorder.site_offsets));
    const auto pulsed =
        decompose(build_controlled_hamiltonian(chain, pulse, disorder.bond_offsets, disorder.site_offsets));
    return run_protocol(pulsed, free, pulse, record_every);
  }

  const auto n = static_cast<std::size_t>(chain.n_sites);
  MagnonState state = MagnonState::localized(n);
  std::vector<Complex> scratch(n);

  EvolutionRecord rec;
  rec.times.push_back(0.0);
  rec.fidelities.push_back(1.0);
  for (int k = 1; k <= pulse.periods; ++k) {
    const auto noise = sample_period_noise(chain, static_cast<std::uint64_t>(k - 1));
    const auto bonds = combined(disorder.bond_offsets, noise);
    const auto free = decompose(build_free_hamiltonian(chain, bonds, disorder.site_offsets));
    const auto pulsed = decompose(build_controlled_hamiltonian(chain, pulse, bonds, disorder.site_offsets));
    SpectralPropagator(pulsed, pulse.width).apply(state.amplitudes, scratch);
    SpectralPropagator(free, pulse.period - pulse.width).apply(state.amplitudes, scratch);
    if (should_record(k, record_every, pulse.periods)) {
      rec.times.push_back(k * pulse.period);
      rec.fidelities.push_back(std::min(1.0, fidelity(state)));
    }
  }
  return rec;
}

double final_fidelity(const SpectralDecomposition& pulsed, const SpectralDecomposition& free,
                      const PulseSpec& pulse) {
  return run_protocol(pulsed, free, pulse, pulse.periods).fidelities.back();
}

std::vector<Complex> survival_amplitudes(const ChainSpec& chain, const PulseSpec& pulse, double dt,
                                         std::size_t steps) {
  chain.validate();
  pulse.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("survival_amplitudes: dt must be > 0");
  if (chain.per_period_noise != 0.0) {
    throw std::invalid_argument("survival_amplitudes: per-period noise is not supported");
  }

  const StaticDisorder disorder = sample_static_disorder(chain);
  const auto free = decompose(build_free_hamiltonian(chain, disorder.bond_offsets, disorder.site_offsets));
  const auto pulsed =
      decompose(build_controlled_hamiltonian(chain, pulse, disorder.bond_offsets, disorder.site_offsets));
  const SpectralPropagator free_step(free, dt);
  const SpectralPropagator pulsed_step(pulsed, dt);

  const auto n = static_cast<std::size_t>(chain.n_sites);
  MagnonState state = MagnonState::localized(n);
  std::vector<Complex> scratch(n);

  // Pulse edges, ascending.
  std::vector<double> edges;
  for (int k = 0; k < pulse.periods; ++k) {
    edges.push_back(k * pulse.period);
    edges.push_back(k * pulse.period + pulse.width);
  }
  edges.push_back(pulse.total_time());
  const double snap = 1e-12 * std::max(1.0, pulse.total_time());

  std::vector<Complex> out;
  out.reserve(steps + 1);
  out.push_back(state.amplitudes.front());
  auto next_edge = edges.begin();
  for (std::size_t j = 1; j <= steps; ++j) {
    const double start = static_cast<double>(j - 1) * dt;
    const double end = static_cast<double>(j) * dt;
    while (next_edge != edges.end() && *next_edge <= start + snap) ++next_edge;

    if (next_edge == edges.end() || *next_edge >= end - snap) {
      const bool on = control_value(pulse, 0.5 * (start + end)) != 0.0;
      (on ? pulsed_step : free_step).apply(state.amplitudes, scratch);
    } else {
      double t = start;
      while (t < end - snap) {
        double stop = end;
        if (next_edge != edges.end() && *next_edge < end - snap) stop = *next_edge++;
        const bool on = control_value(pulse, 0.5 * (t + stop)) != 0.0;
        SpectralPropagator(on ? pulsed : free, stop - t).apply(state.amplitudes, scratch);
        t = stop;
      }
    }
    out.push_back(state.amplitudes.front());
  }
  return out;
}

}  // namespace ddchain
