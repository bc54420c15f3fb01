#include "ddchain/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ddchain/rng.hpp"

namespace ddchain {

namespace {

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

void add_offsets(std::vector<double>& target, std::span<const double> offsets, const char* what) {
  if (offsets.empty()) return;
  if (offsets.size() != target.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(target.size()) +
                                " entries, got " + std::to_string(offsets.size()));
  }
  for (std::size_t i = 0; i < target.size(); ++i) target[i] += offsets[i];
}

// Measure of {s in [0, t] : c(s) != 0}.
double on_time(const PulseSpec& pulse, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= pulse.total_time()) return pulse.width * pulse.periods;
  const double k = std::floor(t / pulse.period);
  return k * pulse.width + std::clamp(t - k * pulse.period, 0.0, pulse.width);
}

}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites must be >= 2");
  if (!std::isfinite(coupling)) throw std::invalid_argument("ChainSpec: coupling must be finite");
  if (!finite_nonnegative(static_coupling_disorder))
    throw std::invalid_argument("ChainSpec: static_coupling_disorder must be finite and >= 0");
  if (!finite_nonnegative(band_broadening))
    throw std::invalid_argument("ChainSpec: band_broadening must be finite and >= 0");
  if (!finite_nonnegative(per_period_noise))
    throw std::invalid_argument("ChainSpec: per_period_noise must be finite and >= 0");
  if (!site_energies.empty()) {
    if (site_energies.size() != static_cast<std::size_t>(n_sites))
      throw std::invalid_argument("ChainSpec: site_energies length must equal n_sites");
    for (double e : site_energies)
      if (!std::isfinite(e)) throw std::invalid_argument("ChainSpec: site_energies must be finite");
  }
}

void PulseSpec::validate() const {
  if (!std::isfinite(strength)) throw std::invalid_argument("PulseSpec: strength must be finite");
  if (!(std::isfinite(period) && period > 0.0))
    throw std::invalid_argument("PulseSpec: period must be > 0");
  if (!(std::isfinite(width) && width >= 0.0 && width <= period))
    throw std::invalid_argument("PulseSpec: width must satisfy 0 <= width <= period");
  if (periods < 1) throw std::invalid_argument("PulseSpec: periods must be >= 1");
}

void TridiagonalHamiltonian::validate() const {
  if (diagonal.empty()) throw std::invalid_argument("TridiagonalHamiltonian: empty");
  if (off_diagonal.size() + 1 != diagonal.size())
    throw std::invalid_argument("TridiagonalHamiltonian: off_diagonal must have N-1 entries");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(diagonal.begin(), diagonal.end(), finite) ||
      !std::all_of(off_diagonal.begin(), off_diagonal.end(), finite))
    throw std::invalid_argument("TridiagonalHamiltonian: non-finite entry");
}

TridiagonalHamiltonian build_free_hamiltonian(const ChainSpec& spec,
                                              std::span<const double> bond_offsets,
                                              std::span<const double> site_offsets) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n_sites);
  TridiagonalHamiltonian h;
  h.diagonal = spec.site_energies.empty() ? std::vector<double>(n, 0.0) : spec.site_energies;
  h.off_diagonal.assign(n - 1, spec.coupling);
  add_offsets(h.off_diagonal, bond_offsets, "bond_offsets");
  add_offsets(h.diagonal, site_offsets, "site_offsets");
  h.validate();
  return h;
}

TridiagonalHamiltonian build_controlled_hamiltonian(const ChainSpec& spec, const PulseSpec& pulse,
                                                    std::span<const double> bond_offsets,
                                                    std::span<const double> site_offsets) {
  pulse.validate();
  TridiagonalHamiltonian h = build_free_hamiltonian(spec, bond_offsets, site_offsets);
  h.diagonal[0] += pulse.strength;
  return h;
}

StaticDisorder sample_static_disorder(const ChainSpec& spec) {
  spec.validate();
  StaticDisorder out;
  out.bond_offsets.resize(spec.bonds());
  out.site_offsets.resize(static_cast<std::size_t>(spec.n_sites));

  SplitMix64 bonds(derive_seed(spec.seed, RngStream::bond_disorder));
  for (double& x : out.bond_offsets) x = spec.static_coupling_disorder * bonds.uniform_symmetric();

  SplitMix64 sites(derive_seed(spec.seed, RngStream::site_disorder));
  for (double& x : out.site_offsets) x = spec.band_broadening * sites.uniform_symmetric();
  return out;
}

std::vector<double> sample_period_noise(const ChainSpec& spec, std::uint64_t period_index) {
  spec.validate();
  std::vector<double> out(spec.bonds());
  SplitMix64 rng(derive_seed(spec.seed, RngStream::period_noise, period_index));
  for (double& x : out) x = spec.per_period_noise * rng.uniform_symmetric();
  return out;
}

double control_value(const PulseSpec& pulse, double t) {
  if (t < 0.0 || t >= pulse.total_time()) return 0.0;
  const double phase = t - std::floor(t / pulse.period) * pulse.period;
  return phase < pulse.width ? pulse.strength : 0.0;
}

double control_average(const PulseSpec& pulse, double a, double b) {
  if (b <= a) return control_value(pulse, a);
  return pulse.strength * (on_time(pulse, b) - on_time(pulse, a)) / (b - a);
}

}  // namespace ddchain
