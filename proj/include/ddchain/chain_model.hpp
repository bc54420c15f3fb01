#pragma once

// One-magnon model of an open XY chain. Site 0 is the system spin, sites
// 1..N-1 the environment. In the single-excitation sector the Hamiltonian
// is an N x N real symmetric tridiagonal matrix: on-site energies on the
// diagonal, hopping J_{i,i+1} on the off-diagonal, and the control c(t)
// as a diagonal shift on site 0.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ddchain {

struct ChainSpec {
  int n_sites = 2;
  double coupling = 1.0;
  // Empty means all zero; otherwise length n_sites.
  std::vector<double> site_energies;
  // gamma: static per-bond offsets, sampled once per chain.
  double static_coupling_disorder = 0.0;
  // epsilon: static per-site energies ("band broadening").
  double band_broadening = 0.0;
  // eta: per-bond offsets redrawn every pulse period.
  double per_period_noise = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t bonds() const { return static_cast<std::size_t>(n_sites - 1); }
};

// Rectangular pulse train: strength Psi on for [k tau, k tau + width) in each
// of `periods` periods, off otherwise.
struct PulseSpec {
  double strength = 0.0;
  double period = 1.0;
  double width = 0.0;
  int periods = 1;

  void validate() const;
  double total_time() const { return period * periods; }
};

struct TridiagonalHamiltonian {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const { return diagonal.size(); }
  void validate() const;
  bool operator==(const TridiagonalHamiltonian&) const = default;
};

struct StaticDisorder {
  std::vector<double> bond_offsets;  // length N-1
  std::vector<double> site_offsets;  // length N
};

// Empty offset spans mean "no offsets".
TridiagonalHamiltonian build_free_hamiltonian(const ChainSpec& spec,
                                              std::span<const double> bond_offsets = {},
                                              std::span<const double> site_offsets = {});

TridiagonalHamiltonian build_controlled_hamiltonian(const ChainSpec& spec, const PulseSpec& pulse,
                                                    std::span<const double> bond_offsets = {},
                                                    std::span<const double> site_offsets = {});

// gamma * u_i on bonds and epsilon * v_j on sites, u, v ~ U(-1, 1), drawn from
// streams derived from spec.seed. Pure function of spec.
StaticDisorder sample_static_disorder(const ChainSpec& spec);

// eta * u_i on bonds for one period; pure function of (seed, period_index).
std::vector<double> sample_period_noise(const ChainSpec& spec, std::uint64_t period_index);

// c(t).
double control_value(const PulseSpec& pulse, double t);

// Mean of c(t) over [a, b]; exact for the rectangular train.
double control_average(const PulseSpec& pulse, double a, double b);

}  // namespace ddchain
