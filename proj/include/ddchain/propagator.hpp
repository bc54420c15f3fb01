#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ddchain/chain_model.hpp"
#include "ddchain/eigensolver.hpp"

namespace ddchain {

using Complex = std::complex<double>;

// Amplitudes over the one-magnon basis |site i up>.
struct MagnonState {
  std::vector<Complex> amplitudes;

  // |1 0 0 ... 0>: the excitation on the system spin.
  static MagnonState localized(std::size_t n_sites, std::size_t site = 0);
  double norm() const;
};

struct EvolutionRecord {
  std::vector<double> times;
  std::vector<double> fidelities;
};

// exp(-i H t) for fixed (H, t), applied as V diag(exp(-i E t)) V^T.
class SpectralPropagator {
 public:
  SpectralPropagator(const SpectralDecomposition& spectrum, double duration);

  // state <- U state. scratch must have size() entries.
  void apply(std::span<Complex> state, std::span<Complex> scratch) const;
  std::size_t size() const { return spectrum_->size(); }

 private:
  const SpectralDecomposition* spectrum_;
  std::vector<Complex> phases_;
};

// Negative durations evolve backwards.
MagnonState evolve_interval(const MagnonState& state, const SpectralDecomposition& spectrum, double duration);

// |<1|state>|: survival amplitude of the system excitation.
double fidelity(const MagnonState& state);

// Starts from |10...0> and applies `pulse.periods` repetitions of
// U0(tau - Delta) U(Delta), recording fidelity at t = 0 and after every
// `record_every` periods (plus the final period). Static disorder is drawn
// from chain.seed; with eta > 0 the bond noise is redrawn and both
// Hamiltonians re-decomposed every period.
EvolutionRecord run_protocol(const ChainSpec& chain, const PulseSpec& pulse, int record_every = 1);

// Same protocol with fixed, already decomposed pulsed/free Hamiltonians.
EvolutionRecord run_protocol(const SpectralDecomposition& pulsed, const SpectralDecomposition& free,
                             const PulseSpec& pulse, int record_every = 1);

// Fidelity after the last period only.
double final_fidelity(const SpectralDecomposition& pulsed, const SpectralDecomposition& free,
                      const PulseSpec& pulse);

// Survival amplitude <1|psi(t_j)> at t_j = j dt, j = 0..steps, under the
// piecewise-constant Hamiltonian H0 + c(t) on site 0. Segments are split at
// pulse edges. Requires eta == 0 (the Hamiltonian must be a function of c(t)
// alone). Direct-propagation oracle for the memory-kernel solver.
std::vector<Complex> survival_amplitudes(const ChainSpec& chain, const PulseSpec& pulse, double dt,
                                         std::size_t steps);

}  // namespace ddchain
