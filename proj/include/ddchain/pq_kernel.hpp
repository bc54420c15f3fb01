#pragma once

// Projection of the one-magnon dynamics onto the system site. With
// H = [[h, R], [R^T, D]], R = (J, 0, ..., 0), the system amplitude obeys
//
//   dP/dt = -i h(t) P(t) - integral_0^t g(t - s) P(s) ds,
//   g(t) = J^2 sum_k |L_{1k}|^2 exp(-i E_k t),
//
// where D = L diag(E) L^T is the control-free environment block.

#include <complex>
#include <optional>
#include <vector>

#include "ddchain/chain_model.hpp"
#include "ddchain/eigensolver.hpp"
#include "ddchain/parallel.hpp"

namespace ddchain {

using Complex = std::complex<double>;

inline constexpr double kDefaultLifetimeThreshold = 0.02;
inline constexpr double kDefaultLifetimeHold = 0.5;

// Spectral form of g: weights |L_{1k}|^2 and energies E_k of D.
struct KernelSpectrum {
  std::vector<double> weights;
  std::vector<double> energies;
  double coupling = 1.0;

  Complex operator()(double t) const;
};

struct KernelTrace {
  double dt = 0.0;
  double coupling = 1.0;
  std::vector<Complex> samples;  // samples[j] = g(j dt)
  std::optional<double> lifetime;

  double time(std::size_t j) const { return static_cast<double>(j) * dt; }
};

struct PTrace {
  double dt = 0.0;
  std::vector<Complex> values;  // values[j] = P(j dt)
};

// Rows/columns 1..N-1 of a one-magnon Hamiltonian (the block D).
TridiagonalHamiltonian environment_block(const TridiagonalHamiltonian& full);

KernelSpectrum kernel_spectrum(const TridiagonalHamiltonian& env, double coupling);

// Samples g on j dt for j = 0..round(t_max/dt); lifetime is filled with the
// default estimator settings when the trace is long enough to find one.
KernelTrace correlation_kernel(const TridiagonalHamiltonian& env, double coupling, double dt, double t_max,
                               const Execution& exec = {});

// Smallest grid time T such that Re g(t) / J^2 <= threshold for every grid
// point in [T, T + hold]. One-sided: the undershoot below zero right after
// the first decay does not count as a revival. Throws NotFound if no such T
// fits inside the trace.
double estimate_lifetime(const KernelTrace& trace, double threshold = kDefaultLifetimeThreshold,
                         double hold = kDefaultLifetimeHold);

// Integrates the memory equation for P on j dt, j = 0..round(t_max/dt),
// P(0) = 1, h(t) = site_energy + c(t) (c = 0 without control). Implicit
// trapezoid in time and for the memory integral; h is averaged exactly over
// each step. kernel.dt must divide dt. Second order for smooth g.
// Throws NumericalFailure if |P| exceeds 1.05.
PTrace solve_p_equation(const KernelTrace& kernel, const std::optional<PulseSpec>& control, double t_max,
                        double dt, double site_energy = 0.0);

}  // namespace ddchain
