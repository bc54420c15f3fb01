#pragma once

// Sweep drivers for the decoupling studies. Every cell is an independent
// work item written into a preallocated slot, so results do not depend on
// worker count or completion order.

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddchain/chain_model.hpp"
#include "ddchain/parallel.hpp"
#include "ddchain/pq_kernel.hpp"

namespace ddchain {

// Marker for cells outside the physical region (Delta > tau).
inline constexpr double kInfeasible = std::numeric_limits<double>::quiet_NaN();

struct Axis {
  std::string name;
  std::vector<double> values;
};

struct SweepGrid {
  Axis axis1;
  Axis axis2;
  std::map<std::string, std::string> fixed;

  void validate() const;
  std::size_t cells() const { return axis1.values.size() * axis2.values.size(); }
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
};

struct SweepResult {
  SweepGrid grid;
  std::vector<double> fidelities;  // row-major, axis1 major
  RunMetadata metadata;

  double at(std::size_t i, std::size_t j) const { return fidelities[i * grid.axis2.values.size() + j]; }
  std::size_t infeasible_count() const;
};

// Final fidelity after `periods` periods for every (Delta, tau); Delta > tau
// cells hold kInfeasible.
SweepResult sweep_delta_tau(const ChainSpec& chain, double psi, int periods, const Axis& delta, const Axis& tau,
                            const Execution& exec = {});

struct SizeRow {
  int n_sites = 0;
  double fidelity_free = 0.0;
  double fidelity_controlled = 0.0;
};

// chain supplies everything but n_sites; the free column uses strength 0.
std::vector<SizeRow> sweep_size(const ChainSpec& chain, const PulseSpec& pulse, std::span<const int> n_values,
                                const Execution& exec = {});

enum class TraceVariant { free, constant, band_broadening, static_random, period_noise };
inline constexpr std::array<TraceVariant, 5> kTraceVariants = {
    TraceVariant::free, TraceVariant::constant, TraceVariant::band_broadening, TraceVariant::static_random,
    TraceVariant::period_noise};

struct TraceTable {
  std::vector<double> times;
  std::array<std::vector<double>, 5> columns;  // indexed like kTraceVariants

  const std::vector<double>& column(TraceVariant v) const { return columns[static_cast<std::size_t>(v)]; }
};

// The chain for one variant: clean except for the single disorder amplitude
// that variant studies, taken from `chain`.
ChainSpec variant_chain(const ChainSpec& chain, TraceVariant variant);

// Five fidelity time series on t = k tau. Disordered variants are averaged
// over `replicates` seeds (the first is chain.seed itself).
TraceTable trace_variants(const ChainSpec& chain, const PulseSpec& pulse, int record_every = 1,
                          int replicates = 1, const Execution& exec = {});

// tau = ratio * Delta per cell.
SweepResult sweep_ratio_psi(const ChainSpec& chain, double delta, int periods, const Axis& ratio, const Axis& psi,
                            const Execution& exec = {});

struct KernelStudy {
  KernelTrace clean;
  std::vector<KernelTrace> disordered;  // one per replicate when gamma or epsilon > 0
};

// Kernels of the environment block, normalized to g(0) = J^2 with the
// uniform J. Lifetimes use the given estimator settings.
KernelStudy kernel_study(const ChainSpec& chain, double dt, double t_max, double threshold, double hold,
                         int replicates = 1, const Execution& exec = {});

struct PqCheck {
  std::vector<double> times;
  std::vector<double> abs_p;
  std::vector<double> fidelity_direct;
  std::vector<double> abs_error;
  double max_abs_error = 0.0;
};

// |P(t)| from the memory equation against direct propagation of the same
// chain on the grid j dt, j = 0..round(t_max/dt). Without a pulse the
// control is off throughout.
PqCheck pq_check(const ChainSpec& chain, const std::optional<PulseSpec>& pulse, double dt, double t_max,
                 const Execution& exec = {});

std::uint64_t replicate_seed(std::uint64_t seed, int replicate);

}  // namespace ddchain
