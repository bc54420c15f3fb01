#pragma once

// Flat key=value run configuration shared by config files, command-line
// flags and the metadata sidecar written next to every CSV.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddchain/chain_model.hpp"
#include "ddchain/parallel.hpp"

namespace ddchain {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class ExperimentKind { delta_tau, size, trace, ratio_psi, kernel, pq_check };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& text);

// Either "lo:hi:count" (inclusive linspace) or an explicit comma list.
struct GridSpec {
  struct Linspace {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool operator==(const Linspace&) const = default;
  };
  std::optional<Linspace> linspace;
  std::vector<double> list;

  static GridSpec parse(const std::string& text);
  static GridSpec range(double lo, double hi, int count) { return {Linspace{lo, hi, count}, {}}; }
  std::vector<double> values() const;
  std::string to_string() const;
  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::size;
  int n = 130;
  double j = 1.0;
  double psi = 8.0;
  double delta = 1.2;
  double tau = 1.3;
  int m = 128;
  double gamma = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  int workers = 0;
  int record_every = 1;
  int replicates = 1;
  bool control = true;  // pq-check: false runs the zero-control case
  double dt = 1e-3;
  double t_max = 10.0;
  double threshold = 0.02;
  double hold = 0.5;
  GridSpec delta_grid = GridSpec::range(0.02, 2.0, 100);
  GridSpec tau_grid = GridSpec::range(0.02, 2.5, 100);
  GridSpec ratio_grid = GridSpec::range(1.0, 2.0, 51);
  GridSpec psi_grid = GridSpec::range(0.0, 20.0, 101);
  GridSpec n_values = GridSpec::range(10.0, 130.0, 121);

  bool operator==(const RunConfig&) const = default;

  ChainSpec chain() const;
  PulseSpec pulse() const;
  Execution execution() const { return {Backend::openmp, workers}; }
  std::string output_path() const;
  std::vector<int> n_list() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// "#" starts a comment; blank lines are skipped. Throws ConfigError naming
// the line for malformed input.
ConfigEntries read_config_text(const std::string& text);
ConfigEntries read_config_file(const std::filesystem::path& path);

// Later entries override earlier ones (file first, then flags). Keys with
// the "meta." or "summary." prefix are sidecar annotations and ignored.
// Every other unknown key is an error. The result is fully validated.
RunConfig parse_config(const ConfigEntries& entries);

// All keys, one per line, in a fixed order; doubles with 17 significant
// digits so parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Throws ConfigError naming the first offending key.
void validate(const RunConfig& config);

// Keys accepted by parse_config, in serialization order.
const std::vector<std::string>& config_keys();

}  // namespace ddchain
