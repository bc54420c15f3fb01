#include "ddchain/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ddchain {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames = {
    {ExperimentKind::delta_tau, "delta-tau"}, {ExperimentKind::size, "size"},
    {ExperimentKind::trace, "trace"},         {ExperimentKind::ratio_psi, "ratio-psi"},
    {ExperimentKind::kernel, "kernel"},       {ExperimentKind::pq_check, "pq-check"},
};

const std::set<std::string> kRequired = {"kind", "n", "j"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  Int value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

bool is_annotation(const std::string& key) { return key.rfind("meta.", 0) == 0 || key.rfind("summary.", 0) == 0; }

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void require_grid(const GridSpec& grid, const std::string& key) {
  const auto v = grid.values();
  require(!v.empty(), key, "grid is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(std::isfinite(v[i]), key, "grid values must be finite");
    if (i > 0) require(v[i] > v[i - 1], key, "grid must be strictly increasing");
  }
}

void require_pulse(const RunConfig& c) {
  require(c.tau > 0.0, "tau", "must be > 0");
  require(c.delta >= 0.0, "delta", "must be >= 0");
  require(c.delta <= c.tau, "delta", "out of range: delta must not exceed tau");
  require(c.m >= 1, "m", "must be >= 1");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& text) {
  for (const auto& [k, name] : kKindNames)
    if (name == text) return k;
  return std::nullopt;
}

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 3) throw std::invalid_argument("linspace grid must be lo:hi:count");
    Linspace ls;
    ls.lo = parse_double("grid", parts[0]);
    ls.hi = parse_double("grid", parts[1]);
    ls.count = parse_int<int>("grid", parts[2]);
    if (ls.count < 1) throw std::invalid_argument("linspace count must be >= 1");
    grid.linspace = ls;
    return grid;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) grid.list.push_back(parse_double("grid", trim(part)));
  return grid;
}

std::vector<double> GridSpec::values() const {
  if (!linspace) return list;
  const auto& ls = *linspace;
  std::vector<double> v(static_cast<std::size_t>(std::max(ls.count, 0)));
  for (int i = 0; i < ls.count; ++i) {
    v[static_cast<std::size_t>(i)] =
        ls.count == 1 ? ls.lo : ls.lo + (ls.hi - ls.lo) * static_cast<double>(i) / (ls.count - 1);
  }
  if (ls.count > 1) v.back() = ls.hi;
  return v;
}

std::string GridSpec::to_string() const {
  if (linspace) {
    return format_double(linspace->lo) + ":" + format_double(linspace->hi) + ":" + std::to_string(linspace->count);
  }
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) out += (i ? "," : "") + format_double(list[i]);
  return out;
}

ChainSpec RunConfig::chain() const {
  ChainSpec c;
  c.n_sites = n;
  c.coupling = j;
  c.static_coupling_disorder = gamma;
  c.band_broadening = epsilon;
  c.per_period_noise = eta;
  c.seed = seed;
  return c;
}

PulseSpec RunConfig::pulse() const { return {psi, tau, delta, m}; }

std::string RunConfig::output_path() const { return out.empty() ? ddchain::to_string(kind) + ".csv" : out; }

std::vector<int> RunConfig::n_list() const {
  std::vector<int> out;
  for (double v : n_values.values()) out.push_back(static_cast<int>(std::lround(v)));
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "kind",      "n",          "j",          "psi",       "delta",     "tau",      "m",
      "gamma",     "epsilon",    "eta",        "seed",      "out",       "workers",  "record_every",
      "replicates", "control",   "dt",         "t_max",     "threshold", "hold",     "delta_grid",
      "tau_grid",  "ratio_grid", "psi_grid",   "n_values"};
  return keys;
}

ConfigEntries read_config_text(const std::string& text) {
  ConfigEntries entries;
  std::stringstream ss(text);
  int line_no = 0;
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return read_config_text(buf.str());
}

RunConfig parse_config(const ConfigEntries& entries) {
  std::map<std::string, std::string> values;
  const auto& known = config_keys();
  for (const auto& [key, value] : entries) {
    if (is_annotation(key)) continue;
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown key");
    values[key] = value;
  }
  for (const auto& key : kRequired)
    if (!values.count(key)) throw ConfigError(key, "missing required key");

  RunConfig c;
  const auto kind = parse_kind(values.at("kind"));
  if (!kind) throw ConfigError("kind", "unknown experiment kind '" + values.at("kind") + "'");
  c.kind = *kind;
  if (c.kind == ExperimentKind::trace) {
    c.gamma = 0.5;
    c.epsilon = 0.5;
    c.eta = 0.1;
  }
  if (c.kind == ExperimentKind::pq_check) c.m = 10;

  auto grid = [](const std::string& key, const std::string& text) {
    try {
      return GridSpec::parse(text);
    } catch (const ConfigError& e) {
      throw ConfigError(key, e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  };

  for (const auto& [key, v] : values) {
    if (key == "kind") continue;
    else if (key == "n") c.n = parse_int<int>(key, v);
    else if (key == "j") c.j = parse_double(key, v);
    else if (key == "psi") c.psi = parse_double(key, v);
    else if (key == "delta") c.delta = parse_double(key, v);
    else if (key == "tau") c.tau = parse_double(key, v);
    else if (key == "m") c.m = parse_int<int>(key, v);
    else if (key == "gamma") c.gamma = parse_double(key, v);
    else if (key == "epsilon") c.epsilon = parse_double(key, v);
    else if (key == "eta") c.eta = parse_double(key, v);
    else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "out") c.out = v;
    else if (key == "workers") c.workers = parse_int<int>(key, v);
    else if (key == "record_every") c.record_every = parse_int<int>(key, v);
    else if (key == "replicates") c.replicates = parse_int<int>(key, v);
    else if (key == "control") c.control = parse_bool(key, v);
    else if (key == "dt") c.dt = parse_double(key, v);
    else if (key == "t_max") c.t_max = parse_double(key, v);
    else if (key == "threshold") c.threshold = parse_double(key, v);
    else if (key == "hold") c.hold = parse_double(key, v);
    else if (key == "delta_grid") c.delta_grid = grid(key, v);
    else if (key == "tau_grid") c.tau_grid = grid(key, v);
    else if (key == "ratio_grid") c.ratio_grid = grid(key, v);
    else if (key == "psi_grid") c.psi_grid = grid(key, v);
    else if (key == "n_values") c.n_values = grid(key, v);
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  require(c.n >= 2, "n", "must be >= 2");
  require(std::isfinite(c.j), "j", "must be finite");
  require(std::isfinite(c.psi), "psi", "must be finite");
  require(c.gamma >= 0.0, "gamma", "must be >= 0");
  require(c.epsilon >= 0.0, "epsilon", "must be >= 0");
  require(c.eta >= 0.0, "eta", "must be >= 0");
  require(c.workers >= 0, "workers", "must be >= 0");
  require(c.record_every >= 1, "record_every", "must be >= 1");
  require(c.replicates >= 1, "replicates", "must be >= 1");
  require(c.m >= 1, "m", "must be >= 1");

  switch (c.kind) {
    case ExperimentKind::delta_tau:
      require_grid(c.delta_grid, "delta_grid");
      require_grid(c.tau_grid, "tau_grid");
      require(c.delta_grid.values().front() >= 0.0, "delta_grid", "values must be >= 0");
      require(c.tau_grid.values().front() > 0.0, "tau_grid", "values must be > 0");
      break;
    case ExperimentKind::size:
      require_pulse(c);
      require_grid(c.n_values, "n_values");
      for (double v : c.n_values.values())
        require(v >= 2.0 && v == std::round(v), "n_values", "entries must be integers >= 2");
      break;
    case ExperimentKind::trace:
      require_pulse(c);
      break;
    case ExperimentKind::ratio_psi:
      require(c.delta > 0.0, "delta", "must be > 0");
      require_grid(c.ratio_grid, "ratio_grid");
      require_grid(c.psi_grid, "psi_grid");
      require(c.ratio_grid.values().front() >= 1.0, "ratio_grid", "ratios must be >= 1");
      break;
    case ExperimentKind::kernel:
      require(c.dt > 0.0, "dt", "must be > 0");
      require(c.t_max > 0.0, "t_max", "must be > 0");
      require(c.threshold > 0.0 && c.threshold < 1.0, "threshold", "must be in (0, 1)");
      require(c.hold >= c.dt, "hold", "must be >= dt");
      break;
    case ExperimentKind::pq_check:
      require_pulse(c);
      require(c.dt > 0.0, "dt", "must be > 0");
      require(c.eta == 0.0, "eta", "per-period noise is not supported by pq-check");
      break;
  }
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "kind=" << to_string(c.kind) << '\n'
      << "n=" << c.n << '\n'
      << "j=" << format_double(c.j) << '\n'
      << "psi=" << format_double(c.psi) << '\n'
      << "delta=" << format_double(c.delta) << '\n'
      << "tau=" << format_double(c.tau) << '\n'
      << "m=" << c.m << '\n'
      << "gamma=" << format_double(c.gamma) << '\n'
      << "epsilon=" << format_double(c.epsilon) << '\n'
      << "eta=" << format_double(c.eta) << '\n'
      << "seed=" << c.seed << '\n'
      << "out=" << c.out << '\n'
      << "workers=" << c.workers << '\n'
      << "record_every=" << c.record_every << '\n'
      << "replicates=" << c.replicates << '\n'
      << "control=" << (c.control ? "true" : "false") << '\n'
      << "dt=" << format_double(c.dt) << '\n'
      << "t_max=" << format_double(c.t_max) << '\n'
      << "threshold=" << format_double(c.threshold) << '\n'
      << "hold=" << format_double(c.hold) << '\n'
      << "delta_grid=" << c.delta_grid.to_string() << '\n'
      << "tau_grid=" << c.tau_grid.to_string() << '\n'
      << "ratio_grid=" << c.ratio_grid.to_string() << '\n'
      << "psi_grid=" << c.psi_grid.to_string() << '\n'
      << "n_values=" << c.n_values.to_string() << '\n';
  return out.str();
}

}  // namespace ddchain
