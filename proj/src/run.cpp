#include "ddchain/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ddchain/experiments.hpp"
#include "ddchain/version.hpp"

namespace ddchain {

namespace {

using Clock = std::chrono::steady_clock;

class CsvWriter {
 public:
  explicit CsvWriter(std::ostringstream& out) : out_(out) {}

  CsvWriter& header(std::initializer_list<std::string> names) {
    bool first = true;
    for (const auto& n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
    return *this;
  }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ostringstream& out_;
};

std::string num(double x) { return format_csv_double(x); }

std::string summary_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_sweep(const SweepResult& result, std::ostringstream& csv, std::map<std::string, std::string>& summary) {
  CsvWriter w(csv);
  w.header({result.grid.axis1.name, result.grid.axis2.name, "fidelity"});
  const auto& a = result.grid.axis1.values;
  const auto& b = result.grid.axis2.values;
  double best = 0.0;
  std::size_t above = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double f = result.at(i, j);
      w.row({num(a[i]), num(b[j]), num(f)});
      if (!std::isnan(f)) {
        best = std::max(best, f);
        above += f > 0.95 ? 1 : 0;
      }
    }
  }
  summary["cells"] = std::to_string(result.grid.cells());
  summary["infeasible_cells"] = std::to_string(result.infeasible_count());
  summary["cells_above_0.95"] = std::to_string(above);
  summary["max_fidelity"] = summary_double(best);
}

}  // namespace

std::string format_csv_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta");
}

RunOutcome run(const RunConfig& config, std::ostream& log) {
  validate(config);
  const auto start = Clock::now();
  const Execution exec = config.execution();
  const ChainSpec chain = config.chain();

  std::ostringstream csv;
  RunOutcome outcome;
  auto& summary = outcome.summary;
  std::string sampling = "period_boundaries";

  switch (config.kind) {
    case ExperimentKind::delta_tau: {
      const auto result = sweep_delta_tau(chain, config.psi, config.m, {"delta", config.delta_grid.values()},
                                          {"tau", config.tau_grid.values()}, exec);
      write_sweep(result, csv, summary);
      break;
    }
    case ExperimentKind::ratio_psi: {
      const auto result = sweep_ratio_psi(chain, config.delta, config.m, {"ratio", config.ratio_grid.values()},
                                          {"psi", config.psi_grid.values()}, exec);
      write_sweep(result, csv, summary);
      break;
    }
    case ExperimentKind::size: {
      const auto ns = config.n_list();
      const auto rows = sweep_size(chain, config.pulse(), ns, exec);
      CsvWriter w(csv);
      w.header({"n", "fidelity_free", "fidelity_controlled"});
      std::vector<double> controlled;
      for (const auto& r : rows) {
        w.row({std::to_string(r.n_sites), num(r.fidelity_free), num(r.fidelity_controlled)});
        controlled.push_back(r.fidelity_controlled);
      }
      const double mean = std::accumulate(controlled.begin(), controlled.end(), 0.0) / controlled.size();
      double var = 0.0;
      for (double f : controlled) var += (f - mean) * (f - mean);
      summary["mean_controlled"] = summary_double(mean);
      summary["std_controlled"] = summary_double(std::sqrt(var / controlled.size()));
      break;
    }
    case ExperimentKind::trace: {
      const auto table = trace_variants(chain, config.pulse(), config.record_every, config.replicates, exec);
      CsvWriter w(csv);
      w.header({"t", "f_free", "f_const", "f_broadening", "f_static_random", "f_period_noise"});
      const auto& c = table.columns;
      for (std::size_t k = 0; k < table.times.size(); ++k) {
        w.row({num(table.times[k]), num(c[0][k]), num(c[1][k]), num(c[2][k]), num(c[3][k]), num(c[4][k])});
      }
      const char* names[] = {"broadening", "static_random", "period_noise"};
      for (std::size_t v = 2; v < 5; ++v) {
        double dev = 0.0;
        for (std::size_t k = 0; k < table.times.size(); ++k) dev = std::max(dev, std::abs(c[v][k] - c[1][k]));
        summary[std::string("max_deviation_") + names[v - 2]] = summary_double(dev);
      }
      summary["final_const"] = summary_double(c[1].back());
      break;
    }
    case ExperimentKind::kernel: {
      const auto study = kernel_study(chain, config.dt, config.t_max, config.threshold, config.hold,
                                      config.replicates, exec);
      std::ostringstream head;
      head << "t,re_g,im_g";
      for (std::size_t r = 0; r < study.disordered.size(); ++r) head << ",re_g_random_" << r;
      csv << head.str() << '\n';
      for (std::size_t k = 0; k < study.clean.samples.size(); ++k) {
        csv << num(study.clean.time(k)) << ',' << num(study.clean.samples[k].real()) << ','
            << num(study.clean.samples[k].imag());
        for (const auto& d : study.disordered) csv << ',' << num(d.samples[k].real());
        csv << '\n';
      }
      summary["g0"] = summary_double(study.clean.samples.front().real());
      summary["lifetime"] = study.clean.lifetime ? summary_double(*study.clean.lifetime) : "none";
      for (std::size_t r = 0; r < study.disordered.size(); ++r) {
        const auto& lt = study.disordered[r].lifetime;
        summary["lifetime_random_" + std::to_string(r)] = lt ? summary_double(*lt) : "none";
      }
      sampling = "uniform_dt";
      break;
    }
    case ExperimentKind::pq_check: {
      const PulseSpec pulse = config.pulse();
      const double t_max = pulse.total_time();
      const auto check = pq_check(chain, config.control ? std::optional<PulseSpec>(pulse) : std::nullopt,
                                  config.dt, t_max, exec);
      CsvWriter w(csv);
      w.header({"t", "abs_p", "fidelity_direct", "abs_error"});
      const auto stride = static_cast<std::size_t>(config.record_every);
      for (std::size_t k = 0; k < check.times.size(); ++k) {
        if (k % stride != 0 && k + 1 != check.times.size()) continue;
        w.row({num(check.times[k]), num(check.abs_p[k]), num(check.fidelity_direct[k]), num(check.abs_error[k])});
      }
      summary["max_abs_error"] = summary_double(check.max_abs_error);
      sampling = "uniform_dt";
      break;
    }
  }

  outcome.csv_path = config.output_path();
  outcome.sidecar_path = sidecar_path_for(outcome.csv_path);
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();

  std::ostringstream sidecar;
  sidecar << "# ddchain run metadata; usable as --config to regenerate the CSV\n"
          << serialize_config(config) << "meta.version=" << kVersion << '\n'
          << "meta.csv=" << outcome.csv_path.string() << '\n'
          << "meta.sampling=" << sampling << '\n'
          << "meta.wall_seconds=" << summary_double(wall) << '\n';
  for (const auto& [key, value] : summary) sidecar << "summary." << key << '=' << value << '\n';

  write_file(outcome.csv_path, csv.str());
  write_file(outcome.sidecar_path, sidecar.str());

  log << "wrote " << outcome.csv_path.string() << " and " << outcome.sidecar_path.string() << '\n';
  for (const auto& [key, value] : summary) log << key << " = " << value << '\n';
  return outcome;
}

}  // namespace ddchain
