#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ddchain/experiments.hpp"
#include "ddchain/run.hpp"

using namespace ddchain;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ddchain_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig config(std::initializer_list<std::pair<std::string, std::string>> kv) {
  return parse_config(ConfigEntries(kv.begin(), kv.end()));
}

}  // namespace

TEST_SUITE("run") {
  TEST_CASE("csv number format") {
    CHECK(format_csv_double(1.0) == "1.0000000000000000e+00");
    CHECK(format_csv_double(-0.125) == "-1.2500000000000000e-01");
    CHECK(format_csv_double(kInfeasible) == "nan");
    // 17 significant digits round-trip a double exactly
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_csv_double(x)) == x);
  }

  TEST_CASE("kernel run writes g(t) and records the lifetime") {
    const auto dir = scratch_dir("kernel");
    const auto cfg = config({{"kind", "kernel"}, {"n", "130"}, {"j", "1.0"}, {"t_max", "6"},
                             {"out", (dir / "kernel.csv").string()}});
    std::ostringstream log;
    const auto outcome = run(cfg, log);

    const std::string csv = slurp(outcome.csv_path);
    CHECK(csv.rfind("t,re_g,im_g\n", 0) == 0);
    CHECK(csv.back() == '\n');
    const std::regex row(R"(^-?\d\.\d{16}e[+-]\d{2},-?\d\.\d{16}e[+-]\d{2},-?\d\.\d{16}e[+-]\d{2}$)");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      CHECK(std::regex_match(line, row));
      ++rows;
    }
    CHECK(rows == 6001);

    const double lifetime = std::stod(outcome.summary.at("lifetime"));
    CHECK(lifetime == doctest::Approx(1.7).epsilon(0.2 / 1.7));
    CHECK(outcome.summary.at("g0") == "1");
    const std::string sidecar = slurp(outcome.sidecar_path);
    CHECK(sidecar.find("summary.lifetime=") != std::string::npos);
    CHECK(sidecar.find("meta.version=0.1.0") != std::string::npos);
    CHECK(log.str().find("lifetime") != std::string::npos);
  }

  TEST_CASE("pq-check run reports the max error") {
    const auto dir = scratch_dir("pq");
    const auto cfg = config({{"kind", "pq-check"}, {"n", "10"}, {"j", "1"}, {"m", "2"}, {"record_every", "100"},
                             {"out", (dir / "pq.csv").string()}});
    std::ostringstream log;
    const auto outcome = run(cfg, log);
    const std::string csv = slurp(outcome.csv_path);
    CHECK(csv.rfind("t,abs_p,fidelity_direct,abs_error\n", 0) == 0);
    CHECK(std::stod(outcome.summary.at("max_abs_error")) <= 1e-3);
    CHECK(log.str().find("max_abs_error") != std::string::npos);
  }

  TEST_CASE("identical configs give byte-identical CSV for any worker count, and sidecars regenerate it") {
    const auto dir = scratch_dir("determinism");
    const std::string base = (dir / "trace").string();
    std::vector<std::string> outputs;
    for (int workers : {1, 2, 4}) {
      const auto cfg = config({{"kind", "trace"}, {"n", "24"}, {"j", "1"}, {"m", "12"}, {"seed", "77"},
                               {"replicates", "2"}, {"workers", std::to_string(workers)},
                               {"out", base + std::to_string(workers) + ".csv"}});
      std::ostringstream log;
      outputs.push_back(slurp(run(cfg, log).csv_path));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);

    // rerun from the sidecar alone
    const auto entries = read_config_file(base + "1.csv.meta");
    RunConfig again = parse_config(entries);
    again.out = base + "_rerun.csv";
    std::ostringstream log;
    CHECK(slurp(run(again, log).csv_path) == outputs[0]);
  }

  TEST_CASE("sweep output marks infeasible cells as nan") {
    const auto dir = scratch_dir("sweep");
    const auto cfg = config({{"kind", "delta-tau"}, {"n", "12"}, {"j", "1"}, {"m", "4"},
                             {"delta_grid", "0.5,1.5"}, {"tau_grid", "1.0,2.0"},
                             {"out", (dir / "dt.csv").string()}});
    std::ostringstream log;
    const auto outcome = run(cfg, log);
    const std::string csv = slurp(outcome.csv_path);
    CHECK(csv.rfind("delta,tau,fidelity\n", 0) == 0);
    CHECK(csv.find("1.5000000000000000e+00,1.0000000000000000e+00,nan\n") != std::string::npos);
    CHECK(outcome.summary.at("infeasible_cells") == "1");
  }

  TEST_CASE("unwritable output is an error") {
    const auto cfg = config({{"kind", "size"}, {"n", "4"}, {"j", "1"}, {"m", "2"}, {"n_values", "3,4"},
                             {"out", "/nonexistent_dir_ddchain/x.csv"}});
    std::ostringstream log;
    CHECK_THROWS_AS(run(cfg, log), std::runtime_error);
  }
}
