#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "ddchain/config.hpp"

namespace ddchain {

// 17 significant digits in scientific notation; NaN cells print as "nan".
std::string format_csv_double(double x);

struct RunOutcome {
  std::filesystem::path csv_path;
  std::filesystem::path sidecar_path;
  std::map<std::string, std::string> summary;  // keys without the "summary." prefix
};

std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path);

// Runs the experiment, writes the CSV and its sidecar, and prints the
// summary lines to `log`. All file I/O happens on the calling thread.
RunOutcome run(const RunConfig& config, std::ostream& log);

}  // namespace ddchain
