// ddchain: command-line front end for the decoupling experiments.
//
//   ddchain size --n 130 --j 1 --out fig2.csv
//   ddchain kernel --config kernel.cfg --workers 4
//
// Values from --config are read first; explicit flags override them.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "ddchain/config.hpp"
#include "ddchain/run.hpp"

namespace {

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flags;
};

std::string dashed(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical-decoupling simulator for the one-magnon XY spin chain"};
  app.require_subcommand(1);

  const char* kinds[] = {"delta-tau", "size", "trace", "ratio-psi", "kernel", "pq-check"};
  const char* blurbs[] = {
      "final fidelity over a (delta, tau) grid",
      "final fidelity vs chain length, free and controlled",
      "fidelity time traces: free, clean, broadening, static random, per-period noise",
      "final fidelity over a (tau/delta, psi) grid",
      "environment correlation kernel g(t) and its lifetime",
      "memory-equation P(t) against direct propagation",
  };

  std::map<std::string, Subcommand> subs;
  for (std::size_t i = 0; i < std::size(kinds); ++i) {
    Subcommand& sub = subs[kinds[i]];
    sub.app = app.add_subcommand(kinds[i], blurbs[i]);
    sub.app->add_option("--config", sub.config_path, "key=value config file (a sidecar also works)");
    for (const auto& key : ddchain::config_keys()) {
      if (key == "kind") continue;
      std::string names = "--" + key;
      if (dashed(key) != key) names += ",--" + dashed(key);
      sub.app->add_option(names, sub.flags[key], "overrides config key '" + key + "'");
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [kind, sub] : subs) {
    if (!sub.app->parsed()) continue;
    try {
      ddchain::ConfigEntries entries;
      if (!sub.config_path.empty()) entries = ddchain::read_config_file(sub.config_path);
      entries.emplace_back("kind", kind);
      for (const auto& [key, value] : sub.flags) {
        if (sub.app->count("--" + key) > 0) entries.emplace_back(key, value);
      }
      const ddchain::RunConfig config = ddchain::parse_config(entries);
      ddchain::run(config, std::cout);
    } catch (const ddchain::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
