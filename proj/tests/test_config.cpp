#include <doctest.h>

#include <random>

#include "ddchain/config.hpp"

using namespace ddchain;

namespace {

std::string error_key(const ConfigEntries& entries) {
  try {
    parse_config(entries);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("size experiment from a config file") {
    const auto entries = read_config_text(
        "# size sweep\n"
        "kind = size\n"
        "n=130\n"
        "j=1.0\n"
        "psi=8.0   # strength\n"
        "\n"
        "delta=1.2\n"
        "tau=1.3\n"
        "m=128\n");
    const RunConfig c = parse_config(entries);
    CHECK(c.kind == ExperimentKind::size);
    CHECK(c.n == 130);
    CHECK(c.j == 1.0);
    CHECK(c.psi == 8.0);
    CHECK(c.delta == 1.2);
    CHECK(c.tau == 1.3);
    CHECK(c.m == 128);
    CHECK(c.pulse().width == 1.2);
    CHECK(c.chain().n_sites == 130);
  }

  TEST_CASE("errors name the offending key") {
    const ConfigEntries base{{"kind", "trace"}, {"n", "130"}, {"j", "1"}};
    auto with = [&](ConfigEntries extra) {
      ConfigEntries e = base;
      e.insert(e.end(), extra.begin(), extra.end());
      return e;
    };
    CHECK(error_key(with({{"delta", "1.5"}, {"tau", "1.0"}})) == "delta");
    CHECK(error_key(with({{"psii", "8"}})) == "psii");
    CHECK(error_key({{"kind", "size"}, {"j", "1"}}) == "n");
    CHECK(error_key({{"n", "10"}, {"j", "1"}}) == "kind");
    CHECK(error_key(with({{"n", "1"}})) == "n");
    CHECK(error_key(with({{"m", "abc"}})) == "m");
    CHECK(error_key(with({{"gamma", "-0.1"}})) == "gamma");
    CHECK(error_key(with({{"psi", "nan"}})) == "psi");
    CHECK(error_key({{"kind", "bogus"}, {"n", "3"}, {"j", "1"}}) == "kind");
    CHECK(error_key({{"kind", "ratio-psi"}, {"n", "3"}, {"j", "1"}, {"ratio_grid", "0.5:2:4"}}) == "ratio_grid");
    CHECK(error_key({{"kind", "delta-tau"}, {"n", "3"}, {"j", "1"}, {"tau_grid", "1,0.5"}}) == "tau_grid");
    CHECK(error_key({{"kind", "size"}, {"n", "3"}, {"j", "1"}, {"n_values", "2.5,4"}}) == "n_values");
    CHECK(error_key({{"kind", "kernel"}, {"n", "3"}, {"j", "1"}, {"threshold", "1.5"}}) == "threshold");
    CHECK(error_key({{"kind", "pq-check"}, {"n", "3"}, {"j", "1"}, {"eta", "0.1"}}) == "eta");
    CHECK_THROWS_AS(read_config_text("kind size\n"), ConfigError);
  }

  TEST_CASE("later entries override earlier ones") {
    const RunConfig c = parse_config({{"kind", "size"}, {"n", "50"}, {"j", "1"}, {"n", "70"}, {"seed", "9"}});
    CHECK(c.n == 70);
    CHECK(c.seed == 9);
  }

  TEST_CASE("kind-specific defaults") {
    const RunConfig trace = parse_config({{"kind", "trace"}, {"n", "130"}, {"j", "1"}});
    CHECK(trace.gamma == 0.5);
    CHECK(trace.epsilon == 0.5);
    CHECK(trace.eta == 0.1);
    const RunConfig size = parse_config({{"kind", "size"}, {"n", "130"}, {"j", "1"}});
    CHECK(size.gamma == 0.0);
    CHECK(size.m == 128);
    CHECK(parse_config({{"kind", "pq-check"}, {"n", "10"}, {"j", "1"}}).m == 10);
    CHECK(parse_config({{"kind", "trace"}, {"n", "10"}, {"j", "1"}, {"eta", "0"}}).eta == 0.0);
  }

  TEST_CASE("grid specifications") {
    const auto ls = GridSpec::parse("0.02:2.0:100");
    const auto v = ls.values();
    REQUIRE(v.size() == 100);
    CHECK(v.front() == 0.02);
    CHECK(v.back() == 2.0);
    CHECK(GridSpec::parse("1, 2.5,4").values() == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(GridSpec::parse("3:3:1").values() == std::vector<double>{3.0});
    CHECK_THROWS(GridSpec::parse("1:2"));
    CHECK_THROWS(GridSpec::parse("1:2:0"));
    CHECK_THROWS(GridSpec::parse("1,x"));
  }

  TEST_CASE("serialized configs parse back to the same value") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ExperimentKind kinds[] = {ExperimentKind::delta_tau, ExperimentKind::size, ExperimentKind::trace,
                                    ExperimentKind::ratio_psi, ExperimentKind::kernel, ExperimentKind::pq_check};
    for (int trial = 0; trial < 200; ++trial) {
      RunConfig c;
      c.kind = kinds[trial % 6];
      c.n = 2 + static_cast<int>(gen() % 200);
      c.j = 2.0 * u(gen) - 1.0;
      c.tau = 0.1 + 2.0 * u(gen);
      c.delta = c.tau * u(gen);
      c.psi = 20.0 * u(gen);
      c.m = 1 + static_cast<int>(gen() % 300);
      c.gamma = u(gen);
      c.epsilon = u(gen);
      c.eta = c.kind == ExperimentKind::pq_check ? 0.0 : 0.2 * u(gen);
      c.seed = gen();
      c.out = "out_" + std::to_string(trial) + ".csv";
      c.workers = static_cast<int>(gen() % 8);
      c.record_every = 1 + static_cast<int>(gen() % 5);
      c.replicates = 1 + static_cast<int>(gen() % 4);
      c.control = gen() % 2 == 0;
      c.dt = 1e-4 + 1e-2 * u(gen);
      c.t_max = 1.0 + 10.0 * u(gen);
      c.threshold = 0.01 + 0.5 * u(gen);
      c.hold = c.dt + u(gen);
      c.psi_grid = GridSpec{std::nullopt, {u(gen), 1.0 + u(gen), 2.0 + u(gen)}};
      c.tau_grid = GridSpec::range(0.01 + u(gen), 3.0, 1 + static_cast<int>(gen() % 50));

      const std::string text = serialize_config(c);
      const RunConfig back = parse_config(read_config_text(text));
      CHECK(back == c);
      CHECK(serialize_config(back) == text);
    }
  }

  TEST_CASE("sidecar annotations are skipped") {
    RunConfig c = parse_config({{"kind", "kernel"}, {"n", "130"}, {"j", "1"}});
    const std::string sidecar = serialize_config(c) + "meta.version=0.1.0\nsummary.lifetime=1.87\n";
    CHECK(parse_config(read_config_text(sidecar)) == c);
  }
}
