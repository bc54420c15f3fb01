#include <doctest.h>

#include <atomic>
#include <numeric>
#include <string>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "ddchain/parallel.hpp"

using namespace ddchain;

TEST_SUITE("parallel") {
  TEST_CASE("spectral sum: OpenMP output is bit-identical to the serial reference") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> w(97), e(97);
    for (auto& x : w) x = std::abs(u(gen));
    for (auto& x : e) x = u(gen);

    std::vector<std::complex<double>> ref(4001);
    kernels::spectral_sum_serial(w, e, 0.7, 2.5e-3, ref);
    for (int workers : {1, 2, 3, 8}) {
      std::vector<std::complex<double>> out(ref.size());
      kernels::spectral_sum_omp(w, e, 0.7, 2.5e-3, out, workers);
      CHECK(std::memcmp(out.data(), ref.data(), ref.size() * sizeof(ref[0])) == 0);
    }
    CHECK(ref[0] == std::complex<double>{0.7 * std::accumulate(w.begin(), w.end(), 0.0), 0.0});
  }

  TEST_CASE("for_each_index visits every index once") {
    for (int workers : {1, 4}) {
      std::vector<std::atomic<int>> hits(1000);
      kernels::for_each_index_omp(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
    std::vector<int> order;
    kernels::for_each_index_serial(5, [&](std::size_t i) { order.push_back(static_cast<int>(i)); });
    CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
  }

  TEST_CASE("for_each_index rethrows the lowest failing index") {
    auto body = [](std::size_t i) {
      if (i == 37 || i == 80) throw std::runtime_error("cell " + std::to_string(i));
    };
    for (int workers : {1, 3}) {
      try {
        kernels::for_each_index_omp(100, workers, body);
        FAIL("expected an exception");
      } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "cell 37");
      }
    }
    CHECK_THROWS_WITH(kernels::for_each_index_serial(100, body), "cell 37");
  }

  TEST_CASE("execution resolves worker count") {
    CHECK(Execution{Backend::openmp, 3}.resolved_workers() == 3);
    CHECK(Execution{}.resolved_workers() >= 1);
  }
}
