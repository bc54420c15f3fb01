#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ddchain/eigensolver.hpp"
#include "ddchain/errors.hpp"
#include "oracles.hpp"

using namespace ddchain;

namespace {

TridiagonalHamiltonian uniform_chain(std::size_t n, double j) {
  return {std::vector<double>(n, 0.0), std::vector<double>(n - 1, j)};
}

TridiagonalHamiltonian random_tridiagonal(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  TridiagonalHamiltonian h;
  for (std::size_t i = 0; i < n; ++i) h.diagonal.push_back(u(gen));
  for (std::size_t i = 0; i + 1 < n; ++i) h.off_diagonal.push_back(u(gen));
  return h;
}

double orthonormality_error(const SpectralDecomposition& s) {
  double worst = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) dot += s.component(i, a) * s.component(i, b);
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double worst_scaled_residual(const TridiagonalHamiltonian& h, const SpectralDecomposition& s) {
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::vector<oracle::Complex> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s.component(i, k);
    const auto hv = oracle::apply_h(h, v);
    double r2 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) r2 += std::norm(hv[i] - s.eigenvalues[k] * v[i]);
    worst = std::max(worst, std::sqrt(r2) / (1.0 + std::abs(s.eigenvalues[k])));
  }
  return worst;
}

}  // namespace

TEST_SUITE("eigensolver") {
  TEST_CASE("2x2 analytic decomposition") {
    const auto s = decompose({{0.0, 0.0}, {1.0}});
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(s.component(0, 0) == doctest::Approx(r));
    CHECK(s.component(1, 0) == doctest::Approx(-r));
    CHECK(s.component(0, 1) == doctest::Approx(r));
    CHECK(s.component(1, 1) == doctest::Approx(r));
  }

  TEST_CASE("3x3 chain: roots of lambda^3 - 2 lambda") {
    const auto s = decompose(uniform_chain(3, 1.0));
    const double expected[] = {-std::sqrt(2.0), 0.0, std::sqrt(2.0)};
    for (int k = 0; k < 3; ++k) {
      const double l = s.eigenvalues[k];
      CHECK(l == doctest::Approx(expected[k]).epsilon(1e-14));
      CHECK(std::abs(l * l * l - 2.0 * l) < 1e-13);
    }
  }

  TEST_CASE("open chain matches the closed-form spectrum 2J cos(k pi/(M+1))") {
    for (std::size_t dim : {9u, 10u, 129u, 130u, 200u}) {
      for (double j : {1.0, -0.7}) {
        const auto s = decompose(uniform_chain(dim, j));
        std::vector<double> exact;
        for (std::size_t k = 1; k <= dim; ++k) exact.push_back(2.0 * j * std::cos(k * std::numbers::pi / (dim + 1)));
        std::sort(exact.begin(), exact.end());
        double worst = 0.0;
        for (std::size_t k = 0; k < dim; ++k) worst = std::max(worst, std::abs(s.eigenvalues[k] - exact[k]));
        CHECK(worst <= 1e-10);
      }
    }
  }

  TEST_CASE("random matrices: orthonormality, residual, reconstruction, trace, Sturm oracle") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + gen() % 200;
      const auto h = random_tridiagonal(gen, n);
      const auto s = decompose(h);

      CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
      CHECK(orthonormality_error(s) <= 1e-10);
      CHECK(worst_scaled_residual(h, s) <= 1e-10);

      double trace = 0.0, sum = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trace += h.diagonal[i];
        sum += s.eigenvalues[i];
        scale += std::abs(h.diagonal[i]);
      }
      CHECK(std::abs(trace - sum) <= 1e-9 * std::max(1.0, scale));

      // V diag(E) V^T reproduces H entrywise
      double worst = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < std::min(n, a + 3); ++b) {
          double x = 0.0;
          for (std::size_t k = 0; k < n; ++k) x += s.component(a, k) * s.eigenvalues[k] * s.component(b, k);
          const double ref = a == b ? h.diagonal[a] : (b == a + 1 ? h.off_diagonal[a] : 0.0);
          worst = std::max(worst, std::abs(x - ref));
        }
      }
      CHECK(worst <= 1e-9);

      const auto bisect = oracle::bisection_eigenvalues(h);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(bisect[k] - s.eigenvalues[k]) <= 1e-10);
    }
  }

  TEST_CASE("sign convention and determinism") {
    std::mt19937_64 gen(5);
    const auto h = random_tridiagonal(gen, 60);
    const auto a = decompose(h);
    const auto b = decompose(h);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors == b.eigenvectors);
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.component(i, k)) > 1e-12) {
          CHECK(a.component(i, k) > 0.0);
          break;
        }
      }
    }
  }

  TEST_CASE("iteration cap raises NumericalFailure with the eigenvalue index") {
    const auto h = uniform_chain(8, 1.0);
    try {
      decompose(h, 1);
      FAIL("expected NumericalFailure");
    } catch (const NumericalFailure& e) {
      CHECK(e.index() < 8);
      CHECK(std::string(e.what()).find(std::to_string(e.index())) != std::string::npos);
    }
    CHECK_NOTHROW(decompose(h));
  }

  TEST_CASE("degenerate and trivial inputs") {
    const auto one = decompose({{3.5}, {}});
    CHECK(one.eigenvalues == std::vector<double>{3.5});
    CHECK(one.eigenvectors == std::vector<double>{1.0});

    // decoupled blocks with repeated eigenvalues
    const auto s = decompose({{1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}});
    for (double e : s.eigenvalues) CHECK(e == 1.0);
    CHECK(orthonormality_error(s) <= 1e-15);

    CHECK_THROWS_AS(decompose({{0.0, 0.0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(decompose({{0.0, NAN}, {1.0}}), std::invalid_argument);
  }
}
