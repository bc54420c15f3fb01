#include "ddchain/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ddchain/errors.hpp"

namespace ddchain {

namespace {

// d: diagonal (overwritten by eigenvalues), e: subdiagonal with e[n-1] = 0,
// z: column-major n x n, starts as identity and accumulates the rotations.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int max_iterations) {
  const std::size_t n = d.size();
  auto col = [&](std::size_t k) { return z.data() + k * n; };

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iterations) {
          throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " + std::to_string(l), l);
        }

        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          double* zi = col(i);
          double* zi1 = col(i + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double t = zi1[k];
            zi1[k] = s * zi[k] + c * t;
            zi[k] = c * zi[k] - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SpectralDecomposition decompose(const TridiagonalHamiltonian& h) { return decompose(h, kMaxQlIterations); }

SpectralDecomposition decompose(const TridiagonalHamiltonian& h, int max_iterations) {
  h.validate();
  const std::size_t n = h.size();

  std::vector<double> d = h.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(h.off_diagonal.begin(), h.off_diagonal.end(), e.begin());
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  tql2(d, e, z, max_iterations);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = d[src];
    const double* from = z.data() + src * n;
    double* to = out.eigenvectors.data() + k * n;

    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(from[i]) > 1e-12) {
        sign = from[i] < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) to[i] = sign * from[i];
  }
  return out;
}

}  // namespace ddchain
