#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ddchain/chain_model.hpp"

namespace ddchain {

// Eigenpairs of a real symmetric tridiagonal matrix. Eigenvalues ascending;
// eigenvectors stored column-major so each eigenvector is contiguous.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;

  std::size_t size() const { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t k) const {
    return {eigenvectors.data() + k * size(), size()};
  }
  double component(std::size_t site, std::size_t k) const { return eigenvectors[k * size() + site]; }
};

inline constexpr int kMaxQlIterations = 50;

// Implicit-shift QL (tql2). Each eigenvector's first component above 1e-12 in
// magnitude is made positive so output is reproducible.
// Throws NumericalFailure if an eigenvalue needs more than kMaxQlIterations.
SpectralDecomposition decompose(const TridiagonalHamiltonian& h);

// Same, with an explicit per-eigenvalue iteration cap.
SpectralDecomposition decompose(const TridiagonalHamiltonian& h, int max_iterations);

}  // namespace ddchain
