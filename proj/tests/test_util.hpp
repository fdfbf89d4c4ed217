#pragma once

#include <cmath>
#include <random>

#include "oqs/qmath.hpp"

namespace oqs::testing {

// Random mixed state from a Ginibre matrix: G G^dag / tr(G G^dag).
inline ComplexMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  }
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

inline DensityMatrix random_qubit(std::mt19937_64& rng) {
  return DensityMatrix::qubit(random_density(2, rng));
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  }
  return 0.5 * (g + g.adjoint());
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Brute-force partial trace over the last factor of a (dA*dB) matrix,
// written independently of the library's stride arithmetic.
inline ComplexMatrix trace_out_last(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int b = 0; b < db; ++b) out(i, j) += m(i * db + b, j * db + b);
  return out;
}

}  // namespace oqs::testing
