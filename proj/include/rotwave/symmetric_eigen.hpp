#pragma once

#include <cstddef>
#include <vector>

namespace rotwave::linalg {

/// Dense symmetric matrix, row-major, only the lower triangle is read.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit SymmetricMatrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Householder reduction to tridiagonal form. Returns diagonal d and
/// sub-diagonal e (e[0] = 0, e[i] couples rows i-1 and i). Destroys m.
void tridiagonalize(SymmetricMatrix& m, std::vector<double>& d, std::vector<double>& e);

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
/// Eigenvalues are returned in ascending order. Throws NumericalError when an
/// eigenvalue needs more than max_iterations sweeps.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e,
                                            int max_iterations = 50);

/// All eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(SymmetricMatrix m);

}  // namespace rotwave::linalg
