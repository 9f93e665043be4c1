#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rotwave/constants.hpp"
#include "rotwave/errors.hpp"
#include "rotwave/symmetric_eigen.hpp"

using namespace rotwave;
using rotwave::linalg::SymmetricMatrix;

TEST_CASE("second-difference matrix has cosine eigenvalues") {
  const std::size_t n = 50;
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 2.0;
    if (i > 0) m(i, i - 1) = m(i - 1, i) = -1.0;
  }
  const auto ev = linalg::symmetric_eigenvalues(m);
  REQUIRE(ev.size() == n);
  for (std::size_t k = 0; k < n; ++k) {
    const double expect = 2.0 - 2.0 * std::cos((k + 1) * kPi / (n + 1));
    CHECK(ev[k] == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("random symmetric matrix against Jacobi rotations") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (std::size_t n : {1u, 2u, 7u, 40u}) {
    SymmetricMatrix m(n);
    std::vector<double> full(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = g(rng);
        m(i, j) = m(j, i) = v;
        full[i * n + j] = full[j * n + i] = v;
      }
    const auto ev = linalg::symmetric_eigenvalues(m);
    const auto ref = oracle::jacobi_eigenvalues(full, n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(ev[k] - ref[k]) < 1e-10);
  }
}

TEST_CASE("property: trace and Frobenius norm are preserved") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const std::size_t n = 200;
  SymmetricMatrix m(n);
  double trace = 0.0, frob = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = g(rng);
      m(i, j) = m(j, i) = v;
      frob += (i == j ? 1.0 : 2.0) * v * v;
      if (i == j) trace += v;
    }
  const auto ev = linalg::symmetric_eigenvalues(m);
  double s1 = 0.0, s2 = 0.0;
  for (double v : ev) {
    s1 += v;
    s2 += v * v;
  }
  CHECK(s1 == doctest::Approx(trace).epsilon(1e-10).scale(1.0));
  CHECK(s2 == doctest::Approx(frob).epsilon(1e-10));
  for (std::size_t k = 1; k < n; ++k) CHECK(ev[k] >= ev[k - 1]);
}

TEST_CASE("iteration cap raises a numerical error") {
  std::vector<double> d{1.0, 2.0, 3.0}, e{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(linalg::tridiagonal_eigenvalues(d, e, 0), NumericalError);
  CHECK_NOTHROW(linalg::tridiagonal_eigenvalues(d, e));
}
