#include "rotwave/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rotwave/errors.hpp"

namespace rotwave::linalg {

void tridiagonalize(SymmetricMatrix& m, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = m.n;
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 0) return;
  std::vector<double> p(n);

  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double* row_i = &m.a[i * n];
    if (l == 0) {
      e[i] = row_i[0];
      continue;
    }
    double scale = 0.0;
    for (std::size_t k = 0; k <= l; ++k) scale += std::abs(row_i[k]);
    if (scale == 0.0) {
      e[i] = row_i[l];
      continue;
    }
    double h = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      row_i[k] /= scale;
      h += row_i[k] * row_i[k];
    }
    const double f = row_i[l];
    const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    e[i] = scale * g;
    h -= f * g;
    row_i[l] = f - g;
    // u = row_i[0..l]; p = A u / h using the lower triangle only.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(l + 1), 0.0);
    for (std::size_t r = 0; r <= l; ++r) {
      const double* row_r = &m.a[r * n];
      const double ur = row_i[r];
      double acc = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        acc += row_r[k] * row_i[k];
        p[k] += row_r[k] * ur;
      }
      p[r] += acc + row_r[r] * ur;
    }
    double fsum = 0.0;
    for (std::size_t j = 0; j <= l; ++j) {
      p[j] /= h;
      fsum += p[j] * row_i[j];
    }
    const double hh = fsum / (h + h);
    for (std::size_t j = 0; j <= l; ++j) p[j] -= hh * row_i[j];
    // A <- A - u q^T - q u^T on the lower triangle.
    for (std::size_t j = 0; j <= l; ++j) {
      double* row_j = &m.a[j * n];
      const double fj = row_i[j];
      const double gj = p[j];
      for (std::size_t k = 0; k <= j; ++k) row_j[k] -= fj * p[k] + gj * row_i[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = m.a[i * n + i];
  e[0] = 0.0;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e,
                                            int max_iterations) {
  const std::size_t n = d.size();
  if (n == 0) return d;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m == l) break;
      if (++iter > max_iterations)
        throw NumericalError("tridiagonal QL: no convergence for eigenvalue " + std::to_string(l));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (true);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> symmetric_eigenvalues(SymmetricMatrix m) {
  std::vector<double> d, e;
  tridiagonalize(m, d, e);
  return tridiagonal_eigenvalues(std::move(d), std::move(e));
}

}  // namespace rotwave::linalg
