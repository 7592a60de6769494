// Test-only oracles, deliberately independent of the library's solver paths:
// Kronecker-form linear solves via plain Gaussian elimination, eigenvalues by
// characteristic-polynomial root finding, derivatives by finite differences,
// and scalar minimization by grid search with golden-section refinement.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "sparsegain/matrix.hpp"

namespace oracles {

using sparsegain::Matrix;

// --- deterministic random helpers -----------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  double normal() {
    // Box-Muller on two fresh uniforms.
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Matrix matrix(int rows, int cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = scale * normal();
    return m;
  }

  Matrix spd(int n, double shift = 0.5) {
    const Matrix g = matrix(n, n);
    Matrix s = sparsegain::matmul_nt(g, g);
    s *= 1.0 / n;
    for (int i = 0; i < n; ++i) s(i, i) += shift;
    return s;
  }

  Matrix psd(int n) {
    const Matrix g = matrix(n, std::max(1, n / 2 + 1));
    Matrix s = sparsegain::matmul_nt(g, g);
    s *= 1.0 / n;
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

// --- dense Gaussian elimination (oracle-local, no pivot-free shortcuts) ----

inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, int n) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) throw std::runtime_error("oracle gauss: singular");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = k + 1; j < n; ++j) b[k] -= a[k * n + j] * b[j];
    b[k] /= a[k * n + k];
  }
  return b;
}

// --- Kronecker-form matrix-equation solves ---------------------------------

// Solve Aᵀ P + P A = -Rhs by vectorizing P row-major and eliminating densely.
inline Matrix kron_lyapunov(const Matrix& a, const Matrix& rhs) {
  const int n = a.rows();
  const int nn = n * n;
  std::vector<double> big(static_cast<std::size_t>(nn) * nn, 0.0);
  std::vector<double> vec(nn, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      vec[row] = -rhs(i, j);
      for (int k = 0; k < n; ++k) {
        big[static_cast<std::size_t>(row) * nn + k * n + j] += a(k, i);  // (AᵀP)_ij
        big[static_cast<std::size_t>(row) * nn + i * n + k] += a(k, j);  // (PA)_ij
      }
    }
  const std::vector<double> sol = gauss_solve(std::move(big), std::move(vec), nn);
  Matrix p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = sol[i * n + j];
  return p;
}

// Solve A L + L Aᵀ = -Rhs.
inline Matrix kron_dual_lyapunov(const Matrix& a, const Matrix& rhs) {
  return kron_lyapunov(a.transpose(), rhs);
}

// Solve 2 R F L + rho F = Rhs (F is m x n, vectorized row-major).
inline Matrix kron_spd_sylvester(const Matrix& r, const Matrix& l, double rho,
                                 const Matrix& rhs) {
  const int m = r.rows(), n = l.rows();
  const int mn = m * n;
  std::vector<double> big(static_cast<std::size_t>(mn) * mn, 0.0);
  std::vector<double> vec(mn, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      vec[row] = rhs(i, j);
      big[static_cast<std::size_t>(row) * mn + row] += rho;
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < n; ++q)
          big[static_cast<std::size_t>(row) * mn + p * n + q] += 2.0 * r(i, p) * l(q, j);
    }
  const std::vector<double> sol = gauss_solve(std::move(big), std::move(vec), mn);
  Matrix f(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = sol[i * n + j];
  return f;
}

// --- eigenvalues via characteristic polynomial ------------------------------

// Coefficients of det(tI - A) by the Faddeev-LeVerrier recursion:
// returns c with p(t) = t^n + c[0] t^{n-1} + ... + c[n-1].
inline std::vector<double> char_poly(const Matrix& a) {
  const int n = a.rows();
  std::vector<double> c(n, 0.0);
  Matrix mk = Matrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    mk = a * mk;
    double tr = mk.trace();
    const double ck = -tr / k;
    c[k - 1] = ck;
    for (int i = 0; i < n; ++i) mk(i, i) += ck;
  }
  return c;
}

// Durand-Kerner simultaneous root iteration on a monic polynomial.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    acc *= seed;
    z[i] = acc;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(1.0, 0.0);
    for (int k = 0; k < n; ++k) v = v * x + coeffs[k];
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      const std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  return z;
}

inline double abscissa_by_roots(const Matrix& a) {
  double worst = -1e300;
  for (const auto& r : poly_roots(char_poly(a))) worst = std::max(worst, r.real());
  return worst;
}

// --- scalar minimization -----------------------------------------------------

inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-10, int max_iter = 300) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Dense grid scan over [lo, hi] followed by golden-section refinement around
// the best cell. Returns the minimizing argument.
inline double grid_refine_min(const std::function<double(double)>& f, double lo, double hi,
                              int grid_points = 2001) {
  double best_x = lo, best_f = f(lo);
  const double h = (hi - lo) / (grid_points - 1);
  for (int k = 1; k < grid_points; ++k) {
    const double x = lo + k * h;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  const double refined = golden_section(f, a, b);
  return (f(refined) < best_f) ? refined : best_x;
}

}  // namespace oracles
