#include "sparsegain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsegain/errors.hpp"

namespace sparsegain {

namespace {

constexpr double kSchurTol = 1e-12;  // relative subdiagonal deflation threshold

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionError(std::string(who) + ": matrix must be square and nonempty");
}

// ---------------------------------------------------------------------------
// Hessenberg reduction by Householder reflectors, accumulating U.
// ---------------------------------------------------------------------------
void hessenberg(Matrix& h, Matrix* u) {
  const int n = h.rows();
  std::vector<double> v(n, 0.0);
  for (int k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (int i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(h(i, k)));
    if (scale == 0.0) continue;
    double ssq = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = h(i, k) / scale;
      ssq += v[i] * v[i];
    }
    double alpha = std::sqrt(ssq);
    if (v[k + 1] > 0.0) alpha = -alpha;
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // H <- P H  (rows k+1..n-1, all columns from k)
    for (int j = k; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i] * h(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
    }
    // H <- H P  (columns k+1..n-1, all rows)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += v[j] * h(i, j);
      s *= beta;
      for (int j = k + 1; j < n; ++j) h(i, j) -= v[j] * s;
    }
    if (u) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = k + 1; j < n; ++j) s += v[j] * (*u)(i, j);
        s *= beta;
        for (int j = k + 1; j < n; ++j) (*u)(i, j) -= v[j] * s;
      }
    }
    h(k + 1, k) = alpha * scale;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Reflector3 {
  double v0 = 1.0, v1 = 0.0, v2 = 0.0, beta = 0.0;
};

Reflector3 make_reflector3(double x, double y, double z) {
  const double scale = std::max({std::abs(x), std::abs(y), std::abs(z)});
  if (scale == 0.0) return {};
  x /= scale;
  y /= scale;
  z /= scale;
  double alpha = std::sqrt(x * x + y * y + z * z);
  if (x > 0.0) alpha = -alpha;
  Reflector3 r;
  r.v0 = x - alpha;
  r.v1 = y;
  r.v2 = z;
  const double vnorm2 = r.v0 * r.v0 + r.v1 * r.v1 + r.v2 * r.v2;
  if (vnorm2 == 0.0) return {};
  r.beta = 2.0 / vnorm2;
  return r;
}

// Apply P = I - beta v vᵀ to rows (i0, i0+1, i0+2) over columns [jlo, jhi].
void reflect_rows3(Matrix& h, const Reflector3& r, int i0, int jlo, int jhi) {
  if (r.beta == 0.0) return;
  for (int j = jlo; j <= jhi; ++j) {
    double s = r.v0 * h(i0, j) + r.v1 * h(i0 + 1, j) + r.v2 * h(i0 + 2, j);
    s *= r.beta;
    h(i0, j) -= r.v0 * s;
    h(i0 + 1, j) -= r.v1 * s;
    h(i0 + 2, j) -= r.v2 * s;
  }
}

// Apply P to columns (j0, j0+1, j0+2) over rows [ilo, ihi].
void reflect_cols3(Matrix& h, const Reflector3& r, int j0, int ilo, int ihi) {
  if (r.beta == 0.0) return;
  for (int i = ilo; i <= ihi; ++i) {
    double s = r.v0 * h(i, j0) + r.v1 * h(i, j0 + 1) + r.v2 * h(i, j0 + 2);
    s *= r.beta;
    h(i, j0) -= r.v0 * s;
    h(i, j0 + 1) -= r.v1 * s;
    h(i, j0 + 2) -= r.v2 * s;
  }
}

// Plane rotation G = [[c, s], [-s, c]] chosen so that G [x y]ᵀ = [r 0]ᵀ.
struct Rotation {
  double c = 1.0, s = 0.0;
};

Rotation make_rotation(double x, double y) {
  const double r = std::hypot(x, y);
  if (r == 0.0) return {};
  return {x / r, y / r};
}

void rotate_rows(Matrix& h, const Rotation& g, int i0, int jlo, int jhi) {
  for (int j = jlo; j <= jhi; ++j) {
    const double a = h(i0, j), b = h(i0 + 1, j);
    h(i0, j) = g.c * a + g.s * b;
    h(i0 + 1, j) = -g.s * a + g.c * b;
  }
}

void rotate_cols(Matrix& h, const Rotation& g, int j0, int ilo, int ihi) {
  for (int i = ilo; i <= ihi; ++i) {
    const double a = h(i, j0), b = h(i, j0 + 1);
    h(i, j0) = g.c * a + g.s * b;
    h(i, j0 + 1) = -g.s * a + g.c * b;
  }
}

// Split a 2x2 diagonal block with real eigenvalues into two 1x1 blocks.
// Blocks with complex pair eigenvalues are left untouched.
void standardize_block(Matrix& h, Matrix* u, int i) {
  const int n = h.rows();
  const double a = h(i, i), b = h(i, i + 1), c = h(i + 1, i), d = h(i + 1, i + 1);
  if (c == 0.0) return;
  const double half = 0.5 * (a - d);
  const double disc = half * half + b * c;
  if (disc < 0.0) return;
  const double mu = 0.5 * (a + d);
  const double sq = std::sqrt(disc);
  const double lambda = (half >= 0.0) ? mu + sq : mu - sq;
  // Eigenvector from the second row: (lambda - d, c).
  const Rotation g = make_rotation(lambda - d, c);
  rotate_rows(h, g, i, std::max(0, i - 1), n - 1);
  rotate_cols(h, g, i, 0, std::min(n - 1, i + 1));
  if (u) rotate_cols(*u, g, i, 0, n - 1);
  h(i + 1, i) = 0.0;
}

// Francis implicit double-shift QR iteration on an upper Hessenberg matrix.
void francis_qr(Matrix& h, Matrix* u) {
  const int n = h.rows();
  if (n <= 1) return;
  const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
  const long max_total = 100L * n;
  long total = 0;
  int ihi = n - 1;
  int iters_since = 0;

  while (ihi > 0) {
    // Deflation scan: l is the start of the active unreduced block [l, ihi].
    int l = ihi;
    while (l > 0) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = hnorm;
      if (std::abs(h(l, l - 1)) <= kSchurTol * s) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == ihi) {  // 1x1 converged
      ihi -= 1;
      iters_since = 0;
      continue;
    }
    if (l == ihi - 1) {  // 2x2 converged
      ihi -= 2;
      iters_since = 0;
      continue;
    }
    if (++total > max_total) throw NumericalError("real_schur: QR iteration did not converge");
    ++iters_since;

    // Double shift from the trailing 2x2 block, replaced by an ad hoc
    // exceptional shift every 10 stalled iterations.
    double s_tr, s_det;
    if (iters_since % 10 == 0) {
      const double ex = std::abs(h(ihi, ihi - 1)) + std::abs(h(ihi - 1, ihi - 2));
      const double w = h(ihi, ihi) + 0.75 * ex;
      s_tr = 2.0 * w;
      s_det = w * w + 0.4375 * ex * ex;
    } else {
      s_tr = h(ihi - 1, ihi - 1) + h(ihi, ihi);
      s_det = h(ihi - 1, ihi - 1) * h(ihi, ihi) - h(ihi - 1, ihi) * h(ihi, ihi - 1);
    }

    // First column of (H - aI)(H - bI) restricted to the window.
    double x = h(l, l) * h(l, l) + h(l, l + 1) * h(l + 1, l) - s_tr * h(l, l) + s_det;
    double y = h(l + 1, l) * (h(l, l) + h(l + 1, l + 1) - s_tr);
    double z = h(l + 1, l) * h(l + 2, l + 1);

    for (int k = l; k <= ihi - 2; ++k) {
      const Reflector3 r = make_reflector3(x, y, z);
      const int jlo = (k == l) ? l : k - 1;
      reflect_rows3(h, r, k, jlo, n - 1);
      reflect_cols3(h, r, k, 0, std::min(k + 3, ihi));
      if (u) reflect_cols3(*u, r, k, 0, n - 1);
      x = h(k + 1, k);
      y = h(k + 2, k);
      if (k < ihi - 2) z = h(k + 3, k);
    }
    const Rotation g = make_rotation(x, y);
    rotate_rows(h, g, ihi - 1, ihi - 2, n - 1);
    rotate_cols(h, g, ihi - 1, 0, ihi);
    if (u) rotate_cols(*u, g, ihi - 1, 0, n - 1);

    // Scrub roundoff leakage below the first subdiagonal of the window.
    for (int i = l + 2; i <= ihi; ++i)
      for (int j = l; j <= i - 2; ++j) h(i, j) = 0.0;
  }

  for (int i = 0; i + 1 < n; ++i)
    if (h(i + 1, i) != 0.0) standardize_block(h, u, i);
}

// Block starts of the quasi-triangular factor; each block is 1x1 or 2x2.
std::vector<int> diagonal_blocks(const Matrix& t) {
  std::vector<int> starts;
  const int n = t.rows();
  int i = 0;
  while (i < n) {
    starts.push_back(i);
    i += (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
  }
  starts.push_back(n);  // sentinel
  return starts;
}

// Gaussian elimination with partial pivoting on a tiny dense system.
void gauss_solve_small(std::vector<double>& m, std::vector<double>& rhs, int n, const char* who) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    if (m[piv * n + k] == 0.0) throw NumericalError(std::string(who) + ": singular block system");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      std::swap(rhs[k], rhs[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / m[k * n + k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = rhs[k];
    for (int j = k + 1; j < n; ++j) s -= m[k * n + j] * rhs[j];
    rhs[k] = s / m[k * n + k];
  }
}

// Solve T11ᵀ X + X T22 = C for the small blocks of the Bartels–Stewart sweep
// (sizes p, q <= 2), via the Kronecker form.
void solve_block_tt(const Matrix& t, int bi, int p, int bj, int q, const double* c, double* x,
                    bool transpose_left, bool transpose_right) {
  const int dim = p * q;
  std::vector<double> m(dim * dim, 0.0);
  std::vector<double> rhs(c, c + dim);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      const int row = a * q + b;
      for (int cidx = 0; cidx < p; ++cidx) {
        const double coef = transpose_left ? t(bi + cidx, bi + a) : t(bi + a, bi + cidx);
        m[row * dim + cidx * q + b] += coef;
      }
      for (int cidx = 0; cidx < q; ++cidx) {
        const double coef = transpose_right ? t(bj + b, bj + cidx) : t(bj + cidx, bj + b);
        m[row * dim + a * q + cidx] += coef;
      }
    }
  gauss_solve_small(m, rhs, dim, "lyapunov");
  std::copy(rhs.begin(), rhs.end(), x);
}

// Solve Tᵀ Y + Y T = C with T quasi upper triangular (blocks ascending).
Matrix triangular_lyapunov_tt(const Matrix& t, const Matrix& c) {
  const int n = t.rows();
  Matrix y(n, n);
  const std::vector<int> starts = diagonal_blocks(t);
  const int nb = static_cast<int>(starts.size()) - 1;
  double cblk[4], xblk[4];
  for (int jb = 0; jb < nb; ++jb) {
    const int j0 = starts[jb], q = starts[jb + 1] - j0;
    for (int ib = 0; ib < nb; ++ib) {
      const int i0 = starts[ib], p = starts[ib + 1] - i0;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b) {
          double s = c(i0 + a, j0 + b);
          // minus (Tᵀ Y)_{ij} contributions from rows above block ib
          for (int k = 0; k < i0; ++k) s -= t(k, i0 + a) * y(k, j0 + b);
          // minus (Y T)_{ij} contributions from columns left of block jb
          for (int k = 0; k < j0; ++k) s -= y(i0 + a, k) * t(k, j0 + b);
          cblk[a * q + b] = s;
        }
      solve_block_tt(t, i0, p, j0, q, cblk, xblk, /*transpose_left=*/true,
                     /*transpose_right=*/false);
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b) y(i0 + a, j0 + b) = xblk[a * q + b];
    }
  }
  return y;
}

// Solve T Y + Y Tᵀ = C with T quasi upper triangular (blocks descending).
Matrix triangular_lyapunov_nt(const Matrix& t, const Matrix& c) {
  const int n = t.rows();
  Matrix y(n, n);
  const std::vector<int> starts = diagonal_blocks(t);
  const int nb = static_cast<int>(starts.size()) - 1;
  double cblk[4], xblk[4];
  for (int jb = nb - 1; jb >= 0; --jb) {
    const int j0 = starts[jb], q = starts[jb + 1] - j0;
    const int jend = j0 + q;
    for (int ib = nb - 1; ib >= 0; --ib) {
      const int i0 = starts[ib], p = starts[ib + 1] - i0;
      const int iend = i0 + p;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b) {
          double s = c(i0 + a, j0 + b);
          for (int k = iend; k < n; ++k) s -= t(i0 + a, k) * y(k, j0 + b);
          for (int k = jend; k < n; ++k) s -= y(i0 + a, k) * t(j0 + b, k);
          cblk[a * q + b] = s;
        }
      solve_block_tt(t, i0, p, j0, q, cblk, xblk, /*transpose_left=*/false,
                     /*transpose_right=*/true);
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b) y(i0 + a, j0 + b) = xblk[a * q + b];
    }
  }
  return y;
}

void require_hurwitz(const SchurForm& schur, const char* who) {
  if (spectral_abscissa(schur) >= 0.0)
    throw StabilityError(std::string(who) + ": closed-loop matrix is not Hurwitz");
}

Matrix lyapunov_common(const SchurForm& schur, const Matrix& rhs, bool transposed_coupling,
                       const char* who) {
  require_square(schur.t, who);
  if (schur.u.empty()) throw DimensionError(std::string(who) + ": Schur form lacks the U factor");
  if (rhs.rows() != schur.t.rows() || rhs.cols() != schur.t.cols())
    throw DimensionError(std::string(who) + ": right-hand side has wrong dimensions");
  require_hurwitz(schur, who);
  const Matrix c = -1.0 * (matmul_tn(schur.u, rhs) * schur.u);
  const Matrix y =
      transposed_coupling ? triangular_lyapunov_tt(schur.t, c) : triangular_lyapunov_nt(schur.t, c);
  return symmetrized(matmul_nt(schur.u * y, schur.u));
}

// ---------------------------------------------------------------------------
// Ordered Schur form support for the Riccati solve.
// ---------------------------------------------------------------------------

double block_real_part(const Matrix& t, int i, int size) {
  if (size == 1) return t(i, i);
  return 0.5 * (t(i, i) + t(i + 1, i + 1));
}

// Swap the adjacent diagonal blocks at (k, p) and (k+p, q) of T, updating U.
void swap_adjacent_blocks(Matrix& t, Matrix& u, int k, int p, int q) {
  const int n = t.rows();
  const int s = p + q;
  // Solve A11 X - X A22 = A12 for the p x q coupling X.
  std::vector<double> m(static_cast<std::size_t>(p * q) * (p * q), 0.0);
  std::vector<double> rhs(p * q);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      const int row = a * q + b;
      rhs[row] = t(k + a, k + p + b);
      for (int c = 0; c < p; ++c) m[row * (p * q) + c * q + b] += t(k + a, k + c);
      for (int c = 0; c < q; ++c) m[row * (p * q) + a * q + c] -= t(k + p + c, k + p + b);
    }
  gauss_solve_small(m, rhs, p * q, "schur reorder");

  // Orthonormalize V = [-X; I] by Householder QR, building the full Q.
  Matrix v(s, q);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) v(a, b) = -rhs[a * q + b];
  for (int b = 0; b < q; ++b) v(p + b, b) = 1.0;
  Matrix qfull = Matrix::identity(s);
  for (int col = 0; col < q; ++col) {
    double scale = 0.0;
    for (int i = col; i < s; ++i) scale = std::max(scale, std::abs(v(i, col)));
    if (scale == 0.0) continue;
    double ssq = 0.0;
    std::vector<double> w(s, 0.0);
    for (int i = col; i < s; ++i) {
      w[i] = v(i, col) / scale;
      ssq += w[i] * w[i];
    }
    double alpha = std::sqrt(ssq);
    if (w[col] > 0.0) alpha = -alpha;
    w[col] -= alpha;
    double wnorm2 = 0.0;
    for (int i = col; i < s; ++i) wnorm2 += w[i] * w[i];
    if (wnorm2 == 0.0) continue;
    const double beta = 2.0 / wnorm2;
    for (int j = col; j < q; ++j) {
      double acc = 0.0;
      for (int i = col; i < s; ++i) acc += w[i] * v(i, j);
      acc *= beta;
      for (int i = col; i < s; ++i) v(i, j) -= w[i] * acc;
    }
    for (int i = 0; i < s; ++i) {
      double acc = 0.0;
      for (int j = col; j < s; ++j) acc += qfull(i, j) * w[j];
      acc *= beta;
      for (int j = col; j < s; ++j) qfull(i, j) -= w[j] * acc;
    }
  }

  // Similarity on the window: T <- Q̃ᵀ T Q̃, U <- U Q̃.
  Matrix rows = t.block(k, 0, s, n);
  t.set_block(k, 0, matmul_tn(qfull, rows));
  Matrix cols = t.block(0, k, n, s);
  t.set_block(0, k, cols * qfull);
  Matrix ucols = u.block(0, k, n, s);
  u.set_block(0, k, ucols * qfull);
  for (int i = q; i < s; ++i)
    for (int j = 0; j < q; ++j) t(k + i, k + j) = 0.0;
}

// Reorder so all eigenvalues with negative real part come first.
// Returns the number of rows/columns occupied by the stable group.
int order_stable_first(Matrix& t, Matrix& u) {
  bool swapped = true;
  while (swapped) {
    swapped = false;
    std::vector<int> starts = diagonal_blocks(t);
    const int nb = static_cast<int>(starts.size()) - 1;
    for (int b = 0; b + 1 < nb; ++b) {
      const int i0 = starts[b], p = starts[b + 1] - i0;
      const int j0 = starts[b + 1], q = starts[b + 2] - j0;
      const bool first_stable = block_real_part(t, i0, p) < 0.0;
      const bool second_stable = block_real_part(t, j0, q) < 0.0;
      if (!first_stable && second_stable) {
        swap_adjacent_blocks(t, u, i0, p, q);
        swapped = true;
        starts = diagonal_blocks(t);
      }
    }
  }
  int count = 0;
  const std::vector<int> starts = diagonal_blocks(t);
  for (std::size_t b = 0; b + 1 < starts.size(); ++b) {
    const int i0 = starts[b], p = starts[b + 1] - i0;
    if (block_real_part(t, i0, p) < 0.0)
      count += p;
    else
      break;
  }
  return count;
}

}  // namespace

SchurForm real_schur(const Matrix& a, bool want_u) {
  require_square(a, "real_schur");
  if (!a.all_finite()) throw NumericalError("real_schur: non-finite entry");
  SchurForm schur;
  schur.t = a;
  if (want_u) schur.u = Matrix::identity(a.rows());
  Matrix* u = want_u ? &schur.u : nullptr;
  hessenberg(schur.t, u);
  francis_qr(schur.t, u);
  return schur;
}

std::vector<std::complex<double>> schur_eigenvalues(const Matrix& t) {
  require_square(t, "schur_eigenvalues");
  std::vector<std::complex<double>> eigs;
  const int n = t.rows();
  int i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double mu = 0.5 * (t(i, i) + t(i + 1, i + 1));
      const double half = 0.5 * (t(i, i) - t(i + 1, i + 1));
      const double disc = half * half + t(i, i + 1) * t(i + 1, i);
      if (disc < 0.0) {
        const double w = std::sqrt(-disc);
        eigs.emplace_back(mu, w);
        eigs.emplace_back(mu, -w);
      } else {
        const double sq = std::sqrt(disc);
        eigs.emplace_back(mu + sq, 0.0);
        eigs.emplace_back(mu - sq, 0.0);
      }
      i += 2;
    } else {
      eigs.emplace_back(t(i, i), 0.0);
      i += 1;
    }
  }
  return eigs;
}

double spectral_abscissa(const SchurForm& schur) {
  double amax = -std::numeric_limits<double>::infinity();
  for (const auto& e : schur_eigenvalues(schur.t)) amax = std::max(amax, e.real());
  return amax;
}

double spectral_abscissa(const Matrix& m) {
  require_square(m, "spectral_abscissa");
  if (!m.all_finite()) throw NumericalError("spectral_abscissa: non-finite entry");
  return spectral_abscissa(real_schur(m, /*want_u=*/false));
}

Matrix solve_lyapunov(const SchurForm& schur, const Matrix& rhs) {
  return lyapunov_common(schur, rhs, /*transposed_coupling=*/true, "solve_lyapunov");
}

Matrix solve_lyapunov(const Matrix& acl, const Matrix& rhs) {
  require_square(acl, "solve_lyapunov");
  return solve_lyapunov(real_schur(acl), rhs);
}

Matrix solve_dual_lyapunov(const SchurForm& schur, const Matrix& rhs) {
  return lyapunov_common(schur, rhs, /*transposed_coupling=*/false, "solve_dual_lyapunov");
}

Matrix solve_dual_lyapunov(const Matrix& acl, const Matrix& rhs) {
  require_square(acl, "solve_dual_lyapunov");
  return solve_dual_lyapunov(real_schur(acl), rhs);
}

SymmetricEig sym_eig(const Matrix& a) {
  require_square(a, "sym_eig");
  if (!a.all_finite()) throw NumericalError("sym_eig: non-finite entry");
  const int n = a.rows();
  Matrix z = symmetrized(a);
  std::vector<double> d(n, 0.0), e(n, 0.0);

  // Householder reduction to tridiagonal form (tred2).
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) {
      z(j, i) = 0.0;
      z(i, j) = 0.0;
    }
  }

  // Implicit-shift QL iteration on the tridiagonal form (tql2).
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw NumericalError("sym_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  // Sort ascending, permuting eigenvectors to match.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
  SymmetricEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = z(i, order[j]);
  }
  return out;
}

Matrix solve_spd_sylvester(const SymmetricEig& r_eig, const SymmetricEig& l_eig, double rho,
                           const Matrix& rhs) {
  if (rho <= 0.0) throw DefinitenessError("solve_spd_sylvester: rho must be positive");
  const int m = r_eig.vectors.rows();
  const int n = l_eig.vectors.rows();
  if (rhs.rows() != m || rhs.cols() != n)
    throw DimensionError("solve_spd_sylvester: right-hand side has wrong dimensions");
  Matrix fh = matmul_tn(r_eig.vectors, rhs) * l_eig.vectors;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      fh(i, j) /= 2.0 * r_eig.values[i] * l_eig.values[j] + rho;
  return matmul_nt(r_eig.vectors * fh, l_eig.vectors);
}

Matrix solve_spd_sylvester(const Matrix& r, const Matrix& l, double rho, const Matrix& rhs) {
  require_square(r, "solve_spd_sylvester");
  require_square(l, "solve_spd_sylvester");
  const SymmetricEig r_eig = sym_eig(r);
  const double r_scale = std::max(std::abs(r_eig.values.front()), std::abs(r_eig.values.back()));
  if (r_eig.values.front() <= 1e-12 * std::max(1.0, r_scale))
    throw DefinitenessError("solve_spd_sylvester: R is not positive definite");
  const SymmetricEig l_eig = sym_eig(l);
  return solve_spd_sylvester(r_eig, l_eig, rho, rhs);
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  require_square(a, "solve_linear");
  if (b.rows() != a.rows()) throw DimensionError("solve_linear: dimension mismatch");
  const int n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) throw NumericalError("solve_linear: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 0; j < x.cols(); ++j) {
      double s = x(k, j);
      for (int i = k + 1; i < n; ++i) s -= lu(k, i) * x(i, j);
      x(k, j) = s / lu(k, k);
    }
  }
  return x;
}

AreSolution solve_are(const Plant& plant) {
  const int n = plant.num_states();
  const int m = plant.num_inputs();
  if (plant.a.rows() != n || plant.a.cols() != n || plant.b2.rows() != n ||
      plant.q.rows() != n || plant.q.cols() != n || plant.r.rows() != m || plant.r.cols() != m)
    throw DimensionError("solve_are: inconsistent plant dimensions");

  // G = B2 R⁻¹ B2ᵀ.
  Matrix rinv_b2t;
  try {
    rinv_b2t = solve_linear(plant.r, plant.b2.transpose());
  } catch (const NumericalError&) {
    throw DefinitenessError("solve_are: R is singular");
  }
  const Matrix g = symmetrized(plant.b2 * rinv_b2t);

  Matrix ham(2 * n, 2 * n);
  ham.set_block(0, 0, plant.a);
  ham.set_block(0, n, -1.0 * g);
  ham.set_block(n, 0, -1.0 * symmetrized(plant.q));
  ham.set_block(n, n, -1.0 * plant.a.transpose());

  SchurForm schur = real_schur(ham);
  const int stable = order_stable_first(schur.t, schur.u);
  if (stable != n)
    throw SynthesisError("solve_are: Hamiltonian has " + std::to_string(stable) +
                         " stable eigenvalues, expected " + std::to_string(n) +
                         " (plant may not be stabilizable/detectable)");

  const Matrix u11 = schur.u.block(0, 0, n, n);
  const Matrix u21 = schur.u.block(n, 0, n, n);
  Matrix p0;
  try {
    p0 = symmetrized(solve_linear(u11.transpose(), u21.transpose()).transpose());
  } catch (const NumericalError&) {
    throw SynthesisError("solve_are: stable invariant subspace extraction failed");
  }

  // One Newton–Kleinman step: exact for the true solution, contracts otherwise.
  const Matrix f0 = solve_linear(plant.r, matmul_tn(plant.b2, p0));
  const Matrix acl0 = plant.a - plant.b2 * f0;
  const SchurForm acl0_schur = real_schur(acl0);
  if (spectral_abscissa(acl0_schur) >= 0.0)
    throw SynthesisError("solve_are: extracted subspace gives an unstable closed loop");
  const Matrix rhs0 = symmetrized(plant.q + matmul_tn(f0, plant.r * f0));
  const Matrix p = solve_lyapunov(acl0_schur, rhs0);

  AreSolution sol;
  sol.p = p;
  sol.gain = solve_linear(plant.r, matmul_tn(plant.b2, p));
  if (spectral_abscissa(plant.a - plant.b2 * sol.gain) >= 0.0)
    throw SynthesisError("solve_are: refined closed loop is unstable");

  const Matrix residual =
      matmul_tn(plant.a, p) + p * plant.a + plant.q - p * g * p;
  const double scale = std::max(1.0, plant.a.frobenius_norm() * p.frobenius_norm() +
                                         plant.q.frobenius_norm() +
                                         (p * g * p).frobenius_norm());
  if (residual.frobenius_norm() > 1e-8 * scale)
    throw SynthesisError("solve_are: residual exceeds tolerance");
  return sol;
}

}  // namespace sparsegain
