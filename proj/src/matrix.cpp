#include "sparsegain/matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "sparsegain/errors.hpp"

namespace sparsegain {

namespace {

void check_same_size(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_size(b))
    throw DimensionError(std::string(op) + ": operands are " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be nonnegative");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::initializer_list<double> entries) : Matrix(rows, cols) {
  if (static_cast<std::size_t>(rows) * cols != entries.size())
    throw DimensionError("initializer size does not match matrix dimensions");
  std::size_t k = 0;
  for (double v : entries) data_[k++] = v;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(int i0, int j0, int nrows, int ncols) const {
  if (i0 < 0 || j0 < 0 || i0 + nrows > rows_ || j0 + ncols > cols_)
    throw DimensionError("block indices out of range");
  Matrix b(nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
  return b;
}

void Matrix::set_block(int i0, int j0, const Matrix& b) {
  if (i0 < 0 || j0 < 0 || i0 + b.rows() > rows_ || j0 + b.cols() > cols_)
    throw DimensionError("block indices out of range");
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

double Matrix::frobenius_norm() const {
  // Scaled accumulation to avoid overflow on large entries.
  double scale = 0.0, ssq = 1.0;
  for (double v : data_) {
    if (v == 0.0) continue;
    double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  int n = std::min(rows_, cols_);
  for (int i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Matrix::fill(double value) {
  for (double& v : data_) v = value;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  check_same_size(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  check_same_size(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  c += b;
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  c -= b;
  return c;
}

Matrix operator-(const Matrix& a) {
  Matrix c = a;
  c *= -1.0;
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions disagree");
  Matrix c(a.rows(), b.cols());
  const int n = b.cols();
  for (int i = 0; i < a.rows(); ++i) {
    double* crow = c.row_ptr(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  c *= s;
  return c;
}

Matrix operator*(const Matrix& a, double s) { return s * a; }

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("matmul_tn: inner dimensions disagree");
  Matrix c(a.cols(), b.cols());
  const int n = b.cols();
  for (int r = 0; r < a.rows(); ++r) {
    const double* arow = a.row_ptr(r);
    const double* brow = b.row_ptr(r);
    for (int i = 0; i < a.cols(); ++i) {
      const double ari = arow[i];
      if (ari == 0.0) continue;
      double* crow = c.row_ptr(i);
      for (int j = 0; j < n; ++j) crow[j] += ari * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("matmul_nt: inner dimensions disagree");
  Matrix c(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row_ptr(i);
    for (int j = 0; j < b.rows(); ++j) {
      const double* brow = b.row_ptr(j);
      double s = 0.0;
      for (int k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
      c(i, j) = s;
    }
  }
  return c;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
  check_same_size(a, b, "frobenius_dot");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row_ptr(i);
    const double* brow = b.row_ptr(i);
    for (int j = 0; j < a.cols(); ++j) s += arow[j] * brow[j];
  }
  return s;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  check_same_size(a, b, "hadamard");
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
  return c;
}

Matrix symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetrized: matrix must be square");
  Matrix s(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace sparsegain
