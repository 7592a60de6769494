#pragma once

#include <initializer_list>
#include <vector>

namespace sparsegain {

/// Dense real matrix with row-major storage. Values are immutable once built
/// by the numerical kernels; all operations return fresh matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-initialized
  Matrix(int rows, int cols, std::initializer_list<double> entries);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool same_size(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row_ptr(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  Matrix transpose() const;
  Matrix block(int i0, int j0, int nrows, int ncols) const;
  void set_block(int i0, int j0, const Matrix& b);

  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;
  bool all_finite() const;

  void fill(double value);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, double s);

/// Aᵀ·B without forming the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// A·Bᵀ without forming the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// Frobenius inner product ⟨A, B⟩ = Σ A_ij B_ij.
double frobenius_dot(const Matrix& a, const Matrix& b);

/// Entrywise (Hadamard) product.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// (A + Aᵀ)/2.
Matrix symmetrized(const Matrix& a);

}  // namespace sparsegain
