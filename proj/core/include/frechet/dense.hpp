#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "frechet/errors.hpp"

namespace frechet {

using Complex = std::complex<double>;

/// Dense complex vector. Real inputs are promoted to complex on entry so a
/// single code path serves Hermitian and non-Hermitian problems.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n) : data_(n, Complex(0.0)) {}
  DenseVector(std::initializer_list<Complex> init) : data_(init) { check_finite(); }
  explicit DenseVector(std::vector<Complex> entries) : data_(std::move(entries)) { check_finite(); }

  std::size_t size() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  double norm() const;

 private:
  void check_finite() const;
  std::vector<Complex> data_;
};

/// Dense complex matrix in column-major order.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0)) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  Complex* col(std::size_t j) { return data_.data() + j * rows_; }
  const Complex* col(std::size_t j) const { return data_.data() + j * rows_; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  DenseVector column(std::size_t j) const;
  void set_column(std::size_t j, const DenseVector& v);

  /// Copies `block` into this matrix with upper-left corner (i0, j0).
  void place(std::size_t i0, std::size_t j0, const DenseMatrix& block);
  /// Extracts the sub-block of size rows×cols with upper-left corner (i0, j0).
  DenseMatrix slice(std::size_t i0, std::size_t j0, std::size_t rows, std::size_t cols) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Elementwise and norm helpers.
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(Complex s, const DenseMatrix& a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseVector operator*(const DenseMatrix& a, const DenseVector& x);
DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator*(Complex s, const DenseVector& a);

/// a^H x b (conjugate-linear in the first argument).
Complex dot(const DenseVector& a, const DenseVector& b);

DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix conjugate(const DenseMatrix& a);
DenseVector conjugate(const DenseVector& a);

/// C = A^H B without forming A^H.
DenseMatrix adjoint_times(const DenseMatrix& a, const DenseMatrix& b);
DenseVector adjoint_times(const DenseMatrix& a, const DenseVector& x);

double frobenius_norm(const DenseMatrix& a);
double one_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
DenseMatrix outer(const DenseVector& u, const DenseVector& v);  // u v^H

struct QrResult {
  DenseMatrix q;  // rows×cols, orthonormal columns
  DenseMatrix r;  // cols×cols, upper triangular
};

/// Thin Householder QR; requires rows >= cols. Rank deficiency shows up as
/// near-zero diagonal entries of R and is interpreted by callers.
QrResult householder_qr(const DenseMatrix& m);

struct HermitianEig {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // unitary, columns are eigenvectors
};

/// Householder tridiagonalization followed by implicit-shift QL.
HermitianEig hermitian_eig(const DenseMatrix& m);

/// Eigenvalues and first eigenvector components of a real symmetric
/// tridiagonal matrix (diag, sub). Values ascending.
struct TridiagEig {
  std::vector<double> values;
  std::vector<double> first_components;
};
TridiagEig symmetric_tridiag_eig(std::vector<double> diag, std::vector<double> sub);

/// LU with partial pivoting. Detects the lower bandwidth of the input and
/// keeps the factorization banded, so tridiagonal and Hessenberg systems
/// solve in O(n·b) / O(n²) instead of O(n³).
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix m);

  DenseVector solve(const DenseVector& rhs) const;
  DenseMatrix solve(const DenseMatrix& rhs) const;
  /// Solves M^H x = rhs using the factorization of M.
  DenseVector solve_adjoint(const DenseVector& rhs) const;

  std::size_t dim() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;  // pivot row chosen at each elimination step
  std::size_t lower_bw_ = 0;
  std::size_t upper_bw_ = 0;
};

DenseVector lu_solve(const DenseMatrix& m, const DenseVector& rhs);

/// Singular values in descending order via one-sided Jacobi.
std::vector<double> small_svd_values(const DenseMatrix& m);

/// Largest singular value of a dense matrix by power iteration on A^H A.
double spectral_norm(const DenseMatrix& a, std::size_t max_iters = 200, double tol = 1e-10);

/// 1-norm condition estimate of the inverse, ||M^{-1}||_1, via the classic
/// Hager power-style estimator on an existing factorization.
double inverse_one_norm_estimate(const LuFactorization& lu);

}  // namespace frechet
