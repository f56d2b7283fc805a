#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "frechet/dense.hpp"

namespace frechet {

struct Triplet {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Square sparse matrix in compressed sparse row form with an optional
/// lazily built adjoint (conjugate transpose) cache and a Hermitian hint.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Builds canonical CSR from triplets: duplicates are summed, explicit
  /// zeros dropped, column indices strictly increasing within each row.
  static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> entries,
                                    bool hermitian_hint = false);

  SparseMatrix(const SparseMatrix& other);
  SparseMatrix& operator=(const SparseMatrix& other);
  SparseMatrix(SparseMatrix&&) noexcept = default;
  SparseMatrix& operator=(SparseMatrix&&) noexcept = default;

  std::size_t dim() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  bool hermitian_hint() const { return hermitian_; }
  void set_hermitian_hint(bool h) { hermitian_ = h; }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<Complex>& values() const { return values_; }

  double frobenius_norm() const;
  /// On-demand check of the Hermitian hint: ||A - A^H||_F <= tol·||A||_F.
  bool check_hermitian(double tol = 1e-12) const;

  DenseMatrix to_dense() const;

  /// CSR arrays of A^H, built on first use (thread-safe single init).
  struct Csr {
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col_idx;
    std::vector<Complex> values;
  };
  const Csr& adjoint_csr() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<Complex> values_;
  bool hermitian_ = false;

  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const Csr> adjoint_cache_;
};

DenseVector matvec(const SparseMatrix& a, const DenseVector& v);
DenseVector matvec_adjoint(const SparseMatrix& a, const DenseVector& v);

/// Materializes A^H as its own SparseMatrix.
SparseMatrix adjoint_of(const SparseMatrix& a);
SparseMatrix scale(const SparseMatrix& a, Complex s);

// --- Matrix Market and vector file I/O -------------------------------------

SparseMatrix read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const SparseMatrix& a);

DenseMatrix read_matrix_market_dense(const std::string& path);
void write_matrix_market_dense(const std::string& path, const DenseMatrix& a);

/// Plain text vectors, one entry per line; complex entries as "re im".
DenseVector read_vector(const std::string& path);
void write_vector(const std::string& path, const DenseVector& v);

// --- PDE test-matrix generators ---------------------------------------------

/// Five-point 2D Laplacian on a k×k interior grid with Dirichlet boundary,
/// h = 1/(k+1): (1/h²)(I⊗T + T⊗I), T = tridiag(−1, 2, −1). SPD.
SparseMatrix laplace2d(std::size_t k);

/// Central-difference convection-diffusion operator with Péclet numbers
/// (pe1, pe2); reduces to laplace2d for pe1 = pe2 = 0. The spectrum lies in
/// the right half-plane (positive definite symmetric part).
SparseMatrix convdiff2d(std::size_t k, double pe1, double pe2);

// --- Shifted linear solves ---------------------------------------------------

/// Direct solver for (A − ξI); dense LU behind an opaque interface, adequate
/// at desk scale. Read-only after construction and shareable.
class LinearSolver {
 public:
  LinearSolver(const SparseMatrix& a, Complex shift);
  DenseVector solve(const DenseVector& rhs) const;
  /// Solves (A − ξI)^H x = rhs.
  DenseVector solve_adjoint(const DenseVector& rhs) const;
  Complex shift() const { return shift_; }
  std::size_t dim() const { return lu_->dim(); }

 private:
  std::shared_ptr<const LuFactorization> lu_;
  Complex shift_;
};

LinearSolver make_solver(const SparseMatrix& a, Complex shift);

}  // namespace frechet
