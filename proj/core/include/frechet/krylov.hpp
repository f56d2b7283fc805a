#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "frechet/dense.hpp"
#include "frechet/sparse.hpp"

namespace frechet {

enum class KrylovKind { lanczos, arnoldi, two_sided_left, two_sided_right, block, rational };

/// Pole of a rational Krylov space: a point in C or infinity.
struct Pole {
  bool infinite = true;
  Complex value{};
  static Pole inf() { return {}; }
  static Pole at(Complex xi) { return {false, xi}; }
};

std::vector<Pole> extended_poles(std::size_t count);  // 0, inf, 0, inf, ...
std::vector<Pole> repeated_pole(Complex xi, std::size_t count);

using SolverFactory = std::function<std::shared_ptr<LinearSolver>(const SparseMatrix&, Complex)>;
SolverFactory default_solver_factory();

struct ValidationReport {
  double orthogonality = 0.0;    // ||basis^H basis − I||_max
  double relation = 0.0;         // Krylov relation residual / ||A||_F
  double biorthogonality = 0.0;  // ||W^H V − I||_max (two-sided pairs)
};

struct KrylovDecomposition {
  KrylovKind kind = KrylovKind::lanczos;
  DenseMatrix basis;      // n×dim, or n×(dim+width) when the next vector exists
  DenseMatrix projected;  // dim×dim
  DenseMatrix trailing;   // trailing coefficient(s); shape depends on kind
  std::vector<Pole> poles;
  double start_norm = 0.0;
  std::size_t steps = 0;  // completed steps (block steps for block kind)
  bool lucky_breakdown = false;

  std::size_t dim() const { return projected.rows(); }
  /// Leading dim columns of basis (drops the trailing vector when present).
  DenseMatrix basis_main() const;
  ValidationReport validate(const SparseMatrix& a,
                            const KrylovDecomposition* left = nullptr) const;
};

// --- Incremental builders ----------------------------------------------------
// Each process owns its state, advances one step at a time and can emit a
// decomposition for any completed prefix; prefix bases are nested.

class LanczosProcess {
 public:
  LanczosProcess(const SparseMatrix& a, const DenseVector& y);
  /// Runs until `steps() >= m` or breakdown; returns false on breakdown.
  bool extend_to(std::size_t m);
  std::size_t steps() const { return alphas_.size(); }
  bool broke_down() const { return breakdown_; }
  KrylovDecomposition snapshot(std::size_t m) const;
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }

 private:
  const SparseMatrix& a_;
  double a_norm_;
  std::vector<DenseVector> v_;
  std::vector<double> alphas_;
  std::vector<double> betas_;  // betas_[j] = T(j+1, j)
  double start_norm_ = 0.0;
  bool breakdown_ = false;
};

class ArnoldiProcess {
 public:
  ArnoldiProcess(const SparseMatrix& a, const DenseVector& start, bool adjoint_op = false);
  bool extend_to(std::size_t m);
  std::size_t steps() const { return h_cols_.size(); }
  bool broke_down() const { return breakdown_; }
  KrylovDecomposition snapshot(std::size_t m) const;
  /// H(m, m−1) subdiagonal coefficient after step m.
  Complex subdiagonal(std::size_t m) const { return h_cols_[m - 1][m]; }

 private:
  const SparseMatrix& a_;
  bool adjoint_;
  double a_norm_;
  std::vector<DenseVector> v_;
  std::vector<std::vector<Complex>> h_cols_;  // column j holds H(0..j+1, j)
  double start_norm_ = 0.0;
  bool breakdown_ = false;
};

class TwoSidedProcess {
 public:
  enum class Status { ok, lucky, serious };
  TwoSidedProcess(const SparseMatrix& a, const DenseVector& y, const DenseVector& z);
  Status extend_to(std::size_t m);
  std::size_t steps() const { return alphas_.size(); }
  Status status() const { return status_; }
  std::size_t breakdown_step() const { return breakdown_step_; }
  std::pair<KrylovDecomposition, KrylovDecomposition> snapshot_pair(std::size_t m) const;

 private:
  const SparseMatrix& a_;
  std::vector<DenseVector> v_, w_;
  std::vector<Complex> alphas_, super_;  // super_[j] = T(j, j+1)
  std::vector<double> sub_;              // sub_[j] = T(j+1, j)
  double y_norm_ = 0.0, z_norm_ = 0.0;
  Status status_ = Status::ok;
  std::size_t breakdown_step_ = 0;
};

class BlockLanczosProcess {
 public:
  BlockLanczosProcess(const SparseMatrix& a, const DenseVector& y, const DenseVector& z);
  /// Extends to m block steps; throws DeflationDetectedError on deflation.
  void extend_to(std::size_t m);
  std::size_t steps() const { return diag_blocks_.size(); }
  KrylovDecomposition snapshot(std::size_t m) const;

 private:
  const SparseMatrix& a_;
  double a_norm_;
  std::vector<DenseVector> v_;             // block columns flattened, width 2
  std::vector<DenseMatrix> diag_blocks_;   // T_jj, 2×2
  std::vector<DenseMatrix> super_blocks_;  // T_{j,j+1}, 2×2
  std::vector<DenseMatrix> sub_blocks_;    // T_{j+1,j}, 2×2
  DenseMatrix initial_r_;                  // R of the initial QR of [y z]
};

class RationalArnoldiProcess {
 public:
  RationalArnoldiProcess(const SparseMatrix& a, const DenseVector& y, std::vector<Pole> poles,
                         SolverFactory factory);
  /// Extends the basis to `dim` columns (dim−1 pole steps); returns false if
  /// the space became invariant first.
  bool extend_to_dim(std::size_t dim);
  std::size_t dim() const { return v_.size(); }
  bool broke_down() const { return breakdown_; }
  std::size_t solve_count() const { return solve_count_; }
  KrylovDecomposition snapshot(std::size_t dim) const;

 private:
  const SparseMatrix& a_;
  std::vector<Pole> poles_;
  SolverFactory factory_;
  std::vector<std::pair<Complex, std::shared_ptr<LinearSolver>>> solver_cache_;
  std::vector<DenseVector> v_, av_;           // basis and A·basis, aligned
  std::vector<std::vector<Complex>> gram_;    // column j of V^H A V
  double start_norm_ = 0.0;
  bool breakdown_ = false;
  std::size_t steps_done_ = 0;
  std::size_t solve_count_ = 0;
  std::shared_ptr<LinearSolver> solver_for(Complex xi);
};

// --- One-shot builders --------------------------------------------------------

KrylovDecomposition lanczos(const SparseMatrix& a, const DenseVector& y, std::size_t m);
KrylovDecomposition arnoldi(const SparseMatrix& a, const DenseVector& y, std::size_t m);
std::pair<KrylovDecomposition, KrylovDecomposition> two_sided_lanczos(const SparseMatrix& a,
                                                                      const DenseVector& y,
                                                                      const DenseVector& z,
                                                                      std::size_t m);
KrylovDecomposition block_lanczos(const SparseMatrix& a, const DenseVector& y,
                                  const DenseVector& z, std::size_t m);
KrylovDecomposition rational_arnoldi(const SparseMatrix& a, const DenseVector& y,
                                     const std::vector<Pole>& poles,
                                     const SolverFactory& factory = default_solver_factory());

/// Extreme Ritz values from short Lanczos probe runs, widened outward by 1%.
std::pair<double, double> ritz_extremes(const SparseMatrix& a, std::size_t probes,
                                        std::size_t steps);

}  // namespace frechet
