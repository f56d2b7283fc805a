#include "frechet/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frechet/rng.hpp"

namespace frechet {

namespace {

constexpr double kBreakdownTol = 1e-12;
constexpr double kDeflationTol = 1e-10;
constexpr double kLuckyTol = 1e-12;

void axpy(DenseVector& y, Complex a, const DenseVector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

DenseVector scaled(const DenseVector& x, Complex a) {
  DenseVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
  return y;
}

DenseMatrix columns_to_matrix(const std::vector<DenseVector>& cols, std::size_t count) {
  const std::size_t n = cols.empty() ? 0 : cols[0].size();
  DenseMatrix m(n, count);
  for (std::size_t j = 0; j < count; ++j) m.set_column(j, cols[j]);
  return m;
}

}  // namespace

std::vector<Pole> extended_poles(std::size_t count) {
  std::vector<Pole> poles(count);
  for (std::size_t i = 0; i < count; ++i) poles[i] = (i % 2 == 0) ? Pole::at(0.0) : Pole::inf();
  return poles;
}

std::vector<Pole> repeated_pole(Complex xi, std::size_t count) {
  return std::vector<Pole>(count, Pole::at(xi));
}

SolverFactory default_solver_factory() {
  return [](const SparseMatrix& a, Complex shift) {
    return std::make_shared<LinearSolver>(a, shift);
  };
}

DenseMatrix KrylovDecomposition::basis_main() const {
  const std::size_t d = dim();
  if (basis.cols() == d) return basis;
  return basis.slice(0, 0, basis.rows(), d);
}

ValidationReport KrylovDecomposition::validate(const SparseMatrix& a,
                                               const KrylovDecomposition* left) const {
  ValidationReport rep;
  const double a_norm = std::max(a.frobenius_norm(), 1e-300);
  const DenseMatrix vm = basis_main();
  const std::size_t d = dim();

  if (kind != KrylovKind::two_sided_left && kind != KrylovKind::two_sided_right) {
    DenseMatrix gram = adjoint_times(basis, basis);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    rep.orthogonality = max_abs(gram);
  }

  // A·V against the stored projection.
  DenseMatrix av(vm.rows(), d);
  for (std::size_t j = 0; j < d; ++j) av.set_column(j, matvec(a, vm.column(j)));

  switch (kind) {
    case KrylovKind::lanczos:
    case KrylovKind::arnoldi:
    case KrylovKind::two_sided_right: {
      DenseMatrix resid = av - vm * projected;
      if (basis.cols() > d && trailing.rows() > 0) {
        const DenseVector next = basis.column(d);
        const Complex t = trailing(0, 0);
        for (std::size_t i = 0; i < resid.rows(); ++i) resid(i, d - 1) -= t * next[i];
      }
      rep.relation = frobenius_norm(resid) / a_norm;
      break;
    }
    case KrylovKind::two_sided_left: {
      // Left space satisfies the adjoint relation A^H W = W T^H + t̄ w e^H.
      DenseMatrix ahw(vm.rows(), d);
      for (std::size_t j = 0; j < d; ++j) ahw.set_column(j, matvec_adjoint(a, vm.column(j)));
      DenseMatrix resid = ahw - vm * adjoint(projected);
      if (basis.cols() > d && trailing.cols() > 1) {
        const DenseVector next = basis.column(d);
        const Complex t = std::conj(trailing(0, 1));
        for (std::size_t i = 0; i < resid.rows(); ++i) resid(i, d - 1) -= t * next[i];
      }
      rep.relation = frobenius_norm(resid) / a_norm;
      break;
    }
    case KrylovKind::block: {
      DenseMatrix resid = av - vm * projected;
      if (basis.cols() > d && trailing.rows() == 2) {
        const DenseMatrix next = basis.slice(0, d, basis.rows(), 2);
        const DenseMatrix tail = next * trailing;  // V_{m+1} T_{m+1,m}
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t i = 0; i < resid.rows(); ++i)
            resid(i, d - 2 + j) -= tail(i, j);
      }
      rep.relation = frobenius_norm(resid) / a_norm;
      break;
    }
    case KrylovKind::rational: {
      DenseMatrix proj = adjoint_times(vm, av);
      rep.relation = frobenius_norm(proj - projected) / a_norm;
      break;
    }
  }

  if (left != nullptr) {
    DenseMatrix cross = adjoint_times(left->basis_main(), vm);
    for (std::size_t i = 0; i < std::min(cross.rows(), cross.cols()); ++i) cross(i, i) -= 1.0;
    rep.biorthogonality = max_abs(cross);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Lanczos
// ---------------------------------------------------------------------------

LanczosProcess::LanczosProcess(const SparseMatrix& a, const DenseVector& y)
    : a_(a), a_norm_(a.frobenius_norm()) {
  if (!a.hermitian_hint()) throw NotHermitianError("lanczos: Hermitian flag not set");
  if (y.size() != a.dim()) throw DimensionMismatchError("lanczos: start vector length");
  start_norm_ = y.norm();
  if (start_norm_ == 0.0) throw ZeroStartVectorError("lanczos: zero start vector");
  v_.push_back(scaled(y, 1.0 / start_norm_));
}

bool LanczosProcess::extend_to(std::size_t m) {
  while (alphas_.size() < m && !breakdown_) {
    const std::size_t j = alphas_.size();
    DenseVector w = matvec(a_, v_[j]);
    const Complex alpha = dot(v_[j], w);
    axpy(w, -alpha, v_[j]);
    if (j > 0) axpy(w, -betas_[j - 1], v_[j - 1]);
    // One full reorthogonalization pass keeps the basis trustworthy; the
    // projected matrix stays tridiagonal by construction.
    for (const DenseVector& vi : v_) axpy(w, -dot(vi, w), vi);
    alphas_.push_back(alpha.real());
    const double beta = w.norm();
    if (beta <= kLuckyTol * a_norm_) {
      breakdown_ = true;
      break;
    }
    betas_.push_back(beta);
    v_.push_back(scaled(w, 1.0 / beta));
  }
  return alphas_.size() >= m;
}

KrylovDecomposition LanczosProcess::snapshot(std::size_t m) const {
  m = std::min(m, steps());
  KrylovDecomposition kd;
  kd.kind = KrylovKind::lanczos;
  kd.steps = m;
  kd.start_norm = start_norm_;
  const bool has_next = v_.size() > m;
  kd.basis = columns_to_matrix(v_, m + (has_next ? 1 : 0));
  kd.projected = DenseMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    kd.projected(i, i) = alphas_[i];
    if (i + 1 < m) {
      kd.projected(i + 1, i) = betas_[i];
      kd.projected(i, i + 1) = betas_[i];
    }
  }
  kd.trailing = DenseMatrix(1, 1);
  if (m < betas_.size() || (m == betas_.size() && has_next))
    kd.trailing(0, 0) = (m > 0 && m <= betas_.size()) ? betas_[m - 1] : 0.0;
  kd.lucky_breakdown = breakdown_ && m == steps();
  return kd;
}

KrylovDecomposition lanczos(const SparseMatrix& a, const DenseVector& y, std::size_t m) {
  LanczosProcess proc(a, y);
  proc.extend_to(m);
  return proc.snapshot(m);
}

// ---------------------------------------------------------------------------
// Arnoldi
// ---------------------------------------------------------------------------

ArnoldiProcess::ArnoldiProcess(const SparseMatrix& a, const DenseVector& start, bool adjoint_op)
    : a_(a), adjoint_(adjoint_op), a_norm_(a.frobenius_norm()) {
  if (start.size() != a.dim()) throw DimensionMismatchError("arnoldi: start vector length");
  start_norm_ = start.norm();
  if (start_norm_ == 0.0) throw ZeroStartVectorError("arnoldi: zero start vector");
  v_.push_back(scaled(start, 1.0 / start_norm_));
}

bool ArnoldiProcess::extend_to(std::size_t m) {
  while (h_cols_.size() < m && !breakdown_) {
    const std::size_t j = h_cols_.size();
    DenseVector w = adjoint_ ? matvec_adjoint(a_, v_[j]) : matvec(a_, v_[j]);
    std::vector<Complex> h(j + 2, Complex(0.0));
    for (std::size_t i = 0; i <= j; ++i) {
      h[i] = dot(v_[i], w);
      axpy(w, -h[i], v_[i]);
    }
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (std::size_t i = 0; i <= j; ++i) {
      const Complex c = dot(v_[i], w);
      axpy(w, -c, v_[i]);
      h[i] += c;
    }
    const double norm = w.norm();
    if (norm <= kLuckyTol * a_norm_) {
      h[j + 1] = 0.0;
      h_cols_.push_back(std::move(h));
      breakdown_ = true;
      break;
    }
    h[j + 1] = norm;
    h_cols_.push_back(std::move(h));
    v_.push_back(scaled(w, 1.0 / norm));
  }
  return h_cols_.size() >= m;
}

KrylovDecomposition ArnoldiProcess::snapshot(std::size_t m) const {
  m = std::min(m, steps());
  KrylovDecomposition kd;
  kd.kind = KrylovKind::arnoldi;
  kd.steps = m;
  kd.start_norm = start_norm_;
  const bool has_next = v_.size() > m;
  kd.basis = columns_to_matrix(v_, m + (has_next ? 1 : 0));
  kd.projected = DenseMatrix(m, m);
  for (std::size_t jcol = 0; jcol < m; ++jcol)
    for (std::size_t i = 0; i <= std::min(jcol + 1, m - 1); ++i)
      kd.projected(i, jcol) = h_cols_[jcol][i];
  kd.trailing = DenseMatrix(1, 1);
  if (m > 0) kd.trailing(0, 0) = h_cols_[m - 1][m];
  kd.lucky_breakdown = breakdown_ && m == steps();
  return kd;
}

KrylovDecomposition arnoldi(const SparseMatrix& a, const DenseVector& y, std::size_t m) {
  ArnoldiProcess proc(a, y);
  proc.extend_to(m);
  return proc.snapshot(m);
}

// ---------------------------------------------------------------------------
// Two-sided Lanczos
// ---------------------------------------------------------------------------

TwoSidedProcess::TwoSidedProcess(const SparseMatrix& a, const DenseVector& y,
                                 const DenseVector& z)
    : a_(a) {
  if (y.size() != a.dim() || z.size() != a.dim())
    throw DimensionMismatchError("two_sided_lanczos: start vector length");
  y_norm_ = y.norm();
  z_norm_ = z.norm();
  if (y_norm_ == 0.0 || z_norm_ == 0.0)
    throw ZeroStartVectorError("two_sided_lanczos: zero start vector");
  const Complex yz = dot(y, z);
  if (std::abs(yz) < kBreakdownTol * y_norm_ * z_norm_)
    throw StartVectorsBiorthogonalError("two_sided_lanczos: y and z are orthogonal");
  DenseVector v1 = scaled(y, 1.0 / y_norm_);
  const Complex c = dot(v1, z);  // w1 = z / (v1^H z) so that w1^H v1 = 1
  w_.push_back(scaled(z, 1.0 / c));
  v_.push_back(std::move(v1));
}

TwoSidedProcess::Status TwoSidedProcess::extend_to(std::size_t m) {
  const double a_norm = a_.frobenius_norm();
  while (alphas_.size() < m && status_ == Status::ok) {
    const std::size_t j = alphas_.size();
    DenseVector r = matvec(a_, v_[j]);
    DenseVector s = matvec_adjoint(a_, w_[j]);
    const Complex alpha = dot(w_[j], r);
    axpy(r, -alpha, v_[j]);
    axpy(s, -std::conj(alpha), w_[j]);
    if (j > 0) {
      axpy(r, -super_[j - 1], v_[j - 1]);
      axpy(s, -std::conj(sub_[j - 1]), w_[j - 1]);
    }
    alphas_.push_back(alpha);
    const double nr = r.norm();
    const double ns = s.norm();
    if (nr <= kLuckyTol * a_norm || ns <= kLuckyTol * a_norm) {
      status_ = Status::lucky;
      breakdown_step_ = j + 1;
      break;
    }
    const Complex omega = dot(s, r);
    if (std::abs(omega) < kBreakdownTol * nr * ns) {
      status_ = Status::serious;
      breakdown_step_ = j + 1;
      break;
    }
    const Complex delta = omega / nr;  // T(j, j+1)
    sub_.push_back(nr);
    super_.push_back(delta);
    v_.push_back(scaled(r, 1.0 / nr));
    w_.push_back(scaled(s, 1.0 / std::conj(delta)));
  }
  if (alphas_.size() >= m) return Status::ok;
  return status_;
}

std::pair<KrylovDecomposition, KrylovDecomposition> TwoSidedProcess::snapshot_pair(
    std::size_t m) const {
  m = std::min(m, steps());
  DenseMatrix t(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    t(i, i) = alphas_[i];
    if (i + 1 < m) {
      t(i + 1, i) = sub_[i];
      t(i, i + 1) = super_[i];
    }
  }
  const bool has_next = v_.size() > m;
  DenseMatrix trailing(1, 2);
  if (m > 0 && m <= sub_.size()) {
    trailing(0, 0) = sub_[m - 1];
    trailing(0, 1) = super_[m - 1];
  }

  KrylovDecomposition right;
  right.kind = KrylovKind::two_sided_right;
  right.steps = m;
  right.start_norm = y_norm_;
  right.basis = columns_to_matrix(v_, m + (has_next ? 1 : 0));
  right.projected = t;
  right.trailing = trailing;
  right.lucky_breakdown = status_ == Status::lucky && m == steps();

  KrylovDecomposition left;
  left.kind = KrylovKind::two_sided_left;
  left.steps = m;
  left.start_norm = z_norm_;
  left.basis = columns_to_matrix(w_, m + (has_next ? 1 : 0));
  left.projected = std::move(t);
  left.trailing = std::move(trailing);
  left.lucky_breakdown = right.lucky_breakdown;
  return {std::move(right), std::move(left)};
}

std::pair<KrylovDecomposition, KrylovDecomposition> two_sided_lanczos(const SparseMatrix& a,
                                                                      const DenseVector& y,
                                                                      const DenseVector& z,
                                                                      std::size_t m) {
  TwoSidedProcess proc(a, y, z);
  const auto status = proc.extend_to(m);
  if (status == TwoSidedProcess::Status::serious)
    throw SeriousBreakdownError("two_sided_lanczos: serious breakdown", proc.breakdown_step());
  return proc.snapshot_pair(m);
}

// ---------------------------------------------------------------------------
// Block Lanczos
// ---------------------------------------------------------------------------

BlockLanczosProcess::BlockLanczosProcess(const SparseMatrix& a, const DenseVector& y,
                                         const DenseVector& z)
    : a_(a), a_norm_(a.frobenius_norm()) {
  if (!a.hermitian_hint()) throw NotHermitianError("block_lanczos: Hermitian flag not set");
  if (y.size() != a.dim() || z.size() != a.dim())
    throw DimensionMismatchError("block_lanczos: start vector length");
  const double ny = y.norm(), nz = z.norm();
  if (ny == 0.0 || nz == 0.0) throw ZeroStartVectorError("block_lanczos: zero start vector");

  DenseMatrix yz(a.dim(), 2);
  yz.set_column(0, y);
  yz.set_column(1, z);
  QrResult qr = householder_qr(yz);
  if (std::abs(qr.r(1, 1)) <= kDeflationTol * std::max(ny, nz))
    throw DeflationDetectedError("block_lanczos: start block is rank deficient", 1);
  v_.push_back(qr.q.column(0));
  v_.push_back(qr.q.column(1));
  initial_r_ = std::move(qr.r);
}

void BlockLanczosProcess::extend_to(std::size_t m) {
  while (steps() < m) {
    const std::size_t j = steps();  // current last block index
    const std::size_t nb = v_.size() / 2;
    // AV_j (two matvecs)
    DenseVector a0 = matvec(a_, v_[2 * j]);
    DenseVector a1 = matvec(a_, v_[2 * j + 1]);

    const std::size_t i0 = (j >= 2) ? j - 2 : 0;
    std::vector<DenseMatrix> t_blocks(j + 1);
    for (std::size_t i = i0; i <= j; ++i) {
      DenseMatrix t(2, 2);
      t(0, 0) = dot(v_[2 * i], a0);
      t(0, 1) = dot(v_[2 * i], a1);
      t(1, 0) = dot(v_[2 * i + 1], a0);
      t(1, 1) = dot(v_[2 * i + 1], a1);
      t_blocks[i] = t;
      axpy(a0, -t(0, 0), v_[2 * i]);
      axpy(a0, -t(1, 0), v_[2 * i + 1]);
      axpy(a1, -t(0, 1), v_[2 * i]);
      axpy(a1, -t(1, 1), v_[2 * i + 1]);
    }
    // Full reorthogonalization against every stored column.
    for (std::size_t c = 0; c < 2 * nb; ++c) {
      axpy(a0, -dot(v_[c], a0), v_[c]);
      axpy(a1, -dot(v_[c], a1), v_[c]);
    }

    DenseMatrix w(a_.dim(), 2);
    w.set_column(0, a0);
    w.set_column(1, a1);
    QrResult qr = householder_qr(w);
    if (std::abs(qr.r(0, 0)) <= kDeflationTol * a_norm_ ||
        std::abs(qr.r(1, 1)) <= kDeflationTol * a_norm_)
      throw DeflationDetectedError("block_lanczos: deflation encountered", j + 2);

    // Hermitize the diagonal block; the projected matrix is exactly Hermitian.
    DenseMatrix diag(2, 2);
    const DenseMatrix& tj = t_blocks[j];
    diag(0, 0) = tj(0, 0).real();
    diag(1, 1) = tj(1, 1).real();
    const Complex off = 0.5 * (tj(0, 1) + std::conj(tj(1, 0)));
    diag(0, 1) = off;
    diag(1, 0) = std::conj(off);
    diag_blocks_.push_back(std::move(diag));
    if (j > 0) super_blocks_.push_back(t_blocks[j - 1]);
    sub_blocks_.push_back(qr.r);
    v_.push_back(qr.q.column(0));
    v_.push_back(qr.q.column(1));
  }
}

KrylovDecomposition BlockLanczosProcess::snapshot(std::size_t m) const {
  m = std::min(m, steps());
  KrylovDecomposition kd;
  kd.kind = KrylovKind::block;
  kd.steps = m;
  kd.start_norm = std::abs(initial_r_(0, 0));
  const std::size_t blocks = v_.size() / 2;
  const std::size_t keep = std::min(blocks, m + 1);
  kd.basis = columns_to_matrix(v_, 2 * keep);
  kd.projected = DenseMatrix(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    kd.projected.place(2 * i, 2 * i, diag_blocks_[i]);
    if (i + 1 < m) {
      kd.projected.place(2 * i, 2 * (i + 1), super_blocks_[i]);
      kd.projected.place(2 * (i + 1), 2 * i, adjoint(super_blocks_[i]));
    }
  }
  kd.trailing = (m > 0 && m <= sub_blocks_.size()) ? sub_blocks_[m - 1] : DenseMatrix(2, 2);
  return kd;
}

KrylovDecomposition block_lanczos(const SparseMatrix& a, const DenseVector& y,
                                  const DenseVector& z, std::size_t m) {
  BlockLanczosProcess proc(a, y, z);
  proc.extend_to(m);
  return proc.snapshot(m);
}

// ---------------------------------------------------------------------------
// Rational Arnoldi
// ---------------------------------------------------------------------------

RationalArnoldiProcess::RationalArnoldiProcess(const SparseMatrix& a, const DenseVector& y,
                                               std::vector<Pole> poles, SolverFactory factory)
    : a_(a), poles_(std::move(poles)), factory_(std::move(factory)) {
  if (y.size() != a.dim()) throw DimensionMismatchError("rational_arnoldi: start vector length");
  start_norm_ = y.norm();
  if (start_norm_ == 0.0) throw ZeroStartVectorError("rational_arnoldi: zero start vector");
  DenseVector v0 = scaled(y, 1.0 / start_norm_);
  av_.push_back(matvec(a_, v0));
  gram_.push_back({dot(v0, av_[0])});
  v_.push_back(std::move(v0));
}

std::shared_ptr<LinearSolver> RationalArnoldiProcess::solver_for(Complex xi) {
  for (const auto& [key, solver] : solver_cache_)
    if (key == xi) return solver;
  auto solver = factory_(a_, xi);
  solver_cache_.emplace_back(xi, solver);
  return solver;
}

bool RationalArnoldiProcess::extend_to_dim(std::size_t dim) {
  while (v_.size() < dim && !breakdown_) {
    const std::size_t j = steps_done_;
    if (j >= poles_.size())
      throw std::invalid_argument("rational_arnoldi: pole sequence exhausted");
    const Pole& pole = poles_[j];
    DenseVector w;
    if (pole.infinite) {
      w = av_.back();
    } else {
      w = solver_for(pole.value)->solve(v_.back());
      ++solve_count_;
    }
    const double pre_norm = w.norm();
    for (const DenseVector& vi : v_) axpy(w, -dot(vi, w), vi);
    for (const DenseVector& vi : v_) axpy(w, -dot(vi, w), vi);
    ++steps_done_;
    const double norm = w.norm();
    if (norm <= kLuckyTol * std::max(pre_norm, 1e-300)) {
      breakdown_ = true;
      break;
    }
    DenseVector vk = scaled(w, 1.0 / norm);
    DenseVector avk = matvec(a_, vk);
    const std::size_t k = v_.size();
    for (std::size_t c = 0; c < k; ++c) gram_[c].push_back(dot(vk, av_[c]));
    std::vector<Complex> col(k + 1);
    for (std::size_t i = 0; i < k; ++i) col[i] = dot(v_[i], avk);
    col[k] = dot(vk, avk);
    gram_.push_back(std::move(col));
    v_.push_back(std::move(vk));
    av_.push_back(std::move(avk));
  }
  return v_.size() >= dim;
}

KrylovDecomposition RationalArnoldiProcess::snapshot(std::size_t dim) const {
  dim = std::min(dim, v_.size());
  KrylovDecomposition kd;
  kd.kind = KrylovKind::rational;
  kd.steps = dim;
  kd.start_norm = start_norm_;
  kd.basis = columns_to_matrix(v_, dim);
  kd.projected = DenseMatrix(dim, dim);
  for (std::size_t jcol = 0; jcol < dim; ++jcol)
    for (std::size_t i = 0; i < dim; ++i) kd.projected(i, jcol) = gram_[jcol][i];
  kd.trailing = DenseMatrix(1, 1);
  kd.poles.assign(poles_.begin(),
                  poles_.begin() + static_cast<std::ptrdiff_t>(std::min(
                                       poles_.size(), dim > 0 ? dim - 1 : 0)));
  kd.lucky_breakdown = breakdown_ && dim == v_.size();
  return kd;
}

KrylovDecomposition rational_arnoldi(const SparseMatrix& a, const DenseVector& y,
                                     const std::vector<Pole>& poles,
                                     const SolverFactory& factory) {
  RationalArnoldiProcess proc(a, y, poles, factory);
  proc.extend_to_dim(poles.size() + 1);
  return proc.snapshot(proc.dim());
}

// ---------------------------------------------------------------------------
// Ritz extremes
// ---------------------------------------------------------------------------

std::pair<double, double> ritz_extremes(const SparseMatrix& a, std::size_t probes,
                                        std::size_t steps) {
  if (!a.hermitian_hint()) throw NotHermitianError("ritz_extremes: Hermitian flag not set");
  probes = std::max<std::size_t>(probes, 1);
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (std::size_t p = 0; p < probes; ++p) {
    LanczosProcess proc(a, random_unit_vector(a.dim(), 0x5EEDWELLULL ^ (p * 9973 + 1)));
    proc.extend_to(std::min(steps, a.dim()));
    const TridiagEig eig = symmetric_tridiag_eig(proc.alphas(), proc.betas());
    if (eig.values.empty()) continue;
    lo = std::min(lo, eig.values.front());
    hi = std::max(hi, eig.values.back());
  }
  lo -= 0.01 * std::abs(lo);
  hi += 0.01 * std::abs(hi);
  return {lo, hi};
}

}  // namespace frechet
