#include "frechet/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace frechet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool cond, const char* what) {
  if (!cond) throw DimensionMismatchError(what);
}

}  // namespace

void DenseVector::check_finite() const {
  for (const Complex& z : data_)
    if (!finite(z)) throw Error("DenseVector: non-finite entry");
}

double DenseVector::norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw DimensionMismatchError("DenseMatrix: entry count");
  for (const Complex& z : data_)
    if (!finite(z)) throw Error("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseVector DenseMatrix::column(std::size_t j) const {
  DenseVector v(rows_);
  const Complex* c = col(j);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = c[i];
  return v;
}

void DenseMatrix::set_column(std::size_t j, const DenseVector& v) {
  require(v.size() == rows_, "set_column: length");
  Complex* c = col(j);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = v[i];
}

void DenseMatrix::place(std::size_t i0, std::size_t j0, const DenseMatrix& block) {
  require(i0 + block.rows() <= rows_ && j0 + block.cols() <= cols_, "place: out of range");
  for (std::size_t j = 0; j < block.cols(); ++j) {
    const Complex* src = block.col(j);
    Complex* dst = col(j0 + j) + i0;
    std::copy(src, src + block.rows(), dst);
  }
}

DenseMatrix DenseMatrix::slice(std::size_t i0, std::size_t j0, std::size_t rows,
                               std::size_t cols) const {
  require(i0 + rows <= rows_ && j0 + cols <= cols_, "slice: out of range");
  DenseMatrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex* src = col(j0 + j) + i0;
    std::copy(src, src + rows, out.col(j));
  }
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add: shape");
  DenseMatrix c(a.rows(), a.cols());
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub: shape");
  DenseMatrix c(a.rows(), a.cols());
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

DenseMatrix operator*(Complex s, const DenseMatrix& a) {
  DenseMatrix c(a.rows(), a.cols());
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) c.data()[i] = s * a.data()[i];
  return c;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimension");
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (std::size_t j = 0; j < n; ++j) {
    Complex* cj = c.col(j);
    for (std::size_t p = 0; p < k; ++p) {
      const Complex bpj = b(p, j);
      if (bpj == Complex(0.0)) continue;
      const Complex* ap = a.col(p);
      for (std::size_t i = 0; i < m; ++i) cj[i] += ap[i] * bpj;
    }
  }
  return c;
}

DenseVector operator*(const DenseMatrix& a, const DenseVector& x) {
  require(a.cols() == x.size(), "matvec: length");
  DenseVector y(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const Complex xj = x[j];
    if (xj == Complex(0.0)) continue;
    const Complex* aj = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += aj[i] * xj;
  }
  return y;
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
  require(a.size() == b.size(), "vector add: length");
  DenseVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
  require(a.size() == b.size(), "vector sub: length");
  DenseVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

DenseVector operator*(Complex s, const DenseVector& a) {
  DenseVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

Complex dot(const DenseVector& a, const DenseVector& b) {
  require(a.size() == b.size(), "dot: length");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix c(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(j, i) = std::conj(a(i, j));
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix c(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(j, i) = a(i, j);
  return c;
}

DenseMatrix conjugate(const DenseMatrix& a) {
  DenseMatrix c(a.rows(), a.cols());
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) c.data()[i] = std::conj(a.data()[i]);
  return c;
}

DenseVector conjugate(const DenseVector& a) {
  DenseVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::conj(a[i]);
  return c;
}

DenseMatrix adjoint_times(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), "adjoint_times: shape");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const Complex* bj = b.col(j);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const Complex* ai = a.col(i);
      Complex s = 0.0;
      for (std::size_t p = 0; p < a.rows(); ++p) s += std::conj(ai[p]) * bj[p];
      c(i, j) = s;
    }
  }
  return c;
}

DenseVector adjoint_times(const DenseMatrix& a, const DenseVector& x) {
  require(a.rows() == x.size(), "adjoint_times: length");
  DenseVector y(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const Complex* aj = a.col(j);
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::conj(aj[i]) * x[i];
    y[j] = s;
  }
  return y;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a.data()[i]);
  return std::sqrt(s);
}

double one_norm(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    const Complex* aj = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(aj[i]);
    best = std::max(best, s);
  }
  return best;
}

double max_abs(const DenseMatrix& a) {
  double best = 0.0;
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(a.data()[i]));
  return best;
}

DenseMatrix outer(const DenseVector& u, const DenseVector& v) {
  DenseMatrix c(u.size(), v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Complex vj = std::conj(v[j]);
    Complex* cj = c.col(j);
    for (std::size_t i = 0; i < u.size(); ++i) cj[i] = u[i] * vj;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Householder QR
// ---------------------------------------------------------------------------

QrResult householder_qr(const DenseMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows < cols) throw DimensionMismatchError("householder_qr: rows < cols");

  DenseMatrix r = m;
  std::vector<std::vector<Complex>> vs(cols);
  std::vector<double> taus(cols, 0.0);

  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t len = rows - k;
    std::vector<Complex> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = r(k + i, k);
    double sigma = 0.0;
    for (const Complex& z : v) sigma += std::norm(z);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) {
      vs[k] = std::move(v);
      continue;
    }
    const Complex pivot = v[0];
    const Complex phase = (pivot == Complex(0.0)) ? Complex(1.0) : pivot / std::abs(pivot);
    const Complex beta = -phase * sigma;
    v[0] -= beta;
    double vv = 0.0;
    for (const Complex& z : v) vv += std::norm(z);
    if (vv == 0.0) {
      r(k, k) = beta;
      vs[k] = std::move(v);
      continue;
    }
    const double tau = 2.0 / vv;

    // Apply H = I − tau v v^H to the trailing columns of R.
    for (std::size_t j = k; j < cols; ++j) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * r(k + i, j);
      s *= tau;
      for (std::size_t i = 0; i < len; ++i) r(k + i, j) -= s * v[i];
    }
    r(k, k) = beta;
    for (std::size_t i = k + 1; i < rows; ++i) r(i, k) = 0.0;
    vs[k] = std::move(v);
    taus[k] = tau;
  }

  // Accumulate the thin Q by applying reflectors to the leading identity block.
  DenseMatrix q(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) q(j, j) = 1.0;
  for (std::size_t k = cols; k-- > 0;) {
    if (taus[k] == 0.0) continue;
    const std::vector<Complex>& v = vs[k];
    const std::size_t len = rows - k;
    for (std::size_t j = 0; j < cols; ++j) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * q(k + i, j);
      s *= taus[k];
      for (std::size_t i = 0; i < len; ++i) q(k + i, j) -= s * v[i];
    }
  }

  DenseMatrix r_small(cols, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i <= j; ++i) r_small(i, j) = r(i, j);
  return {std::move(q), std::move(r_small)};
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal QL with implicit shifts
// ---------------------------------------------------------------------------

namespace {

// Core QL sweep on (d, e); Rotation is called as rot(i, c, s) for every plane
// rotation in columns (i, i+1) so callers can accumulate eigenvectors.
template <class Rotation>
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Rotation&& rot) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);  // e[n-1] used as workspace

  auto hypot2 = [](double a, double b) { return std::hypot(a, b); };

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t iter = 0;
    std::size_t mm;
    do {
      for (mm = l; mm + 1 < n; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= kEps * dd) break;
      }
      if (mm != l) {
        if (++iter > 60) throw Error("tridiagonal QL: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = mm; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
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
          rot(i, c, s);
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }
}

}  // namespace

TridiagEig symmetric_tridiag_eig(std::vector<double> diag, std::vector<double> sub) {
  const std::size_t n = diag.size();
  if (sub.size() + 1 != n && !(n == 0 && sub.empty()))
    throw DimensionMismatchError("symmetric_tridiag_eig: sub length");
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = sub[i];

  std::vector<double> row0(n, 0.0);
  if (n > 0) row0[0] = 1.0;
  ql_implicit(diag, e, [&](std::size_t i, double c, double s) {
    const double a = row0[i], b = row0[i + 1];
    row0[i + 1] = s * a + c * b;
    row0[i] = c * a - s * b;
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  TridiagEig out;
  out.values.resize(n);
  out.first_components.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = diag[order[i]];
    out.first_components[i] = row0[order[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

HermitianEig hermitian_eig(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw DimensionMismatchError("hermitian_eig: square input required");

  // Symmetry check relative to the Frobenius norm.
  const double scale = frobenius_norm(m);
  double asym = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i)
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw NotHermitianError("hermitian_eig: input not Hermitian");

  DenseMatrix a = m;
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = Complex(a(j, j).real(), 0.0);
    for (std::size_t i = 0; i < j; ++i) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }

  DenseMatrix q = DenseMatrix::identity(n);
  std::vector<double> d(n, 0.0);
  std::vector<Complex> e(n > 0 ? n - 1 : 0, Complex(0.0));

  // Householder reduction to Hermitian tridiagonal form.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<Complex> x(len);
    for (std::size_t i = 0; i < len; ++i) x[i] = a(k + 1 + i, k);
    double sigma = 0.0;
    for (const Complex& z : x) sigma += std::norm(z);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) {
      e[k] = 0.0;
      continue;
    }
    const Complex phase = (x[0] == Complex(0.0)) ? Complex(1.0) : x[0] / std::abs(x[0]);
    const Complex beta = -phase * sigma;
    std::vector<Complex> v = x;
    v[0] -= beta;
    double vv = 0.0;
    for (const Complex& z : v) vv += std::norm(z);
    if (vv == 0.0) {
      e[k] = beta;
      continue;
    }
    const double tau = 2.0 / vv;

    // p = tau·A22·v ; w = p − (tau/2)(v^H p) v ; A22 ← A22 − v w^H − w v^H
    std::vector<Complex> p(len, Complex(0.0));
    for (std::size_t j = 0; j < len; ++j) {
      const Complex vj = v[j];
      if (vj == Complex(0.0)) continue;
      for (std::size_t i = 0; i < len; ++i) p[i] += a(k + 1 + i, k + 1 + j) * vj;
    }
    for (Complex& z : p) z *= tau;
    Complex vhp = 0.0;
    for (std::size_t i = 0; i < len; ++i) vhp += std::conj(v[i]) * p[i];
    const Complex kappa = 0.5 * tau * vhp;
    std::vector<Complex> w(len);
    for (std::size_t i = 0; i < len; ++i) w[i] = p[i] - kappa * v[i];
    for (std::size_t j = 0; j < len; ++j) {
      const Complex wj = std::conj(w[j]);
      const Complex vj = std::conj(v[j]);
      for (std::size_t i = 0; i < len; ++i)
        a(k + 1 + i, k + 1 + j) -= v[i] * wj + w[i] * vj;
    }
    e[k] = beta;
    a(k + 1, k) = beta;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;

    // Q ← Q·H on trailing columns.
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += q(i, k + 1 + j) * v[j];
      s *= tau;
      for (std::size_t j = 0; j < len; ++j) q(i, k + 1 + j) -= s * std::conj(v[j]);
    }
  }
  if (n >= 2) e[n - 2] = a(n - 1, n - 2);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();

  // Phase-scale columns so the subdiagonal becomes real nonnegative.
  std::vector<double> er(n > 0 ? n - 1 : 0, 0.0);
  Complex delta = 1.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double mag = std::abs(e[j]);
    er[j] = mag;
    const Complex u = (mag == 0.0) ? Complex(1.0) : e[j] / mag;
    delta *= u;
    for (std::size_t i = 0; i < n; ++i) q(i, j + 1) *= delta;
    // After scaling column j+1 by delta, entry (j+1, j) of D^H T D is |e_j|.
  }

  std::vector<double> dd = d, ee(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) ee[i] = er[i];
  ql_implicit(dd, ee, [&](std::size_t i, double c, double s) {
    Complex* qi = q.col(i);
    Complex* qi1 = q.col(i + 1);
    for (std::size_t r2 = 0; r2 < n; ++r2) {
      const Complex a2 = qi[r2], b2 = qi1[r2];
      qi1[r2] = s * a2 + c * b2;
      qi[r2] = c * a2 - s * b2;
    }
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a2, std::size_t b2) {
    return dd[a2] < dd[b2];
  });
  HermitianEig out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = dd[order[j]];
    const Complex* src = q.col(order[j]);
    std::copy(src, src + n, out.vectors.col(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting, banded-aware
// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(DenseMatrix m) : lu_(std::move(m)) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw DimensionMismatchError("LU: square input required");
  perm_.resize(n);

  // Detect bandwidths so structured inputs stay cheap.
  std::size_t lb = 0, ub = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex* cj = lu_.col(j);
    for (std::size_t i = 0; i < n; ++i) {
      if (cj[i] != Complex(0.0)) {
        if (i > j) lb = std::max(lb, i - j);
        if (j > i) ub = std::max(ub, j - i);
      }
    }
  }
  lower_bw_ = lb;
  upper_bw_ = std::min(n == 0 ? 0 : n - 1, ub + lb);  // pivoting widens U by at most lb

  const double pivot_floor = kEps * frobenius_norm(lu_);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t row_end = std::min(n - 1, k + lower_bw_);
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i <= row_end; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= pivot_floor)
      throw SingularError("LU: pivot below roundoff threshold");
    perm_[k] = piv;
    const std::size_t col_end = std::min(n - 1, k + upper_bw_);
    if (piv != k) {
      for (std::size_t j = k; j <= col_end; ++j) std::swap(lu_(k, j), lu_(piv, j));
      for (std::size_t j = 0; j < k; ++j) std::swap(lu_(k, j), lu_(piv, j));  // L part
    }
    const Complex pivot = lu_(k, k);
    for (std::size_t i = k + 1; i <= row_end; ++i) lu_(i, k) /= pivot;
    for (std::size_t j = k + 1; j <= col_end; ++j) {
      const Complex ukj = lu_(k, j);
      if (ukj == Complex(0.0)) continue;
      Complex* cj = lu_.col(j);
      for (std::size_t i = k + 1; i <= row_end; ++i) cj[i] -= lu_(i, k) * ukj;
    }
  }
}

DenseVector LuFactorization::solve(const DenseVector& rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw DimensionMismatchError("LU solve: rhs length");
  DenseVector x = rhs;
  for (std::size_t k = 0; k < n; ++k) {
    if (perm_[k] != k) std::swap(x[k], x[perm_[k]]);
    const Complex xk = x[k];
    if (xk == Complex(0.0)) continue;
    const std::size_t row_end = std::min(n - 1, k + lower_bw_);
    for (std::size_t i = k + 1; i <= row_end; ++i) x[i] -= lu_(i, k) * xk;
  }
  for (std::size_t k = n; k-- > 0;) {
    x[k] /= lu_(k, k);
    const Complex xk = x[k];
    if (xk == Complex(0.0)) continue;
    const std::size_t top = (k > upper_bw_) ? k - upper_bw_ : 0;
    const Complex* ck = lu_.col(k);
    for (std::size_t i = top; i < k; ++i) x[i] -= ck[i] * xk;
  }
  return x;
}

DenseMatrix LuFactorization::solve(const DenseMatrix& rhs) const {
  if (rhs.rows() != dim()) throw DimensionMismatchError("LU solve: rhs rows");
  DenseMatrix x(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) x.set_column(j, solve(rhs.column(j)));
  return x;
}

DenseVector LuFactorization::solve_adjoint(const DenseVector& rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) throw DimensionMismatchError("LU adjoint solve: rhs length");
  // M = P^T L U  =>  M^H x = rhs  <=>  U^H w = rhs, L^H v = w, x = P^T v.
  DenseVector x = rhs;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t top = (k > upper_bw_) ? k - upper_bw_ : 0;
    const Complex* ck = lu_.col(k);
    Complex s = x[k];
    for (std::size_t i = top; i < k; ++i) s -= std::conj(ck[i]) * x[i];
    x[k] = s / std::conj(lu_(k, k));
  }
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t row_end = std::min(n - 1, k + lower_bw_);
    Complex s = x[k];
    for (std::size_t i = k + 1; i <= row_end; ++i) s -= std::conj(lu_(i, k)) * x[i];
    x[k] = s;
    // permutations are applied in reverse on the way out
  }
  for (std::size_t k = n; k-- > 0;)
    if (perm_[k] != k) std::swap(x[k], x[perm_[k]]);
  return x;
}

DenseVector lu_solve(const DenseMatrix& m, const DenseVector& rhs) {
  return LuFactorization(m).solve(rhs);
}

// ---------------------------------------------------------------------------
// One-sided Jacobi singular values
// ---------------------------------------------------------------------------

std::vector<double> small_svd_values(const DenseMatrix& m) {
  DenseMatrix w = (m.rows() >= m.cols()) ? m : adjoint(m);
  const std::size_t cols = w.cols(), rows = w.rows();

  std::vector<double> colsq(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex* cj = w.col(j);
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(cj[i]);
    colsq[j] = s;
  }

  const double tol = 1e-15;
  for (std::size_t sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double a = colsq[p], b = colsq[q];
        if (a == 0.0 || b == 0.0) continue;
        Complex cpq = 0.0;
        Complex* wp = w.col(p);
        Complex* wq = w.col(q);
        for (std::size_t i = 0; i < rows; ++i) cpq += std::conj(wp[i]) * wq[i];
        const double mag = std::abs(cpq);
        if (mag <= tol * std::sqrt(a * b)) continue;
        rotated = true;
        const Complex phi = cpq / mag;
        const double zeta = (b - a) / (2.0 * mag);
        const double t = ((zeta >= 0) ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(zeta, 1.0));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        const Complex sp = std::conj(phi) * sn;  // applied to column q inside p-update
        const Complex sq = phi * sn;
        double na = 0.0, nb = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          const Complex u = wp[i], v = wq[i];
          wp[i] = cs * u - sp * v;
          wq[i] = sq * u + cs * v;
          na += std::norm(wp[i]);
          nb += std::norm(wq[i]);
        }
        colsq[p] = na;
        colsq[q] = nb;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) sv[j] = std::sqrt(colsq[j]);
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

double spectral_norm(const DenseMatrix& a, std::size_t max_iters, double tol) {
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() == 0) return 0.0;
  DenseVector x(n);
  // Fixed deterministic start with nonzero projection onto the top singular space
  // in all but adversarial cases.
  for (std::size_t i = 0; i < n; ++i)
    x[i] = Complex(1.0 + 0.37 * static_cast<double>(i % 7), 0.13 * static_cast<double>(i % 5));
  double nx = x.norm();
  for (std::size_t i = 0; i < n; ++i) x[i] /= nx;
  double sigma = 0.0;
  for (std::size_t it = 0; it < max_iters; ++it) {
    DenseVector y = a * x;
    DenseVector z = adjoint_times(a, y);
    const double nz = z.norm();
    if (nz == 0.0) return 0.0;
    const double estimate = std::sqrt(nz);
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / nz;
    if (it > 3 && std::abs(estimate - sigma) <= tol * estimate) return estimate;
    sigma = estimate;
  }
  return sigma;
}

double inverse_one_norm_estimate(const LuFactorization& lu) {
  const std::size_t n = lu.dim();
  if (n == 0) return 0.0;
  DenseVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(n);
  double est = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    DenseVector y = lu.solve(x);
    double ynorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) ynorm += std::abs(y[i]);
    est = std::max(est, ynorm);
    DenseVector xi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double m2 = std::abs(y[i]);
      xi[i] = (m2 == 0.0) ? Complex(1.0) : y[i] / m2;
    }
    DenseVector z = lu.solve_adjoint(xi);
    std::size_t best = 0;
    double zmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::abs(z[i]);
      if (v > zmax) {
        zmax = v;
        best = i;
      }
    }
    double xz = 0.0;
    for (std::size_t i = 0; i < n; ++i) xz += std::abs(z[i] * x[i]);
    if (zmax <= xz + 1e-15) break;
    x = DenseVector(n);
    x[best] = 1.0;
  }
  return est;
}

}  // namespace frechet
