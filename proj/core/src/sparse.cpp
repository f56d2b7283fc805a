#include "frechet/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frechet {

namespace {

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries,
                                         bool hermitian_hint) {
  for (const Triplet& t : entries) {
    if (t.row >= n || t.col >= n)
      throw DimensionMismatchError("SparseMatrix: triplet index out of range");
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag()))
      throw Error("SparseMatrix: non-finite entry");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n_ = n;
  m.hermitian_ = hermitian_hint;
  m.row_ptr_.assign(n + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t i = 0;
  for (std::size_t r = 0; r < n; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      Complex v = entries[i].value;
      const std::size_t c = entries[i].col;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;  // duplicates are summed
        ++i;
      }
      if (v != Complex(0.0)) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  return m;
}

SparseMatrix::SparseMatrix(const SparseMatrix& other)
    : n_(other.n_),
      row_ptr_(other.row_ptr_),
      col_idx_(other.col_idx_),
      values_(other.values_),
      hermitian_(other.hermitian_) {}

SparseMatrix& SparseMatrix::operator=(const SparseMatrix& other) {
  if (this != &other) {
    n_ = other.n_;
    row_ptr_ = other.row_ptr_;
    col_idx_ = other.col_idx_;
    values_ = other.values_;
    hermitian_ = other.hermitian_;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    adjoint_cache_.reset();
  }
  return *this;
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

const SparseMatrix::Csr& SparseMatrix::adjoint_csr() const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (adjoint_cache_) return *adjoint_cache_;
  }
  auto csr = std::make_shared<Csr>();
  csr->row_ptr.assign(n_ + 1, 0);
  csr->col_idx.resize(values_.size());
  csr->values.resize(values_.size());
  for (std::size_t c : col_idx_) ++csr->row_ptr[c + 1];
  for (std::size_t r = 0; r < n_; ++r) csr->row_ptr[r + 1] += csr->row_ptr[r];
  std::vector<std::size_t> cursor(csr->row_ptr.begin(), csr->row_ptr.end() - 1);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t c = col_idx_[p];
      const std::size_t q = cursor[c]++;
      csr->col_idx[q] = r;
      csr->values[q] = std::conj(values_[p]);
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!adjoint_cache_) adjoint_cache_ = std::move(csr);
  return *adjoint_cache_;
}

bool SparseMatrix::check_hermitian(double tol) const {
  const Csr& adj = adjoint_csr();
  double diff = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    std::size_t p = row_ptr_[r], pe = row_ptr_[r + 1];
    std::size_t q = adj.row_ptr[r], qe = adj.row_ptr[r + 1];
    while (p < pe || q < qe) {
      if (p < pe && (q >= qe || col_idx_[p] < adj.col_idx[q])) {
        diff += std::norm(values_[p]);
        ++p;
      } else if (q < qe && (p >= pe || adj.col_idx[q] < col_idx_[p])) {
        diff += std::norm(adj.values[q]);
        ++q;
      } else {
        diff += std::norm(values_[p] - adj.values[q]);
        ++p;
        ++q;
      }
    }
  }
  return std::sqrt(diff) <= tol * std::max(frobenius_norm(), 1e-300);
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(n_, n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      d(r, col_idx_[p]) = values_[p];
  return d;
}

DenseVector matvec(const SparseMatrix& a, const DenseVector& v) {
  if (v.size() != a.dim()) throw DimensionMismatchError("matvec: length");
  DenseVector y(a.dim());
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& val = a.values();
  for (std::size_t r = 0; r < a.dim(); ++r) {
    Complex s = 0.0;
    for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) s += val[p] * v[ci[p]];
    y[r] = s;
  }
  return y;
}

DenseVector matvec_adjoint(const SparseMatrix& a, const DenseVector& v) {
  if (v.size() != a.dim()) throw DimensionMismatchError("matvec_adjoint: length");
  const SparseMatrix::Csr& adj = a.adjoint_csr();
  DenseVector y(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r) {
    Complex s = 0.0;
    for (std::size_t p = adj.row_ptr[r]; p < adj.row_ptr[r + 1]; ++p)
      s += adj.values[p] * v[adj.col_idx[p]];
    y[r] = s;
  }
  return y;
}

SparseMatrix adjoint_of(const SparseMatrix& a) {
  const SparseMatrix::Csr& adj = a.adjoint_csr();
  std::vector<Triplet> trips;
  trips.reserve(a.nnz());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t p = adj.row_ptr[r]; p < adj.row_ptr[r + 1]; ++p)
      trips.push_back({r, adj.col_idx[p], adj.values[p]});
  return SparseMatrix::from_triplets(a.dim(), std::move(trips), a.hermitian_hint());
}

SparseMatrix scale(const SparseMatrix& a, Complex s) {
  std::vector<Triplet> trips;
  trips.reserve(a.nnz());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p)
      trips.push_back({r, a.col_idx()[p], s * a.values()[p]});
  const bool herm = a.hermitian_hint() && s.imag() == 0.0;
  return SparseMatrix::from_triplets(a.dim(), std::move(trips), herm);
}

// ---------------------------------------------------------------------------
// Matrix Market I/O
// ---------------------------------------------------------------------------

namespace {

struct MmHeader {
  bool coordinate = true;
  bool complex_field = false;
  enum class Symmetry { general, symmetric, hermitian } symmetry = Symmetry::general;
};

MmHeader parse_mm_header(const std::string& banner, std::size_t line_no) {
  std::istringstream ss(banner);
  std::string tag, object, format, field, symmetry;
  ss >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", line_no);
  if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", line_no);
  MmHeader h;
  const std::string fmt = lower(format);
  if (fmt == "coordinate")
    h.coordinate = true;
  else if (fmt == "array")
    h.coordinate = false;
  else
    throw ParseError("unsupported format '" + format + "'", line_no);
  const std::string fld = lower(field);
  if (fld == "real")
    h.complex_field = false;
  else if (fld == "complex")
    h.complex_field = true;
  else if (fld == "pattern" || fld == "integer")
    throw UnsupportedFieldError("Matrix Market field '" + fld + "' not supported");
  else
    throw ParseError("unknown field '" + field + "'", line_no);
  const std::string sym = lower(symmetry);
  if (sym == "general")
    h.symmetry = MmHeader::Symmetry::general;
  else if (sym == "symmetric")
    h.symmetry = MmHeader::Symmetry::symmetric;
  else if (sym == "hermitian")
    h.symmetry = MmHeader::Symmetry::hermitian;
  else
    throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
  return h;
}

// Reads the next line that is neither blank nor a comment; returns false at EOF.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;
    if (line[i] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  const MmHeader h = parse_mm_header(line, line_no);

  if (!next_content_line(in, line, line_no)) throw ParseError("missing size line", line_no);
  std::istringstream size_ss(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (h.coordinate) {
    if (!(size_ss >> rows >> cols >> nnz)) throw ParseError("bad coordinate size line", line_no);
  } else {
    if (!(size_ss >> rows >> cols)) throw ParseError("bad array size line", line_no);
    nnz = rows * cols;
  }
  if (rows <= 0 || cols <= 0 || rows != cols)
    throw ParseError("only square matrices are supported", line_no);
  const std::size_t n = static_cast<std::size_t>(rows);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nnz) * (h.symmetry == MmHeader::Symmetry::general ? 1 : 2));
  const bool expand = h.symmetry != MmHeader::Symmetry::general;
  const bool conj_mirror = h.symmetry == MmHeader::Symmetry::hermitian;

  if (h.coordinate) {
    for (long long k = 0; k < nnz; ++k) {
      if (!next_content_line(in, line, line_no))
        throw ParseError("unexpected end of file: expected " + std::to_string(nnz) + " entries",
                         line_no);
      std::istringstream es(line);
      long long i = 0, j = 0;
      double re = 0.0, im = 0.0;
      if (!(es >> i >> j >> re)) throw ParseError("bad coordinate entry", line_no);
      if (h.complex_field && !(es >> im)) throw ParseError("missing imaginary part", line_no);
      if (i < 1 || j < 1 || i > rows || j > cols)
        throw ParseError("index out of range", line_no);
      const std::size_t r = static_cast<std::size_t>(i - 1);
      const std::size_t c = static_cast<std::size_t>(j - 1);
      const Complex v(re, im);
      trips.push_back({r, c, v});
      if (expand && r != c) trips.push_back({c, r, conj_mirror ? std::conj(v) : v});
    }
  } else {
    // Array format stores the full column-major dense block (lower triangle
    // plus diagonal for symmetric/hermitian).
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i0 = expand ? j : 0;
      for (std::size_t i = i0; i < n; ++i) {
        if (!next_content_line(in, line, line_no))
          throw ParseError("unexpected end of file in array data", line_no);
        std::istringstream es(line);
        double re = 0.0, im = 0.0;
        if (!(es >> re)) throw ParseError("bad array entry", line_no);
        if (h.complex_field && !(es >> im)) throw ParseError("missing imaginary part", line_no);
        const Complex v(re, im);
        if (v == Complex(0.0)) continue;
        trips.push_back({i, j, v});
        if (expand && i != j) trips.push_back({j, i, conj_mirror ? std::conj(v) : v});
      }
    }
  }
  const bool herm_hint = h.symmetry == MmHeader::Symmetry::hermitian ||
                         (h.symmetry == MmHeader::Symmetry::symmetric && !h.complex_field);
  return SparseMatrix::from_triplets(n, std::move(trips), herm_hint);
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  bool complex_field = false;
  for (const Complex& v : a.values())
    if (v.imag() != 0.0) {
      complex_field = true;
      break;
    }
  std::string out;
  out += "%%MatrixMarket matrix coordinate ";
  out += complex_field ? "complex" : "real";
  out += " general\n";
  out += std::to_string(a.dim()) + " " + std::to_string(a.dim()) + " " + std::to_string(a.nnz()) +
         "\n";
  for (std::size_t r = 0; r < a.dim(); ++r) {
    for (std::size_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
      out += std::to_string(r + 1) + " " + std::to_string(a.col_idx()[p] + 1) + " ";
      format_double(out, a.values()[p].real());
      if (complex_field) {
        out += " ";
        format_double(out, a.values()[p].imag());
      }
      out += "\n";
    }
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << out;
}

DenseMatrix read_matrix_market_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  const MmHeader h = parse_mm_header(line, line_no);
  if (h.coordinate) throw ParseError("expected array format for dense matrix", line_no);
  if (h.symmetry != MmHeader::Symmetry::general)
    throw ParseError("dense reader supports general symmetry only", line_no);

  if (!next_content_line(in, line, line_no)) throw ParseError("missing size line", line_no);
  std::istringstream size_ss(line);
  long long rows = 0, cols = 0;
  if (!(size_ss >> rows >> cols) || rows < 0 || cols < 0)
    throw ParseError("bad array size line", line_no);
  DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!next_content_line(in, line, line_no))
        throw ParseError("unexpected end of file in array data", line_no);
      std::istringstream es(line);
      double re = 0.0, im = 0.0;
      if (!(es >> re)) throw ParseError("bad array entry", line_no);
      if (h.complex_field && !(es >> im)) throw ParseError("missing imaginary part", line_no);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

void write_matrix_market_dense(const std::string& path, const DenseMatrix& a) {
  bool complex_field = false;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
    if (a.data()[i].imag() != 0.0) {
      complex_field = true;
      break;
    }
  std::string out;
  out += "%%MatrixMarket matrix array ";
  out += complex_field ? "complex" : "real";
  out += " general\n";
  out += std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      format_double(out, a(i, j).real());
      if (complex_field) {
        out += " ";
        format_double(out, a(i, j).imag());
      }
      out += "\n";
    }
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << out;
}

DenseVector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<Complex> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '%' || line[i] == '#') continue;
    std::istringstream es(line);
    double re = 0.0, im = 0.0;
    if (!(es >> re)) throw ParseError("bad vector entry", line_no);
    if (!(es >> im)) im = 0.0;
    entries.emplace_back(re, im);
  }
  return DenseVector(std::move(entries));
}

void write_vector(const std::string& path, const DenseVector& v) {
  bool complex_field = false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].imag() != 0.0) {
      complex_field = true;
      break;
    }
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    format_double(out, v[i].real());
    if (complex_field) {
      out += " ";
      format_double(out, v[i].imag());
    }
    out += "\n";
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << out;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

SparseMatrix laplace2d(std::size_t k) {
  if (k < 1) throw DimensionMismatchError("laplace2d: k >= 1 required");
  const double h = 1.0 / static_cast<double>(k + 1);
  const double s = 1.0 / (h * h);
  const std::size_t n = k * k;
  std::vector<Triplet> trips;
  trips.reserve(5 * n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t p = i * k + j;
      trips.push_back({p, p, 4.0 * s});
      if (j > 0) trips.push_back({p, p - 1, -s});
      if (j + 1 < k) trips.push_back({p, p + 1, -s});
      if (i > 0) trips.push_back({p, p - k, -s});
      if (i + 1 < k) trips.push_back({p, p + k, -s});
    }
  }
  return SparseMatrix::from_triplets(n, std::move(trips), true);
}

SparseMatrix convdiff2d(std::size_t k, double pe1, double pe2) {
  if (k < 1) throw DimensionMismatchError("convdiff2d: k >= 1 required");
  const double h = 1.0 / static_cast<double>(k + 1);
  const double s = 1.0 / (h * h);
  const std::size_t n = k * k;
  // A = −(1/h²)(I⊗C1 + C2⊗I), C_i = tridiag(1+Pe_i, −2, 1−Pe_i); the leading
  // minus puts the spectrum in the right half-plane.
  std::vector<Triplet> trips;
  trips.reserve(5 * n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t p = i * k + j;
      trips.push_back({p, p, 4.0 * s});
      if (j > 0) trips.push_back({p, p - 1, -s * (1.0 + pe1)});
      if (j + 1 < k) trips.push_back({p, p + 1, -s * (1.0 - pe1)});
      if (i > 0) trips.push_back({p, p - k, -s * (1.0 + pe2)});
      if (i + 1 < k) trips.push_back({p, p + k, -s * (1.0 - pe2)});
    }
  }
  return SparseMatrix::from_triplets(n, std::move(trips), pe1 == 0.0 && pe2 == 0.0);
}

// ---------------------------------------------------------------------------
// LinearSolver
// ---------------------------------------------------------------------------

LinearSolver::LinearSolver(const SparseMatrix& a, Complex shift) : shift_(shift) {
  DenseMatrix m = a.to_dense();
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= shift;
  lu_ = std::make_shared<LuFactorization>(std::move(m));
}

DenseVector LinearSolver::solve(const DenseVector& rhs) const { return lu_->solve(rhs); }

DenseVector LinearSolver::solve_adjoint(const DenseVector& rhs) const {
  return lu_->solve_adjoint(rhs);
}

LinearSolver make_solver(const SparseMatrix& a, Complex shift) { return {a, shift}; }

}  // namespace frechet
