#include "frechet/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace frechet {

namespace {

constexpr double kPi = 3.14159265358979323846;

DenseMatrix inverse_of(const DenseMatrix& m) {
  return LuFactorization(m).solve(DenseMatrix::identity(m.rows()));
}

}  // namespace

FunctionSpec FunctionSpec::make_exp(Complex scale) {
  FunctionSpec f;
  f.kind = Kind::exp;
  f.scale = scale;
  return f;
}

FunctionSpec FunctionSpec::make_log() {
  FunctionSpec f;
  f.kind = Kind::log;
  return f;
}

FunctionSpec FunctionSpec::make_inv_pow(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("FunctionSpec: inv_pow requires sigma in (0,1)");
  FunctionSpec f;
  f.kind = Kind::inv_pow;
  f.sigma = sigma;
  return f;
}

FunctionSpec FunctionSpec::make_stieltjes(std::function<QuadRule(std::size_t)> generator) {
  FunctionSpec f;
  f.kind = Kind::stieltjes_quad;
  f.measure = std::move(generator);
  return f;
}

Complex FunctionSpec::eval(Complex z) const {
  switch (kind) {
    case Kind::exp:
      return std::exp(scale * z);
    case Kind::log:
      return std::log(z);
    case Kind::inv_pow:
      return std::pow(z, -sigma);
    case Kind::stieltjes_quad: {
      Complex prev = 0.0;
      for (std::size_t k = 64; k <= 4096; k *= 2) {
        const QuadRule rule = measure(k);
        Complex s = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
          s += rule.weights[j] / (z + rule.nodes[j]);
        if (k > 64 && std::abs(s - prev) <= 1e-13 * std::abs(s)) return s;
        prev = s;
      }
      return prev;
    }
  }
  return 0.0;
}

Complex FunctionSpec::derivative(Complex z) const {
  switch (kind) {
    case Kind::exp:
      return scale * std::exp(scale * z);
    case Kind::log:
      return 1.0 / z;
    case Kind::inv_pow:
      return -sigma * std::pow(z, -sigma - 1.0);
    case Kind::stieltjes_quad: {
      Complex prev = 0.0;
      for (std::size_t k = 64; k <= 4096; k *= 2) {
        const QuadRule rule = measure(k);
        Complex s = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const Complex r = z + rule.nodes[j];
          s -= rule.weights[j] / (r * r);
        }
        if (k > 64 && std::abs(s - prev) <= 1e-13 * std::abs(s)) return s;
        prev = s;
      }
      return prev;
    }
  }
  return 0.0;
}

FunctionSpec FunctionSpec::conjugated() const {
  FunctionSpec f = *this;
  f.scale = std::conj(scale);
  return f;
}

std::string FunctionSpec::description() const {
  char buf[96];
  switch (kind) {
    case Kind::exp:
      std::snprintf(buf, sizeof(buf), "exp scale=%.17g %.17g", scale.real(), scale.imag());
      return buf;
    case Kind::log:
      return "log";
    case Kind::inv_pow:
      std::snprintf(buf, sizeof(buf), "invpow sigma=%.17g", sigma);
      return buf;
    case Kind::stieltjes_quad:
      return "stieltjes-quad";
  }
  return "";
}

Complex divided_difference(const FunctionSpec& f, double a, double b) {
  switch (f.kind) {
    case FunctionSpec::Kind::exp: {
      // (e^{ta} - e^{tb})/(a-b) = t·e^{t(a+b)/2}·sinh(t(a-b)/2)/(t(a-b)/2)
      const Complex t = f.scale;
      const Complex mid = t * (0.5 * (a + b));
      const Complex half = t * (0.5 * (a - b));
      Complex sinhc;
      if (std::abs(half) < 1e-5) {
        const Complex h2 = half * half;
        sinhc = 1.0 + h2 / 6.0 + h2 * h2 / 120.0;
      } else {
        sinhc = std::sinh(half) / half;
      }
      return t * std::exp(mid) * sinhc;
    }
    case FunctionSpec::Kind::log: {
      if (a == b) return 1.0 / a;
      const double r = (a - b) / (a + b);
      double atanhc;
      if (std::abs(r) < 1e-5) {
        const double r2 = r * r;
        atanhc = 1.0 + r2 / 3.0 + r2 * r2 / 5.0;
      } else {
        atanhc = std::atanh(r) / r;
      }
      return 2.0 * atanhc / (a + b);
    }
    case FunctionSpec::Kind::inv_pow: {
      if (a == b) return -f.sigma * std::pow(a, -f.sigma - 1.0);
      // (a^{-s} - b^{-s})/(a-b) = b^{-s}·expm1(-s·log1p((a-b)/b))/(a-b)
      return std::pow(b, -f.sigma) * std::expm1(-f.sigma * std::log1p((a - b) / b)) / (a - b);
    }
    case FunctionSpec::Kind::stieltjes_quad: {
      Complex prev = 0.0;
      for (std::size_t k = 64; k <= 4096; k *= 2) {
        const QuadRule rule = f.measure(k);
        Complex s = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
          s -= rule.weights[j] / ((a + rule.nodes[j]) * (b + rule.nodes[j]));
        if (k > 64 && std::abs(s - prev) <= 1e-13 * std::abs(s)) return s;
        prev = s;
      }
      return prev;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// expm: scaling and squaring, Padé degree 13
// ---------------------------------------------------------------------------

DenseMatrix expm(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatchError("expm: square input required");
  const std::size_t n = m.rows();
  const double theta13 = 5.371920351148152;
  const double nrm = one_norm(m);
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));

  DenseMatrix a = m;
  if (s > 0) {
    const Complex f = std::ldexp(1.0, -s);
    a = f * a;
  }

  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};

  const DenseMatrix ident = DenseMatrix::identity(n);
  const DenseMatrix a2 = a * a;
  const DenseMatrix a4 = a2 * a2;
  const DenseMatrix a6 = a4 * a2;

  DenseMatrix tmp = Complex(b[13]) * a6 + Complex(b[11]) * a4 + Complex(b[9]) * a2;
  DenseMatrix u = a6 * tmp;
  u = u + Complex(b[7]) * a6 + Complex(b[5]) * a4 + Complex(b[3]) * a2 + Complex(b[1]) * ident;
  u = a * u;

  tmp = Complex(b[12]) * a6 + Complex(b[10]) * a4 + Complex(b[8]) * a2;
  DenseMatrix v = a6 * tmp;
  v = v + Complex(b[6]) * a6 + Complex(b[4]) * a4 + Complex(b[2]) * ident;

  DenseMatrix num = v + u;
  DenseMatrix den = v - u;
  DenseMatrix r = LuFactorization(std::move(den)).solve(num);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

// ---------------------------------------------------------------------------
// logm: inverse scaling and squaring with Denman-Beavers square roots
// ---------------------------------------------------------------------------

namespace {

DenseMatrix principal_sqrt(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix y = m;
  DenseMatrix z = DenseMatrix::identity(n);
  double prev_diff = std::numeric_limits<double>::max();
  for (int iter = 0; iter < 60; ++iter) {
    DenseMatrix yinv, zinv;
    try {
      yinv = inverse_of(y);
      zinv = inverse_of(z);
    } catch (const SingularError&) {
      throw SpectrumOnClosedNegativeAxisError("logm: square-root iteration hit a singular iterate");
    }
    DenseMatrix ynew = Complex(0.5) * (y + zinv);
    DenseMatrix znew = Complex(0.5) * (z + yinv);
    const double diff = frobenius_norm(ynew - y);
    const double base = std::max(frobenius_norm(ynew), 1e-300);
    y = std::move(ynew);
    z = std::move(znew);
    if (diff <= 1e-14 * base) return y;
    // Quadratic convergence stalls or reverses only when eigenvalues sit on
    // the closed negative axis.
    if (iter > 20 && diff > 0.5 * prev_diff && diff > 1e-10 * base)
      throw SpectrumOnClosedNegativeAxisError("logm: square-root iteration stagnated");
    prev_diff = diff;
  }
  throw SpectrumOnClosedNegativeAxisError("logm: square-root iteration did not converge");
}

}  // namespace

DenseMatrix logm(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatchError("logm: square input required");
  const std::size_t n = m.rows();
  const DenseMatrix ident = DenseMatrix::identity(n);

  DenseMatrix a = m;
  int s = 0;
  while (one_norm(a - ident) > 0.25) {
    if (s > 60) throw SpectrumOnClosedNegativeAxisError("logm: scaling did not reduce the norm");
    a = principal_sqrt(a);
    ++s;
  }

  // Degree-7 diagonal Padé of log(I+X) in partial-fraction form: the nodes
  // and weights are the 7-point Gauss-Legendre rule on [0,1].
  const DenseMatrix x = a - ident;
  const QuadRule rule = gauss_legendre01(7);
  DenseMatrix r(n, n);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    DenseMatrix den = ident + Complex(rule.nodes[j]) * x;
    r = r + Complex(rule.weights[j]) * LuFactorization(std::move(den)).solve(x);
  }
  return Complex(std::ldexp(1.0, s)) * r;
}

// ---------------------------------------------------------------------------
// Stieltjes evaluation
// ---------------------------------------------------------------------------

namespace {

// Geometric-mean spectral scale used to center the inv_pow quadrature rule.
double invpow_scale_hint(const DenseMatrix& m) {
  const double hi = std::max(one_norm(m), 1e-300);
  double lo = hi;
  try {
    LuFactorization lu(m);
    const double inv_norm = inverse_one_norm_estimate(lu);
    if (inv_norm > 0.0) lo = 1.0 / inv_norm;
  } catch (const SingularError&) {
    // fall back to hi; the resolvent solves will report the problem
  }
  lo = std::min(lo, hi);
  return std::sqrt(lo * hi);
}

QuadRule stieltjes_rule(const FunctionSpec& f, std::size_t count, double scale_hint) {
  if (f.kind == FunctionSpec::Kind::inv_pow)
    return inv_pow_resolvent_rule(count, f.sigma, scale_hint);
  return f.measure(count);
}

DenseMatrix stieltjes_eval_fixed(const DenseMatrix& m, const QuadRule& rule) {
  const std::size_t n = m.rows();
  DenseMatrix acc(n, n);
  const DenseMatrix ident = DenseMatrix::identity(n);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    DenseMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += rule.nodes[j];
    acc = acc + Complex(rule.weights[j]) * LuFactorization(std::move(shifted)).solve(ident);
  }
  return acc;
}

}  // namespace

DenseMatrix stieltjes_eval(const DenseMatrix& m, const FunctionSpec& f) {
  if (m.rows() != m.cols()) throw DimensionMismatchError("stieltjes_eval: square input required");
  if (!f.is_stieltjes())
    throw UnsupportedFunctionError("stieltjes_eval: function is not a Stieltjes kind");
  const double scale_hint =
      f.kind == FunctionSpec::Kind::inv_pow ? invpow_scale_hint(m) : 1.0;

  DenseMatrix prev;
  for (std::size_t count = 32; count <= 4096; count *= 2) {
    DenseMatrix cur = stieltjes_eval_fixed(m, stieltjes_rule(f, count, scale_hint));
    if (count > 32) {
      const double diff = frobenius_norm(cur - prev);
      const double base = frobenius_norm(cur);
      if (diff <= 1e-12 * std::max(base, 1e-300)) return cur;
    }
    prev = std::move(cur);
  }
  throw QuadratureNotConvergedError("stieltjes_eval: node cap reached without convergence");
}

// ---------------------------------------------------------------------------
// Block Fréchet kernel
// ---------------------------------------------------------------------------

namespace {

DenseMatrix assemble_block(const DenseMatrix& g, const DenseMatrix& h_adj, const DenseMatrix& e) {
  const std::size_t mg = g.rows(), mh = h_adj.rows();
  DenseMatrix b(mg + mh, mg + mh);
  b.place(0, 0, g);
  b.place(0, mg, e);
  b.place(mg, mg, h_adj);
  return b;
}

bool same_matrix(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const std::size_t n = a.rows() * a.cols();
  for (std::size_t i = 0; i < n; ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

// X = Σ_j coeff_j (G + t_j)^{-1} u v^H (H + t_j)^{-1} accumulated per node for
// resolvent-sum representations of f. `shift_of_t` maps the quadrature
// parameter onto the two resolvents: Stieltjes uses (M + tI), the logarithm
// uses t(M−I)+I.
struct ResolventPair {
  DenseMatrix p;
  DenseMatrix q;
  bool shared;
};

template <class MakePair>
DenseMatrix rank1_resolvent_sum(const DenseVector& u, const DenseVector& v, const QuadRule& rule,
                                double sign, MakePair&& make_pair_at) {
  const std::size_t mg = u.size(), mh = v.size();
  DenseMatrix x(mg, mh);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    ResolventPair pair = make_pair_at(rule.nodes[j]);
    LuFactorization lu_p(std::move(pair.p));
    DenseVector xs = lu_p.solve(u);
    DenseVector ws;
    if (pair.shared) {
      ws = lu_p.solve_adjoint(v);
    } else {
      LuFactorization lu_q(std::move(pair.q));
      ws = lu_q.solve_adjoint(v);
    }
    const Complex coeff(sign * rule.weights[j]);
    for (std::size_t c = 0; c < mh; ++c) {
      const Complex wc = std::conj(ws[c]);
      Complex* xc = x.col(c);
      for (std::size_t r = 0; r < mg; ++r) xc[r] += coeff * xs[r] * wc;
    }
  }
  return x;
}

DenseMatrix offdiag_rank1_quadrature(const DenseMatrix& g, const DenseMatrix& h_adj,
                                     const DenseVector& u, const DenseVector& v,
                                     const FunctionSpec& f) {
  const bool shared = same_matrix(g, h_adj);
  const std::size_t mg = g.rows();

  const bool is_log = f.kind == FunctionSpec::Kind::log;
  double scale_hint = 1.0;
  if (f.kind == FunctionSpec::Kind::inv_pow) {
    scale_hint = invpow_scale_hint(g);
    if (!shared) scale_hint = std::sqrt(scale_hint * invpow_scale_hint(h_adj));
  }

  auto make_pair = [&](double t) -> ResolventPair {
    ResolventPair pair;
    pair.shared = shared;
    if (is_log) {
      // t(M−I)+I = tM + (1−t)I
      pair.p = Complex(t) * g;
      for (std::size_t i = 0; i < mg; ++i) pair.p(i, i) += 1.0 - t;
      if (!shared) {
        pair.q = Complex(t) * h_adj;
        for (std::size_t i = 0; i < h_adj.rows(); ++i) pair.q(i, i) += 1.0 - t;
      }
    } else {
      pair.p = g;
      for (std::size_t i = 0; i < mg; ++i) pair.p(i, i) += t;
      if (!shared) {
        pair.q = h_adj;
        for (std::size_t i = 0; i < h_adj.rows(); ++i) pair.q(i, i) += t;
      }
    }
    return pair;
  };

  // Log: X = +∫₀¹ P(t)^{-1} u v^H Q(t)^{-1} dt (Gauss-Legendre).
  // Stieltjes: X = −Σ_j w_j (G+t_j)^{-1} u v^H (H+t_j)^{-1}.
  const double sign = is_log ? 1.0 : -1.0;
  DenseMatrix prev;
  for (std::size_t count = 32; count <= 4096; count *= 2) {
    const QuadRule rule =
        is_log ? gauss_legendre01(count) : stieltjes_rule(f, count, scale_hint);
    DenseMatrix cur = rank1_resolvent_sum(u, v, rule, sign, make_pair);
    if (count > 32) {
      const double diff = frobenius_norm(cur - prev);
      const double base = frobenius_norm(cur);
      if (base == 0.0 || diff <= 1e-12 * base) return cur;
    }
    prev = std::move(cur);
  }
  throw QuadratureNotConvergedError("frechet block quadrature: node cap reached");
}

}  // namespace

BlockFrechetResult block_frechet_kernel(const DenseMatrix& g, const DenseMatrix& h_adj, Complex c,
                                        const FunctionSpec& f) {
  if (g.rows() != g.cols() || h_adj.rows() != h_adj.cols())
    throw DimensionMismatchError("block_frechet_kernel: square blocks required");
  const std::size_t mg = g.rows(), mh = h_adj.rows();

  // The logarithm's block formula carries a leading minus on the direction
  // block; the extracted block is negated so X is the derivative itself.
  const bool is_log = f.kind == FunctionSpec::Kind::log;
  const Complex block_c = is_log ? -c : c;
  DenseMatrix e(mg, mh);
  if (mg > 0 && mh > 0) e(0, 0) = block_c;

  DenseMatrix fb;
  switch (f.kind) {
    case FunctionSpec::Kind::exp:
      fb = expm(f.scale * assemble_block(g, h_adj, e));
      break;
    case FunctionSpec::Kind::log:
      fb = logm(assemble_block(g, h_adj, e));
      break;
    case FunctionSpec::Kind::inv_pow:
    case FunctionSpec::Kind::stieltjes_quad:
      fb = stieltjes_eval(assemble_block(g, h_adj, e), f);
      break;
  }

  BlockFrechetResult out;
  out.f_g = fb.slice(0, 0, mg, mg);
  out.f_h = fb.slice(mg, mg, mh, mh);
  out.x = fb.slice(0, mg, mg, mh);
  if (is_log) out.x = Complex(-1.0) * out.x;
  return out;
}

DenseMatrix frechet_small(const DenseMatrix& t, Complex c, const FunctionSpec& f) {
  if (t.rows() != t.cols()) throw DimensionMismatchError("frechet_small: square input required");
  if (f.kind == FunctionSpec::Kind::exp || t.rows() == 0)
    return block_frechet_kernel(t, t, c, f).x;
  DenseVector u(t.rows()), v(t.rows());
  u[0] = c;
  v[0] = 1.0;
  return frechet_offdiag_rank1(t, t, u, v, f);
}

DenseMatrix frechet_offdiag_rank1(const DenseMatrix& g, const DenseMatrix& h_adj,
                                  const DenseVector& u, const DenseVector& v,
                                  const FunctionSpec& f) {
  if (g.rows() != g.cols() || h_adj.rows() != h_adj.cols())
    throw DimensionMismatchError("frechet_offdiag_rank1: square blocks required");
  if (u.size() != g.rows() || v.size() != h_adj.rows())
    throw DimensionMismatchError("frechet_offdiag_rank1: vector lengths");

  if (f.kind == FunctionSpec::Kind::exp) {
    DenseMatrix e = outer(u, v);
    DenseMatrix fb = expm(f.scale * assemble_block(g, h_adj, e));
    return fb.slice(0, g.rows(), g.rows(), h_adj.rows());
  }
  try {
    return offdiag_rank1_quadrature(g, h_adj, u, v, f);
  } catch (const QuadratureNotConvergedError&) {
    if (f.kind != FunctionSpec::Kind::log) throw;
    // Spectrum too close to the branch cut for the integral form; evaluate
    // the full block logarithm instead.
    DenseMatrix fb = logm(assemble_block(g, h_adj, outer(u, v)));
    return fb.slice(0, g.rows(), g.rows(), h_adj.rows());
  }
}

}  // namespace frechet
