#pragma once

#include <functional>
#include <string>

#include "frechet/dense.hpp"
#include "frechet/quadrature.hpp"

namespace frechet {

/// Tagged description of the scalar function f applied to matrices.
///  - Exp evaluates z ↦ exp(scale·z)
///  - Log evaluates the principal logarithm
///  - InvPow evaluates z ↦ z^{-sigma}, sigma in (0,1), via its Stieltjes form
///  - StieltjesQuad is a user-supplied measure: generator(k) must return a
///    k-point rule with nonnegative nodes t_j and weights w_j approximating
///    f(A) = Σ_j w_j (A + t_j I)^{-1}.
struct FunctionSpec {
  enum class Kind { exp, log, inv_pow, stieltjes_quad };

  Kind kind = Kind::exp;
  Complex scale = 1.0;
  double sigma = 0.5;
  std::function<QuadRule(std::size_t)> measure;

  static FunctionSpec make_exp(Complex scale = 1.0);
  static FunctionSpec make_log();
  static FunctionSpec make_inv_pow(double sigma);
  static FunctionSpec make_stieltjes(std::function<QuadRule(std::size_t)> generator);

  bool is_stieltjes() const { return kind == Kind::inv_pow || kind == Kind::stieltjes_quad; }

  Complex eval(Complex z) const;
  Complex derivative(Complex z) const;
  /// f with conjugated parameters (for the adjoint identity L_f(A,E)^H).
  FunctionSpec conjugated() const;
  std::string description() const;
};

/// Stable divided difference (f(a) - f(b)) / (a - b) on real arguments,
/// f'(a) at coincidence.
Complex divided_difference(const FunctionSpec& f, double a, double b);

/// Matrix exponential: scaling and squaring with the degree-13 diagonal Padé
/// approximant, s chosen so the scaled one-norm is below 5.37.
DenseMatrix expm(const DenseMatrix& m);

/// Principal matrix logarithm: inverse scaling and squaring. Repeated
/// principal square roots (Denman-Beavers) until ||M^(1/2^s) - I||_1 <= 0.25,
/// then the degree-7 diagonal Padé approximant of log(I+X), times 2^s.
/// Throws SpectrumOnClosedNegativeAxisError when the square-root iteration
/// stagnates or diverges.
DenseMatrix logm(const DenseMatrix& m);

/// f(M) = Σ_j w_j (M + t_j I)^{-1} for a Stieltjes FunctionSpec; the node
/// count doubles from 32 until successive evaluations differ by <= 1e-12
/// relative in the Frobenius norm (cap 4096).
DenseMatrix stieltjes_eval(const DenseMatrix& m, const FunctionSpec& f);

struct BlockFrechetResult {
  DenseMatrix f_g;  // f(G)
  DenseMatrix f_h;  // f(H_adj)
  DenseMatrix x;    // L_f(.,.) block; equals the Fréchet derivative block
};

/// Evaluates f on the 2m×2m matrix [[G, c·e1 e1^H], [0, H_adj]] (the (1,2)
/// block carries -c for Log; the returned X is sign-corrected so that it
/// always equals the derivative block with direction +c·e1 e1^H).
BlockFrechetResult block_frechet_kernel(const DenseMatrix& g, const DenseMatrix& h_adj, Complex c,
                                        const FunctionSpec& f);

/// L_f(T, c·e1 e1^H) via the block identity.
DenseMatrix frechet_small(const DenseMatrix& t, Complex c, const FunctionSpec& f);

/// (1,2) block of f([[G, u v^H], [0, H_adj]]) for a general rank-one small
/// direction. For Stieltjes and Log kinds the block is accumulated from the
/// same resolvent quadrature that defines f, one pair of solves per node;
/// Exp evaluates the full block matrix.
DenseMatrix frechet_offdiag_rank1(const DenseMatrix& g, const DenseMatrix& h_adj,
                                  const DenseVector& u, const DenseVector& v,
                                  const FunctionSpec& f);

}  // namespace frechet
