#pragma once

#include <cstddef>
#include <vector>

namespace frechet {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// k-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1, via Golub-Welsch on the Jacobi recurrence.
QuadRule gauss_jacobi(std::size_t k, double alpha, double beta);

/// k-point Gauss-Legendre rule on [0, 1].
QuadRule gauss_legendre01(std::size_t k);

/// Nodes t_j >= 0 and weights w_j >= 0 such that
///   A^{-sigma} ≈ Σ_j w_j (A + t_j I)^{-1}.
/// Derived from the substitution t = scale·(1-s)/(1+s) applied to the
/// Stieltjes representation of z^{-sigma}, with the endpoint singularity
/// absorbed into a Gauss-Jacobi weight. `scale` centers the rule on the
/// spectrum (pass sqrt(lambda_min·lambda_max)); scale = 1 is the plain rule.
QuadRule inv_pow_resolvent_rule(std::size_t k, double sigma, double scale);

}  // namespace frechet
