#include "frechet/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "frechet/dense.hpp"

namespace frechet {

QuadRule gauss_jacobi(std::size_t k, double alpha, double beta) {
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi: alpha, beta must exceed -1");
  if (k == 0) return {};

  std::vector<double> d(k, 0.0), e(k > 1 ? k - 1 : 0, 0.0);
  const double ab = alpha + beta;
  d[0] = (beta - alpha) / (ab + 2.0);
  for (std::size_t j = 1; j < k; ++j) {
    const double n = static_cast<double>(j);
    const double den = (2.0 * n + ab) * (2.0 * n + ab + 2.0);
    d[j] = (beta * beta - alpha * alpha) / den;
    const double num = 4.0 * n * (n + alpha) * (n + beta) * (n + ab);
    const double den2 = (2.0 * n + ab) * (2.0 * n + ab) * (2.0 * n + ab + 1.0) *
                        (2.0 * n + ab - 1.0);
    e[j - 1] = std::sqrt(num / den2);
  }

  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                     std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);

  TridiagEig eig = symmetric_tridiag_eig(std::move(d), std::move(e));
  QuadRule rule;
  rule.nodes = eig.values;
  rule.weights.resize(k);
  for (std::size_t j = 0; j < k; ++j)
    rule.weights[j] = mu0 * eig.first_components[j] * eig.first_components[j];
  return rule;
}

QuadRule gauss_legendre01(std::size_t k) {
  QuadRule r = gauss_jacobi(k, 0.0, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    r.nodes[j] = 0.5 * (r.nodes[j] + 1.0);
    r.weights[j] *= 0.5;
  }
  return r;
}

QuadRule inv_pow_resolvent_rule(std::size_t k, double sigma, double scale) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("inv_pow_resolvent_rule: sigma in (0,1) required");
  if (!(scale > 0.0)) scale = 1.0;
  const QuadRule gj = gauss_jacobi(k, -sigma, sigma - 1.0);
  // sin(sigma*pi)/pi normalizes the Stieltjes measure of z^{-sigma}; the
  // extra scale^{1-sigma}·... factors come from t = scale·(1-s)/(1+s).
  const double c = std::sin(sigma * 3.14159265358979323846) / 3.14159265358979323846;
  QuadRule rule;
  rule.nodes.resize(k);
  rule.weights.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double s = gj.nodes[j];
    rule.nodes[j] = scale * (1.0 - s) / (1.0 + s);
    rule.weights[j] = c * gj.weights[j] * 2.0 * std::pow(scale, 1.0 - sigma) / (1.0 + s);
  }
  return rule;
}

}  // namespace frechet
