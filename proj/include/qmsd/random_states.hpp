#pragma once

#include <random>

#include "qmsd/qudit_ops.hpp"

namespace qmsd {

/// Haar-random pure state (normalized complex Gaussian vector).
inline Ket random_ket(std::mt19937_64& rng, int dim = kQutrit) {
  std::normal_distribution<double> g;
  Ket v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx{g(rng), g(rng)};
  return v.normalized();
}

/// G G^dag / Tr for a complex Gaussian G, mixed with 1/d by a uniform weight
/// so that samples cover the interior as well as the boundary.
inline Operator random_density_matrix(std::mt19937_64& rng, int dim = kQutrit) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Operator m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx{g(rng), g(rng)};
  Operator rho = m * m.adjoint();
  rho /= rho.trace().real();
  const double q = u(rng);
  rho = (1.0 - q) * rho + q * maximally_mixed(dim);
  return hermitian_part(rho);
}

}  // namespace qmsd
