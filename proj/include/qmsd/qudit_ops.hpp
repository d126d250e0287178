#pragma once

// Generalized Pauli (displacement) operators, single-qudit Clifford unitaries
// and the small dense matrix algebra everything else is built on.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qmsd/errors.hpp"
#include "qmsd/gf_arith.hpp"

namespace qmsd {

using cplx = std::complex<double>;
/// Dense complex square matrix: unitaries, projectors, density matrices.
using Operator = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

/// Entrywise max-modulus tolerance for operator comparisons.
inline constexpr double kOperatorTol = 1e-10;

/// omega^k with omega = exp(2 pi i / d); k is reduced mod d first so the
/// phases are exactly periodic.
inline cplx omega(int d, long long k = 1) {
  const double angle = 2.0 * std::numbers::pi * mod(k, d) / d;
  return {std::cos(angle), std::sin(angle)};
}

inline Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }

inline void require_square(const Operator& a, const char* what) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(what) + ": operator is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
}

inline Operator mul(const Operator& a, const Operator& b) {
  if (a.cols() != b.rows()) throw DimensionError("mul: inner dimensions differ");
  return a * b;
}

inline Operator add(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shapes differ");
  return a + b;
}

inline Operator scale(const Operator& a, cplx s) { return s * a; }

inline Operator dagger(const Operator& a) { return a.adjoint(); }

inline cplx trace(const Operator& a) {
  require_square(a, "trace");
  return a.trace();
}

/// Kronecker product a (x) b; the first factor is the most significant digit.
inline Operator tensor(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Operator tensor_power(const Operator& a, int copies) {
  Operator out = identity(1);
  for (int i = 0; i < copies; ++i) out = tensor(out, a);
  return out;
}

inline Operator projector(const Ket& psi) { return psi * psi.adjoint(); }

/// <psi|rho|psi> for a normalized pure target.
inline double fidelity(const Operator& rho, const Ket& psi) {
  require_square(rho, "fidelity");
  if (rho.rows() != psi.size()) throw DimensionError("fidelity: state and target dimensions differ");
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

inline Operator hermitian_part(const Operator& a) { return 0.5 * (a + a.adjoint()); }

inline Eigen::VectorXd hermitian_eigenvalues(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Half the trace norm of rho - sigma.
inline double trace_distance(const Operator& rho, const Operator& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("trace_distance: shapes differ");
  return 0.5 * hermitian_eigenvalues(rho - sigma).cwiseAbs().sum();
}

inline double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shapes differ");
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Operator& a, const Operator& b, double tol = kOperatorTol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// a == c b for some unit-modulus c.
inline bool equal_up_to_phase(const Operator& a, const Operator& b, double tol = kOperatorTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const cplx overlap = (b.adjoint() * a).trace();
  if (std::abs(overlap) < tol) return false;
  const cplx phase = overlap / std::abs(overlap);
  return approx_equal(a, phase * b, tol);
}

inline bool is_unitary(const Operator& u, double tol = kOperatorTol) {
  return u.rows() == u.cols() && approx_equal(u.adjoint() * u, identity(u.rows()), tol);
}

/// Hermitian, unit trace, eigenvalues >= -tol.
inline bool is_density_matrix(const Operator& rho, double tol = kOperatorTol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (max_abs_diff(rho, rho.adjoint()) > tol) return false;
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > tol) return false;
  return hermitian_eigenvalues(rho).minCoeff() >= -tol;
}

inline Operator maximally_mixed(int d) { return identity(d) / static_cast<double>(d); }

inline Ket basis_ket(int dim, int j) {
  Ket k = Ket::Zero(dim);
  k(j) = 1.0;
  return k;
}

/// n-qudit displacement label (x|z) with an extra phase omega^phase_exp.
struct PauliLabel {
  int d = kQutrit;
  std::vector<int> x;
  std::vector<int> z;
  int phase_exp = 0;

  PauliLabel() = default;
  PauliLabel(std::vector<int> xs, std::vector<int> zs, int phase = 0, int modulus = kQutrit)
      : d(modulus), x(std::move(xs)), z(std::move(zs)), phase_exp(mod(phase, modulus)) {
    if (!is_odd_prime(d)) throw DomainError("PauliLabel: modulus is not an odd prime");
    if (x.size() != z.size()) throw DimensionError("PauliLabel: x and z lengths differ");
    for (int& v : x) v = mod(v, d);
    for (int& v : z) v = mod(v, d);
  }

  /// From a table row laid out as (x_1 .. x_n | z_1 .. z_n).
  static PauliLabel from_row(const std::vector<int>& row, int modulus = kQutrit) {
    if (row.size() % 2 != 0) throw DimensionError("PauliLabel::from_row: odd row length");
    const auto n = row.size() / 2;
    return {std::vector<int>(row.begin(), row.begin() + static_cast<long>(n)),
            std::vector<int>(row.begin() + static_cast<long>(n), row.end()), 0, modulus};
  }

  static PauliLabel single(int xv, int zv, int modulus = kQutrit) { return {{xv}, {zv}, 0, modulus}; }

  int n() const { return static_cast<int>(x.size()); }

  std::vector<int> row() const {
    std::vector<int> r(x);
    r.insert(r.end(), z.begin(), z.end());
    return r;
  }

  friend bool operator==(const PauliLabel&, const PauliLabel&) = default;
};

/// <u, v> = z_u . x_v - x_u . z_v, so that D_u D_v = omega^<u,v> D_v D_u.
inline int symplectic_product(const PauliLabel& u, const PauliLabel& v) {
  if (u.n() != v.n()) throw DimensionError("symplectic_product: labels act on different qudit counts");
  long long s = 0;
  for (int q = 0; q < u.n(); ++q) s += static_cast<long long>(u.z[q]) * v.x[q] - static_cast<long long>(u.x[q]) * v.z[q];
  return mod(s, u.d);
}

inline Operator pauli_x(int d = kQutrit) {
  Operator x = Operator::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

inline Operator pauli_z(int d = kQutrit) {
  Operator z = Operator::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = omega(d, j);
  return z;
}

/// Tensor product of omega^{2^{-1} x z} X^x Z^z factors, times omega^phase_exp.
/// Built directly as a monomial matrix: X^x Z^z |j> = omega^{z j} |j + x>.
inline Operator displacement(const PauliLabel& label) {
  const int d = label.d;
  const int n = label.n();
  const int half = inv_mod(2, d);
  Eigen::Index dim = 1;
  for (int q = 0; q < n; ++q) dim *= d;

  long long base_phase = label.phase_exp;
  for (int q = 0; q < n; ++q) base_phase += static_cast<long long>(half) * label.x[q] * label.z[q];

  Operator out = Operator::Zero(dim, dim);
  std::vector<int> digits(n, 0);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index rem = col;
    for (int q = n - 1; q >= 0; --q) {
      digits[q] = static_cast<int>(rem % d);
      rem /= d;
    }
    long long phase = base_phase;
    Eigen::Index row = 0;
    for (int q = 0; q < n; ++q) {
      phase += static_cast<long long>(label.z[q]) * digits[q];
      row = row * d + (digits[q] + label.x[q]) % d;
    }
    out(row, col) = omega(d, phase);
  }
  return out;
}

inline Operator displacement(int x, int z, int d = kQutrit) { return displacement(PauliLabel::single(x, z, d)); }

/// Symplectic unitary U_F, evaluated literally (no rephasing):
///   beta != 0: d^{-1/2} sum_{j,k} omega^{2^{-1} beta^{-1} (alpha k^2 - 2 j k + delta j^2)} |j><k|
///   beta == 0: sum_k omega^{2^{-1} alpha gamma k^2} |alpha k><k|
/// U_F D_(x|z) U_F^dag is proportional to D_F(x,z).
inline Operator clifford_unitary(const SymplecticMat2& f) {
  const int d = f.d;
  if (f.det() != 1) throw DomainError("clifford_unitary: F is not in SL(2, Z_d)");
  const long long half = inv_mod(2, d);
  Operator u = Operator::Zero(d, d);
  if (f.beta != 0) {
    const long long bi = inv_mod(f.beta, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (long long j = 0; j < d; ++j)
      for (long long k = 0; k < d; ++k) {
        const long long e = half * bi * (f.alpha * k * k - 2 * j * k + f.delta * j * j);
        u(j, k) = norm * omega(d, e);
      }
  } else {
    for (long long k = 0; k < d; ++k) u(mod(f.alpha * k, d), k) = omega(d, half * f.alpha * f.gamma * k * k);
  }
  return u;
}

/// U rho U^dag.
inline Operator conjugate(const Operator& u, const Operator& rho) { return mul(mul(u, rho), u.adjoint()); }

}  // namespace qmsd
