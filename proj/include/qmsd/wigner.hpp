#pragma once

// Discrete Wigner function, sum-negativity, and membership in the Wigner
// and stabilizer polytopes.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qmsd/errors.hpp"
#include "qmsd/qudit_ops.hpp"
#include "qmsd/simplex.hpp"

namespace qmsd {

inline constexpr double kWignerTol = 1e-12;
inline constexpr double kStabilizerLpTol = 1e-9;

/// A_{0,0} = (1/d) sum_{x,z} D_(x|z); for d = 3 this is the parity matrix
/// [[1,0,0],[0,0,1],[0,1,0]].
inline Operator parity_operator(int d = kQutrit) {
  Operator a = Operator::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int z = 0; z < d; ++z) a += displacement(x, z, d);
  return a / static_cast<double>(d);
}

/// A_{x,z} = D_(x|z) A_{0,0} D_(x|z)^dag.
inline Operator phase_point_operator(int x, int z, int d = kQutrit) {
  const Operator dxz = displacement(x, z, d);
  return dxz * parity_operator(d) * dxz.adjoint();
}

/// d x d grid W(x, z), row x and column z.
struct WignerTable {
  int d = kQutrit;
  std::vector<double> values;

  double at(int x, int z) const { return values[static_cast<std::size_t>(x * d + z)]; }
  double& at(int x, int z) { return values[static_cast<std::size_t>(x * d + z)]; }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  double sum_of_squares() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
  double negativity() const {
    double s = 0.0;
    for (double v : values)
      if (v < 0) s -= v;
    return s;
  }
};

inline void require_state(const Operator& rho, const char* what) {
  if (rho.rows() != rho.cols()) throw InvalidState(std::string(what) + ": operator is not square");
  if (!is_odd_prime(static_cast<int>(rho.rows())))
    throw InvalidState(std::string(what) + ": dimension is not an odd prime");
  if (max_abs_diff(rho, rho.adjoint()) > kOperatorTol) throw InvalidState(std::string(what) + ": not Hermitian");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > kOperatorTol)
    throw InvalidState(std::string(what) + ": trace is not 1");
}

/// W(x,z) = (1/d) Tr(A_{x,z} rho) for a Hermitian, unit-trace rho.
inline WignerTable wigner_function(const Operator& rho) {
  require_state(rho, "wigner_function");
  const int d = static_cast<int>(rho.rows());
  WignerTable w{d, std::vector<double>(static_cast<std::size_t>(d * d))};
  const Operator parity = parity_operator(d);
  for (int x = 0; x < d; ++x)
    for (int z = 0; z < d; ++z) {
      const Operator dxz = displacement(x, z, d);
      const cplx v = (dxz * parity * dxz.adjoint() * rho).trace() / static_cast<double>(d);
      if (std::abs(v.imag()) > kOperatorTol) throw InvalidState("wigner_function: complex Wigner value");
      w.at(x, z) = v.real();
    }
  return w;
}

/// rho = sum_{x,z} W(x,z) A_{x,z}.
inline Operator reconstruct_state(const WignerTable& w) {
  Operator rho = Operator::Zero(w.d, w.d);
  for (int x = 0; x < w.d; ++x)
    for (int z = 0; z < w.d; ++z) rho += w.at(x, z) * phase_point_operator(x, z, w.d);
  return rho;
}

inline double sum_negativity(const Operator& rho) { return wigner_function(rho).negativity(); }

struct PolytopeVerdict {
  bool inside = false;
  /// Wigner test: most negative entry. Stabilizer test: minus the LP infeasibility.
  double margin = 0.0;
};

inline PolytopeVerdict in_wigner_polytope(const Operator& rho) {
  const double m = wigner_function(rho).min();
  return {m >= -kWignerTol, m};
}

/// The 12 pure qutrit stabilizer states: eigenbases of Z, X, XZ, XZ^2.
/// Within a basis, vectors are ordered by eigenvalue argument in [0, 2 pi);
/// each is rephased so its first non-negligible component is real positive.
inline std::vector<Ket> stabilizer_states(int d = kQutrit) {
  if (d != kQutrit) throw DomainError("stabilizer_states: only d = 3 is supported");
  const Operator x = pauli_x(d);
  const Operator z = pauli_z(d);
  const std::array<Operator, 4> bases{z, x, Operator(x * z), Operator(x * z * z)};
  std::vector<Ket> out;
  for (const Operator& m : bases) {
    Eigen::ComplexEigenSolver<Operator> es(m);
    std::vector<std::pair<double, Ket>> vs;
    for (int i = 0; i < d; ++i) {
      double arg = std::arg(es.eigenvalues()(i));
      if (arg < -1e-9) arg += 2.0 * std::numbers::pi;
      Ket v = es.eigenvectors().col(i).normalized();
      for (int j = 0; j < d; ++j)
        if (std::abs(v(j)) > 1e-9) {
          v *= std::conj(v(j)) / std::abs(v(j));
          break;
        }
      vs.emplace_back(std::max(arg, 0.0), v);
    }
    std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [arg, v] : vs) out.push_back(v);
  }
  return out;
}

namespace detail {

/// Real coordinates of a 3x3 Hermitian matrix: diagonal, Re and Im of the
/// upper off-diagonal entries.
inline std::array<double, 9> hermitian_coords(const Operator& m) {
  return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(0, 1).real(), m(0, 2).real(),
          m(1, 2).real(), m(0, 1).imag(), m(0, 2).imag(), m(1, 2).imag()};
}

}  // namespace detail

struct StabilizerDecomposition {
  PolytopeVerdict verdict;
  /// Mixture weights over stabilizer_states(), meaningful when inside.
  std::vector<double> weights;
};

/// Feasibility of rho = sum_i w_i |s_i><s_i|, w >= 0, over the 12 stabilizer
/// states (trace normalization is implied by the diagonal rows).
inline StabilizerDecomposition stabilizer_decomposition(const Operator& rho) {
  require_state(rho, "in_stabilizer_polytope");
  if (rho.rows() != kQutrit) throw InvalidState("in_stabilizer_polytope: only qutrit states are supported");
  const auto states = stabilizer_states();
  const std::size_t rows = 9;
  const std::size_t cols = states.size();
  std::vector<double> a(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto coords = detail::hermitian_coords(projector(states[c]));
    for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = coords[r];
  }
  const auto rhs = detail::hermitian_coords(rho);
  const auto res = lp::find_feasible_point(a, std::vector<double>(rhs.begin(), rhs.end()), rows, cols,
                                           kStabilizerLpTol);
  return {{res.feasible, -res.infeasibility}, res.x};
}

inline PolytopeVerdict in_stabilizer_polytope(const Operator& rho) { return stabilizer_decomposition(rho).verdict; }

}  // namespace qmsd
