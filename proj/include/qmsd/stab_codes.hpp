#pragma once

// Qudit stabilizer codes from (x|z) tables, the trivial-syndrome projector
// and the logical decoding isometry.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmsd/errors.hpp"
#include "qmsd/gf_arith.hpp"
#include "qmsd/qudit_ops.hpp"

namespace qmsd {

struct StabilizerCode {
  int d = kQutrit;
  int n = 0;
  std::vector<PauliLabel> generators;
  PauliLabel logical_z;
  PauliLabel logical_x;

  int k() const { return n - static_cast<int>(generators.size()); }

  static StabilizerCode from_rows(const std::vector<std::vector<int>>& gens, const std::vector<int>& zl,
                                  const std::vector<int>& xl, int d = kQutrit) {
    StabilizerCode c;
    c.d = d;
    c.n = static_cast<int>(zl.size() / 2);
    for (const auto& g : gens) c.generators.push_back(PauliLabel::from_row(g, d));
    c.logical_z = PauliLabel::from_row(zl, d);
    c.logical_x = PauliLabel::from_row(xl, d);
    return c;
  }

  friend bool operator==(const StabilizerCode&, const StabilizerCode&) = default;
};

/// [[4,1,2]]_3 code whose limiting state lies on a Wigner-tetrahedron edge.
inline StabilizerCode edge_code() {
  return StabilizerCode::from_rows({{0, 0, 0, 2, 2, 2, 0, 0},  //
                                    {1, 1, 0, 1, 1, 1, 2, 2},
                                    {0, 0, 1, 0, 2, 0, 0, 0}},
                                   {2, 0, 0, 2, 2, 2, 1, 2}, {0, 0, 0, 0, 1, 2, 0, 0});
}

/// [[4,1,2]]_3 code with the Norrell state as limiting state.
inline StabilizerCode face_code() {
  return StabilizerCode::from_rows({{2, 0, 0, 2, 1, 2, 0, 1},  //
                                    {2, 1, 0, 1, 1, 0, 1, 0},
                                    {1, 0, 1, 2, 0, 2, 1, 0}},
                                   {1, 0, 0, 2, 1, 0, 1, 2}, {0, 0, 0, 0, 1, 2, 1, 2});
}

/// Rank over Z_d of a set of rows, by Gaussian elimination.
inline int rank_mod(std::vector<std::vector<int>> rows, int d) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (mod(rows[r][c], d) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[pivot], rows[rank]);
    const int iv = inv_mod(mod(rows[rank][c], d), d);
    for (auto& v : rows[rank]) v = mod(static_cast<long long>(v) * iv, d);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank) continue;
      const int f = mod(rows[r][c], d);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] = mod(rows[r][j] - static_cast<long long>(f) * rows[rank][j], d);
    }
    ++rank;
  }
  return rank;
}

namespace detail {

inline void check_generators(const StabilizerCode& code, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < code.generators.size(); ++i)
    for (std::size_t j = i + 1; j < code.generators.size(); ++j)
      if (symplectic_product(code.generators[i], code.generators[j]) != 0)
        out.push_back("G" + std::to_string(i + 1) + " and G" + std::to_string(j + 1) + " do not commute");
  std::vector<std::vector<int>> rows;
  for (const auto& g : code.generators) rows.push_back(g.row());
  const int rank = rank_mod(rows, code.d);
  if (rank != static_cast<int>(rows.size()))
    out.push_back("generators are not independent (rank " + std::to_string(rank) + " < " + std::to_string(rows.size()) + ")");
}

inline std::vector<std::string> generator_violations(const StabilizerCode& code) {
  std::vector<std::string> out;
  if (!is_odd_prime(code.d)) {
    out.push_back("modulus " + std::to_string(code.d) + " is not an odd prime");
    return out;
  }
  for (std::size_t i = 0; i < code.generators.size(); ++i) {
    const auto& g = code.generators[i];
    if (g.n() != code.n)
      out.push_back("G" + std::to_string(i + 1) + " acts on " + std::to_string(g.n()) + " qudits, expected " +
                    std::to_string(code.n));
    if (g.d != code.d) out.push_back("G" + std::to_string(i + 1) + " has modulus " + std::to_string(g.d));
  }
  if (out.empty()) check_generators(code, out);
  return out;
}

}  // namespace detail

/// Every violated code invariant, one message each; empty means valid.
inline std::vector<std::string> validate(const StabilizerCode& code) {
  std::vector<std::string> out;
  if (!is_odd_prime(code.d)) {
    out.push_back("modulus " + std::to_string(code.d) + " is not an odd prime");
    return out;
  }
  auto check_shape = [&](const PauliLabel& l, const std::string& name) {
    if (l.n() != code.n) out.push_back(name + " acts on " + std::to_string(l.n()) + " qudits, expected " + std::to_string(code.n));
    if (l.d != code.d) out.push_back(name + " has modulus " + std::to_string(l.d));
  };
  for (std::size_t i = 0; i < code.generators.size(); ++i) check_shape(code.generators[i], "G" + std::to_string(i + 1));
  check_shape(code.logical_z, "Z_L");
  check_shape(code.logical_x, "X_L");
  if (!out.empty()) return out;

  if (code.k() != 1) out.push_back("code encodes k = " + std::to_string(code.k()) + " logical qudits, only k = 1 is supported");

  for (std::size_t i = 0; i < code.generators.size(); ++i) {
    if (symplectic_product(code.logical_z, code.generators[i]) != 0)
      out.push_back("Z_L does not commute with G" + std::to_string(i + 1));
    if (symplectic_product(code.logical_x, code.generators[i]) != 0)
      out.push_back("X_L does not commute with G" + std::to_string(i + 1));
  }
  if (symplectic_product(code.logical_z, code.logical_x) == 0) out.push_back("Z_L and X_L commute, not a conjugate pair");
  detail::check_generators(code, out);
  return out;
}

inline void require_valid(const StabilizerCode& code) {
  const auto v = validate(code);
  if (v.empty()) return;
  std::string msg = "invalid stabilizer code:";
  for (const auto& s : v) msg += " " + s + ";";
  throw DomainError(msg);
}

/// prod_i (1/d) sum_m G_i^m: projector onto the all-(+1) syndrome. Only the
/// generators are checked here; logicals and k are not needed.
inline Operator trivial_syndrome_projector(const StabilizerCode& code) {
  if (const auto v = detail::generator_violations(code); !v.empty()) {
    std::string msg = "invalid stabilizer generators:";
    for (const auto& s : v) msg += " " + s + ";";
    throw DomainError(msg);
  }
  const int d = code.d;
  const Eigen::Index dim = static_cast<Eigen::Index>(std::pow(d, code.n));
  Operator pi = identity(dim);
  for (const auto& g : code.generators) {
    const Operator gm = displacement(g);
    Operator sum = identity(dim);
    Operator power = identity(dim);
    for (int m = 1; m < d; ++m) {
      power = power * gm;
      sum += power;
    }
    pi = pi * (sum / static_cast<double>(d));
  }
  const double expected = std::pow(d, code.k());
  if (std::abs(pi.trace().real() - expected) > 1e-8 || (pi * pi - pi).cwiseAbs().maxCoeff() > kOperatorTol)
    throw PhaseConventionError("trivial-syndrome sector has trace " + std::to_string(pi.trace().real()) +
                               ", expected " + std::to_string(expected));
  return pi;
}

struct CodeSpace {
  Operator projector;
  /// d^n x d, column j is the codeword |j_L>.
  Operator isometry;
};

/// Codewords V|j> = X_L^j |0_L>, |0_L> the Z_L = 1 codeword with its largest
/// entry made real positive. Requires Z_L X_L = omega X_L Z_L.
inline CodeSpace logical_isometry(const StabilizerCode& code) {
  require_valid(code);
  CodeSpace cs;
  cs.projector = trivial_syndrome_projector(code);
  const int d = code.d;
  if (code.k() != 1) throw LogicalAlgebraError("logical_isometry: only k = 1 codes are supported");
  if (symplectic_product(code.logical_z, code.logical_x) != 1)
    throw LogicalAlgebraError("logical_isometry: <Z_L, X_L> must be 1 so that Z_L X_L = omega X_L Z_L");

  const Operator zl = displacement(code.logical_z);
  const Operator xl = displacement(code.logical_x);
  Operator sum = identity(zl.rows());
  Operator power = identity(zl.rows());
  for (int m = 1; m < d; ++m) {
    power = power * zl;
    sum += power;
  }
  const Operator q = cs.projector * (sum / static_cast<double>(d));
  if (std::abs(q.trace().real() - 1.0) > 1e-8)
    throw LogicalAlgebraError("logical_isometry: Z_L = 1 codeword sector has trace " + std::to_string(q.trace().real()));

  Eigen::Index col = 0;
  q.colwise().norm().maxCoeff(&col);
  Ket v0 = q.col(col).normalized();
  Eigen::Index big = 0;
  v0.cwiseAbs().maxCoeff(&big);
  v0 *= std::conj(v0(big)) / std::abs(v0(big));

  cs.isometry = Operator(zl.rows(), d);
  Ket v = v0;
  for (int j = 0; j < d; ++j) {
    cs.isometry.col(j) = v;
    v = xl * v;
  }

  const Operator vdv = cs.isometry.adjoint() * cs.isometry;
  const Operator zlog = cs.isometry.adjoint() * zl * cs.isometry;
  const Operator xlog = cs.isometry.adjoint() * xl * cs.isometry;
  if (!approx_equal(vdv, identity(d), 1e-9) || !approx_equal(zlog, pauli_z(d), 1e-9) ||
      !approx_equal(xlog, pauli_x(d), 1e-9) || !approx_equal(cs.projector * cs.isometry, cs.isometry, 1e-9))
    throw LogicalAlgebraError("logical_isometry: logical operators do not act as Z and X on the codespace");
  return cs;
}

namespace detail {

/// The exponent k with c = omega^k, or -1 when c is not a d-th root of unity.
inline int root_of_unity_exponent(cplx c, int d) {
  for (int k = 0; k < d; ++k)
    if (std::abs(c - omega(d, k)) <= 1e-8) return k;
  return -1;
}

inline PauliLabel map_label(const PauliLabel& l, const SymplecticMat2& f) {
  PauliLabel out = l;
  for (int q = 0; q < l.n(); ++q) {
    const auto [x, z] = f.apply(l.x[q], l.z[q]);
    out.x[q] = x;
    out.z[q] = z;
  }
  out.phase_exp = 0;
  return out;
}

inline PauliLabel combine(const PauliLabel& a, int ca, const PauliLabel& b, int cb) {
  PauliLabel out = a;
  for (int q = 0; q < a.n(); ++q) {
    out.x[q] = mod(static_cast<long long>(ca) * a.x[q] + static_cast<long long>(cb) * b.x[q], a.d);
    out.z[q] = mod(static_cast<long long>(ca) * a.z[q] + static_cast<long long>(cb) * b.z[q], a.d);
  }
  out.phase_exp = 0;
  return out;
}

}  // namespace detail

/// The code conjugated by U = U_F on every qudit: its distillation map is
/// rho -> U D(U^dag rho U) U^dag, D the map of `code`. Generators are the exact
/// labels of U^{(x)n} G U^{(x)n dag}; logicals are chosen so that decoding
/// returns the output rotated by U.
inline StabilizerCode clifford_conjugate(const StabilizerCode& code, const SymplecticMat2& f) {
  require_valid(code);
  const int d = code.d;
  const Operator u = clifford_unitary(f);
  const Operator ubar = tensor_power(u, code.n);
  const double dim = static_cast<double>(ubar.rows());

  StabilizerCode out = code;
  for (auto& g : out.generators) {
    const Operator target = ubar * displacement(g) * ubar.adjoint();
    PauliLabel mapped = detail::map_label(g, f);
    const int k = detail::root_of_unity_exponent((displacement(mapped).adjoint() * target).trace() / dim, d);
    if (k < 0) throw PhaseConventionError("clifford_conjugate: generator image is not a phased displacement");
    mapped.phase_exp = k;
    g = mapped;
  }

  // Decoding isometry of the conjugated code: U^{(x)n} V U^dag.
  const Operator v = ubar * logical_isometry(code).isometry * u.adjoint();
  const SymplecticMat2 finv = symplectic_inv(f);
  auto logical = [&](int x, int z, const Operator& want) {
    const auto [a, b] = finv.apply(x, z);
    PauliLabel mapped = detail::map_label(detail::combine(code.logical_x, a, code.logical_z, b), f);
    const Operator restricted = v.adjoint() * displacement(mapped) * v;
    const int k = detail::root_of_unity_exponent((want.adjoint() * restricted).trace() / static_cast<double>(d), d);
    if (k < 0 || !approx_equal(restricted, omega(d, k) * want, 1e-8))
      throw LogicalAlgebraError("clifford_conjugate: logical image does not act as a Weyl operator");
    mapped.phase_exp = mod(-k, d);
    return mapped;
  };
  out.logical_z = logical(0, 1, pauli_z(d));
  out.logical_x = logical(1, 0, pauli_x(d));
  return out;
}

// JSON: {"d":3,"n":4,"generators":[[x...,z...],...],"logical_z":[...],"logical_x":[...]}

inline nlohmann::json code_to_json(const StabilizerCode& code) {
  nlohmann::json j;
  j["d"] = code.d;
  j["n"] = code.n;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : code.generators) j["generators"].push_back(g.row());
  j["logical_z"] = code.logical_z.row();
  j["logical_x"] = code.logical_x.row();
  // Optional omega exponents, written only when some label carries one.
  std::vector<int> phases;
  for (const auto& g : code.generators) phases.push_back(g.phase_exp);
  phases.push_back(code.logical_z.phase_exp);
  phases.push_back(code.logical_x.phase_exp);
  if (std::any_of(phases.begin(), phases.end(), [](int p) { return p != 0; })) j["phases"] = phases;
  return j;
}

inline StabilizerCode code_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    const int n = j.at("n").get<int>();
    if (!is_odd_prime(d)) throw DomainError("code JSON: d must be an odd prime");
    if (n <= 0) throw DomainError("code JSON: n must be positive");
    auto row = [&](const nlohmann::json& r, const std::string& name) {
      auto v = r.get<std::vector<int>>();
      if (static_cast<int>(v.size()) != 2 * n)
        throw DomainError("code JSON: " + name + " has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(2 * n));
      return v;
    };
    std::vector<std::vector<int>> gens;
    for (std::size_t i = 0; i < j.at("generators").size(); ++i)
      gens.push_back(row(j.at("generators")[i], "generator " + std::to_string(i + 1)));
    auto code = StabilizerCode::from_rows(gens, row(j.at("logical_z"), "logical_z"), row(j.at("logical_x"), "logical_x"), d);
    if (j.contains("phases")) {
      const auto p = j.at("phases").get<std::vector<int>>();
      if (p.size() != gens.size() + 2) throw DomainError("code JSON: phases needs one entry per generator plus Z_L and X_L");
      for (std::size_t i = 0; i < gens.size(); ++i) code.generators[i].phase_exp = mod(p[i], d);
      code.logical_z.phase_exp = mod(p[gens.size()], d);
      code.logical_x.phase_exp = mod(p[gens.size() + 1], d);
    }
    return code;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("code JSON: ") + e.what());
  }
}

inline StabilizerCode load_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open code file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("code file " + path + ": " + e.what());
  }
  return code_from_json(j);
}

}  // namespace qmsd
