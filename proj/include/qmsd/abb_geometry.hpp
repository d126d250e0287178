#pragma once

// The +1 eigenspace of A_{0,0} = span{|0>, |N>}, |N> = (|1> + |2>)/sqrt2,
// viewed as a Bloch-like ball. A point (r, theta, phi) stands for
//   rho = r |psi><psi| + (1 - r) 1/3,
//   |psi> = (cos theta, e^{i phi} sin theta / sqrt2, e^{i phi} sin theta / sqrt2),
// with Cartesian coordinates r (sin 2theta cos phi, sin 2theta sin phi, cos 2theta).
// PSL(2, Z_3) acts on this ball as the rotation group of the Wigner tetrahedron.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "qmsd/errors.hpp"
#include "qmsd/gf_arith.hpp"
#include "qmsd/qudit_ops.hpp"
#include "qmsd/wigner.hpp"

namespace qmsd {

inline constexpr double kSubspaceTol = 1e-9;
inline constexpr double kAngleSlack = 1e-12;

struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double wrap_phi(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  return phi >= two_pi ? 0.0 : phi;
}

/// |psi(theta, phi)> from the (a,b,b) parameterization.
inline Ket abb_ket(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("abb_ket: non-finite angle");
  if (theta < -kAngleSlack || theta > std::numbers::pi / 2 + kAngleSlack)
    throw DomainError("abb_ket: theta outside [0, pi/2]");
  const double b = std::sin(theta) / std::numbers::sqrt2;
  const cplx phase = std::polar(1.0, phi);
  Ket v(3);
  v << std::cos(theta), phase * b, phase * b;
  return v;
}

inline Operator pure_state(double theta, double phi) { return projector(abb_ket(theta, phi)); }

class AbbPoint {
 public:
  AbbPoint() = default;
  AbbPoint(double r, double theta, double phi) : r_(r), theta_(theta), phi_(wrap_phi(phi)) {
    if (!std::isfinite(r) || r < -kAngleSlack || r > 1.0 + kAngleSlack) throw DomainError("AbbPoint: r outside [0, 1]");
    if (!std::isfinite(theta) || theta < -kAngleSlack || theta > std::numbers::pi / 2 + kAngleSlack)
      throw DomainError("AbbPoint: theta outside [0, pi/2]");
    r_ = std::clamp(r, 0.0, 1.0);
    theta_ = std::clamp(theta, 0.0, std::numbers::pi / 2);
  }

  double r() const { return r_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Operator rho() const {
    return r_ * pure_state(theta_, phi_) + (1.0 - r_) * maximally_mixed(3);
  }

  CartesianPoint cartesian() const {
    const double s = std::sin(2 * theta_);
    return {r_ * s * std::cos(phi_), r_ * s * std::sin(phi_), r_ * std::cos(2 * theta_)};
  }

  static AbbPoint from_cartesian(const CartesianPoint& p) {
    const double r = p.norm();
    if (!std::isfinite(r) || r > 1.0 + kAngleSlack) throw DomainError("from_cartesian: point outside the unit ball");
    if (r == 0.0) return {0.0, 0.0, 0.0};
    const double two_theta = std::acos(std::clamp(p.z / r, -1.0, 1.0));
    const double phi = (p.x == 0.0 && p.y == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    return {std::min(r, 1.0), two_theta / 2, phi};
  }

 private:
  double r_ = 0.0;
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Depolarized state of the point; p = 1 - r in the depolarizing-noise form.
inline Operator depolarized(const AbbPoint& point) { return point.rho(); }

inline Operator state_from_cartesian(const CartesianPoint& p) { return AbbPoint::from_cartesian(p).rho(); }

/// (1 - p)|psi><psi| + p 1/d.
inline Operator depolarize(const Ket& psi, double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw DomainError("depolarize: p outside [0, 1]");
  const int d = static_cast<int>(psi.size());
  return (1.0 - p) * projector(psi) + p * maximally_mixed(d);
}

/// r rho + (1 - r) 1/d.
inline Operator depolarized(const Operator& rho, double r) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) throw DomainError("depolarized: r outside [0, 1]");
  return r * rho + (1.0 - r) * maximally_mixed(static_cast<int>(rho.rows()));
}

inline bool commutes_with_parity(const Operator& rho, double tol = kSubspaceTol) {
  if (rho.rows() != 3 || rho.cols() != 3) return false;
  const Operator a = parity_operator(3);
  return (a * rho - rho * a).cwiseAbs().maxCoeff() <= tol;
}

/// Bloch coordinates of the (|0>, |N>) block: z = B00 - B11, x + i y = 2 B10.
inline CartesianPoint cartesian_of(const Operator& rho) {
  if (!commutes_with_parity(rho)) throw SubspaceError("cartesian_of: state does not commute with A_{0,0}");
  const double s = 1.0 / std::numbers::sqrt2;
  const cplx b00 = rho(0, 0);
  const cplx b11 = 0.5 * (rho(1, 1) + rho(1, 2) + rho(2, 1) + rho(2, 2));
  const cplx b10 = s * (rho(1, 0) + rho(2, 0));
  return {2.0 * b10.real(), 2.0 * b10.imag(), (b00 - b11).real()};
}

inline AbbPoint abb_point_of(const Operator& rho) { return AbbPoint::from_cartesian(cartesian_of(rho)); }

inline Ket north_pole_ket() { return basis_ket(3, 0); }

/// |N> = (|1> + |2>)/sqrt2.
inline Ket south_pole_ket() { return abb_ket(std::numbers::pi / 2, 0.0); }

/// Norrell state (2, -1, -1)/sqrt6.
inline Ket norrell_ket() {
  Ket v(3);
  v << 2.0, -1.0, -1.0;
  return v / std::sqrt(6.0);
}

/// Edge-code limiting state, amplitudes as published (6 decimals), renormalized.
inline Ket edge_ket_E() {
  Ket v(3);
  v << 0.774149, 0.447601, 0.447601;
  return v.normalized();
}

inline double fourier_theta() { return 0.5 * std::acos(1.0 / std::sqrt(3.0)); }

/// +1 eigenstate of the qutrit Fourier transform: the maximally robust edge state.
inline Ket fourier_plus_ket() { return abb_ket(fourier_theta(), 0.0); }

inline Operator norrell_state() { return projector(norrell_ket()); }
inline Operator edge_state_E() { return projector(edge_ket_E()); }
inline Operator fourier_plus_state() { return projector(fourier_plus_ket()); }

struct WedgeImage {
  Operator rho;
  SymplecticMat2 f;
};

/// Maps rho onto the reference wedge with one of the 12 PSL(2, Z_3) unitaries:
/// maximize z, then x, then take the lexicographically smallest F.
inline WedgeImage wedge_canonicalize(const Operator& rho) {
  if (!commutes_with_parity(rho)) throw SubspaceError("wedge_canonicalize: state is outside the (a,b,b) subspace");
  constexpr double tie = 1e-9;
  std::optional<WedgeImage> best;
  CartesianPoint best_c;
  for (const auto& f : enumerate_psl2(3)) {
    const Operator u = clifford_unitary(f);
    Operator img = u * rho * u.adjoint();
    const CartesianPoint c = cartesian_of(img);
    bool better = !best.has_value();
    if (!better) {
      if (c.z > best_c.z + tie) {
        better = true;
      } else if (std::abs(c.z - best_c.z) <= tie && c.x > best_c.x + tie) {
        better = true;
      }
    }
    if (better) {
      best = WedgeImage{std::move(img), f};
      best_c = c;
    }
  }
  return *best;
}

/// D_u^dag rho D_u for the first phase-space point u (row-major) whose
/// phase-point operator commutes with rho, i.e. an image inside the
/// (a,b,b) subspace; nullopt if none exists.
inline std::optional<Operator> displace_into_abb(const Operator& rho, double tol = kSubspaceTol) {
  for (int x = 0; x < 3; ++x)
    for (int z = 0; z < 3; ++z) {
      const Operator dxz = displacement(x, z, 3);
      Operator img = dxz.adjoint() * rho * dxz;
      if (commutes_with_parity(img, tol)) return img;
    }
  return std::nullopt;
}

/// Distinct pure states in the Clifford orbit D_u U_F |psi>, up to phase.
inline std::vector<Ket> clifford_orbit(const Ket& psi) {
  std::vector<Ket> orbit;
  for (const auto& f : enumerate_sl2(3)) {
    const Ket v = clifford_unitary(f) * psi;
    for (int x = 0; x < 3; ++x)
      for (int z = 0; z < 3; ++z) {
        const Ket w = displacement(x, z, 3) * v;
        bool seen = false;
        for (const Ket& o : orbit)
          if (std::abs(std::abs(o.dot(w)) - 1.0) < 1e-9) {
            seen = true;
            break;
          }
        if (!seen) orbit.push_back(w);
      }
  }
  return orbit;
}

/// Euclidean distance in the ball from p to the Wigner-tetrahedron edge arc
/// joining |0> (2theta = 0) and (1,1,1)/sqrt3 (2theta = arccos(-1/3)) at phi = 0.
inline double distance_to_edge_arc(const CartesianPoint& p) {
  const double end = std::acos(-1.0 / 3.0);
  const double angle = std::clamp(std::atan2(p.x, p.z), 0.0, end);
  const double dx = p.x - std::sin(angle);
  const double dz = p.z - std::cos(angle);
  return std::sqrt(dx * dx + p.y * p.y + dz * dz);
}

}  // namespace qmsd
