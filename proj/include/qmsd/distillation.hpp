#pragma once

// n-to-1 distillation by trivial-syndrome postselection, its fixed-point
// iteration, depolarizing-axis thresholds and region scans.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qmsd/abb_geometry.hpp"
#include "qmsd/errors.hpp"
#include "qmsd/parallel.hpp"
#include "qmsd/qudit_ops.hpp"
#include "qmsd/stab_codes.hpp"
#include "qmsd/wigner.hpp"

namespace qmsd {

inline constexpr double kMinSuccessProbability = 1e-14;
inline constexpr double kDistillFidelity = 0.99;
inline constexpr int kDefaultMaxIters = 200;
inline constexpr double kDefaultConvergenceTol = 1e-12;

struct RoundResult {
  Operator rho_out;
  double p_succ = 0.0;
};

/// A code with its codespace precomputed, ready for repeated rounds.
class Distiller {
 public:
  explicit Distiller(StabilizerCode code) : code_(std::move(code)), space_(logical_isometry(code_)) {
    if (code_.d != kQutrit) throw DomainError("Distiller: only qutrit codes are supported");
  }

  const StabilizerCode& code() const { return code_; }
  const CodeSpace& space() const { return space_; }

  /// Tr(Pi rho^(x)n) = Tr(V^dag rho^(x)n V), since Pi = V V^dag.
  double success_probability(const Operator& rho) const { return unnormalized(rho).trace().real(); }

  /// rho_out = V^dag rho^(x)n V / p_succ. The Hermitian part is kept: the
  /// map amplifies anti-Hermitian rounding error from one round to the next.
  RoundResult round(const Operator& rho) const {
    const Operator out = unnormalized(rho);
    const double p = out.trace().real();
    if (!(p >= kMinSuccessProbability))
      throw PostselectionImpossible("distill_round: trivial-syndrome probability " + std::to_string(p));
    return {hermitian_part(out / p), std::min(1.0, p)};
  }

 private:
  // V^dag (rho (x) ... (x) rho) V, applying rho one tensor leg at a time.
  Operator unnormalized(const Operator& rho) const {
    const int d = code_.d;
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("distill_round: input is not a single-qudit operator");
    Operator m = space_.isometry;
    const Eigen::Index dim = m.rows();
    Operator next(dim, m.cols());
    Eigen::Index stride = dim;
    for (int leg = 0; leg < code_.n; ++leg) {
      stride /= d;
      for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const Eigen::Index digit = (idx / stride) % d;
        const Eigen::Index base = idx - digit * stride;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          cplx s = 0.0;
          for (int b = 0; b < d; ++b) s += rho(digit, b) * m(base + b * stride, c);
          next(idx, c) = s;
        }
      }
      std::swap(m, next);
    }
    return space_.isometry.adjoint() * m;
  }

  StabilizerCode code_;
  CodeSpace space_;
};

inline void require_input_state(const Operator& rho) {
  if (rho.rows() != kQutrit || rho.cols() != kQutrit) throw DimensionError("distillation input must be 3x3");
  if (!is_density_matrix(rho, 1e-9)) throw InvalidState("distillation input is not a density matrix");
}

inline RoundResult distill_round(const Distiller& distiller, const Operator& rho_in) {
  require_input_state(rho_in);
  return distiller.round(rho_in);
}

inline RoundResult distill_round(const StabilizerCode& code, const Operator& rho_in) {
  return distill_round(Distiller(code), rho_in);
}

inline double success_probability(const Distiller& distiller, const Operator& rho_in) {
  require_input_state(rho_in);
  return distiller.success_probability(rho_in);
}

inline double success_probability(const StabilizerCode& code, const Operator& rho_in) {
  return success_probability(Distiller(code), rho_in);
}

struct IterationTrace {
  /// Input followed by the output of every round.
  std::vector<Operator> states;
  /// Fidelity of each entry of `states` with the target, when one was given.
  std::vector<double> fidelities;
  std::vector<double> success_probabilities;
  bool converged = false;
  int iterations = 0;
  Operator fixed_point;

  double final_fidelity() const { return fidelities.empty() ? 0.0 : fidelities.back(); }
};

struct IterationOptions {
  int max_iters = kDefaultMaxIters;
  double tol = kDefaultConvergenceTol;
  /// Keep every intermediate state (otherwise only the first and last).
  bool keep_states = true;
};

/// Feeds each output back as all n inputs until consecutive states are
/// within `tol` in trace distance or `max_iters` rounds have run.
inline IterationTrace iterate_to_fixed_point(const Distiller& distiller, const Operator& rho0,
                                             const std::optional<Ket>& target = std::nullopt,
                                             const IterationOptions& opts = {}) {
  require_input_state(rho0);
  IterationTrace trace;
  trace.states.push_back(rho0);
  if (target) trace.fidelities.push_back(fidelity(rho0, *target));
  Operator current = rho0;
  for (int it = 0; it < opts.max_iters; ++it) {
    RoundResult r = distiller.round(current);
    const double step = trace_distance(r.rho_out, current);
    current = std::move(r.rho_out);
    ++trace.iterations;
    trace.success_probabilities.push_back(r.p_succ);
    if (target) trace.fidelities.push_back(fidelity(current, *target));
    if (opts.keep_states || step < opts.tol || it + 1 == opts.max_iters) trace.states.push_back(current);
    if (step < opts.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.fixed_point = current;
  return trace;
}

inline IterationTrace iterate_to_fixed_point(const StabilizerCode& code, const Operator& rho0,
                                             const std::optional<Ket>& target = std::nullopt,
                                             const IterationOptions& opts = {}) {
  return iterate_to_fixed_point(Distiller(code), rho0, target, opts);
}

/// Eigenvector of the largest eigenvalue, rephased so its largest entry is real positive.
inline Ket principal_ket(const Operator& rho, double* eigenvalue = nullptr) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(rho));
  const Eigen::Index last = rho.rows() - 1;
  Ket v = es.eigenvectors().col(last);
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  v *= std::conj(v(big)) / std::abs(v(big));
  if (eigenvalue) *eigenvalue = es.eigenvalues()(last);
  return v;
}

struct ThresholdOptions {
  double p_lo = 0.0;
  double p_hi = 1.0;
  double tol = 1e-6;
  int max_iters = kDefaultMaxIters;
  double fidelity_cut = kDistillFidelity;
};

struct ThresholdResult {
  double p_star = 0.0;
  double bracket_width = 0.0;
  /// Largest noise rate seen to distill, and smallest seen to fail.
  double p_distills = 0.0;
  double p_fails = 1.0;
  double fidelity_at_distills = 0.0;
  double fidelity_at_fails = 0.0;
  /// The code's limiting state reached from the target axis.
  Ket limiting_state;
  int bisection_steps = 0;
  long total_rounds = 0;
};

/// Bisection over the depolarizing axis (1 - p)|target><target| + p 1/3.
///
/// The limiting state is the fixed point reached from the noisiest end that
/// must distill (p_lo); it has to be a pure state outside the Wigner
/// polytope. A noise rate "distills" when iterating from it ends with
/// fidelity > fidelity_cut against that limiting state.
inline ThresholdResult threshold_bisection(const Distiller& distiller, const Ket& target,
                                           const ThresholdOptions& opts = {}) {
  if (target.size() != kQutrit) throw DimensionError("threshold_bisection: target must be a qutrit ket");
  if (!(opts.p_lo >= 0.0 && opts.p_lo < opts.p_hi && opts.p_hi <= 1.0))
    throw DomainError("threshold_bisection: need 0 <= p_lo < p_hi <= 1");
  const Ket axis = target.normalized();
  ThresholdResult result;
  IterationOptions iopts{opts.max_iters, kDefaultConvergenceTol, false};

  IterationTrace start;
  try {
    start = iterate_to_fixed_point(distiller, depolarize(axis, opts.p_lo), std::nullopt, iopts);
  } catch (const PostselectionImpossible& e) {
    throw NoThresholdInBracket(std::string("no limiting state from the target: ") + e.what());
  }
  result.total_rounds += start.iterations;
  double top = 0.0;
  result.limiting_state = principal_ket(start.fixed_point, &top);
  const Operator limiting = projector(result.limiting_state);
  if (top < opts.fidelity_cut || in_wigner_polytope(limiting).inside)
    throw NoThresholdInBracket("iterating from p_lo does not reach a pure magic state (largest eigenvalue " +
                               std::to_string(top) + "); the target axis is not distillable by this code");

  auto final_fidelity = [&](double p) {
    try {
      const auto tr = iterate_to_fixed_point(distiller, depolarize(axis, p), result.limiting_state, iopts);
      result.total_rounds += tr.iterations;
      return tr.final_fidelity();
    } catch (const PostselectionImpossible&) {
      return 0.0;
    }
  };

  double lo = opts.p_lo;
  double hi = opts.p_hi;
  double f_lo = final_fidelity(lo);
  double f_hi = final_fidelity(hi);
  if ((f_lo > opts.fidelity_cut) == (f_hi > opts.fidelity_cut))
    throw NoThresholdInBracket("same classification at p = " + std::to_string(lo) + " and p = " + std::to_string(hi));
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    const double f = final_fidelity(mid);
    if (f > opts.fidelity_cut) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
    ++result.bisection_steps;
  }
  result.p_distills = lo;
  result.p_fails = hi;
  result.p_star = 0.5 * (lo + hi);
  result.bracket_width = hi - lo;
  result.fidelity_at_distills = f_lo;
  result.fidelity_at_fails = f_hi;
  return result;
}

inline ThresholdResult threshold_bisection(const StabilizerCode& code, const Ket& target,
                                           const ThresholdOptions& opts = {}) {
  return threshold_bisection(Distiller(code), target, opts);
}

inline double edge_theta_max() { return std::acos(1.0 / std::sqrt(3.0)); }

inline void require_edge_theta(double theta, const char* what) {
  if (!std::isfinite(theta) || theta < -kAngleSlack || theta > edge_theta_max() + kAngleSlack)
    throw DomainError(std::string(what) + ": theta outside [0, arccos(1/sqrt3)]");
}

/// p*(theta) = 1 - 4 / (1 + 3 cos 2theta + 3 sqrt2 sin 2theta) along the
/// Wigner-tetrahedron edge (x, y, z) = (sin 2theta, 0, cos 2theta).
inline double edge_threshold_formula(double theta) {
  require_edge_theta(theta, "edge_threshold_formula");
  const double c = std::cos(2 * theta);
  const double s = std::sin(2 * theta);
  return 1.0 - 4.0 / (1.0 + 3.0 * c + 3.0 * std::numbers::sqrt2 * s);
}

/// Wigner table of the edge state at its threshold:
///   [[r, s, s], [t, 0, 0], [t, 0, 0]]  (rows x, columns z).
/// t is written as 3 sqrt2 sin 2theta / D, which equals
/// sqrt2 / (3 cot 2theta + csc 2theta + 3 sqrt2) and stays finite at theta = 0.
inline WignerTable edge_boundary_wigner(double theta) {
  require_edge_theta(theta, "edge_boundary_wigner");
  const double c = std::cos(2 * theta);
  const double s = std::sin(2 * theta);
  const double sq2 = std::numbers::sqrt2;
  const double den = 9.0 * c + 9.0 * sq2 * s + 3.0;
  const double r = (c + sq2 * s + 3.0) / den;
  const double sv = (4.0 * c + sq2 * s) / den;
  const double t = 3.0 * sq2 * s / den;
  WignerTable w{3, std::vector<double>(9, 0.0)};
  w.at(0, 0) = r;
  w.at(0, 1) = sv;
  w.at(0, 2) = sv;
  w.at(1, 0) = t;
  w.at(2, 0) = t;
  return w;
}

enum class RegionClass { Stabilizer, PositiveWigner, Distills, NegativeUndistilled };

inline std::string_view to_string(RegionClass c) {
  switch (c) {
    case RegionClass::Stabilizer:
      return "STAB";
    case RegionClass::PositiveWigner:
      return "POSW";
    case RegionClass::Distills:
      return "DISTILL";
    case RegionClass::NegativeUndistilled:
      return "NEGUNDIST";
  }
  return "?";
}

enum class ScanPlane { XZ, YZ, XY, Wedge };

inline ScanPlane parse_scan_plane(std::string_view s) {
  if (s == "xz") return ScanPlane::XZ;
  if (s == "yz") return ScanPlane::YZ;
  if (s == "xy") return ScanPlane::XY;
  if (s == "wedge") return ScanPlane::Wedge;
  throw DomainError("unknown scan plane '" + std::string(s) + "' (expected xz, yz, xy or wedge)");
}

struct GridSpec {
  ScanPlane plane = ScanPlane::XZ;
  /// Points per axis.
  int n = 101;
  /// Shell radius for the wedge grid.
  double r = 1.0;
  int max_iters = kDefaultMaxIters;
  /// 0: use hardware_concurrency (capped by THREADS).
  unsigned threads = 0;
};

struct ScanRow {
  /// Plane scans: the two in-plane Cartesian coordinates. Wedge: theta, phi.
  double coord1 = 0.0;
  double coord2 = 0.0;
  RegionClass cls = RegionClass::Stabilizer;
  double fidelity = 0.0;
  double p_succ = 0.0;
};

/// The ball point for one grid node, or nullopt outside the unit disk.
inline std::optional<AbbPoint> grid_point(const GridSpec& g, int i, int j) {
  const double u = g.n == 1 ? 0.0 : static_cast<double>(i) / (g.n - 1);
  const double v = g.n == 1 ? 0.0 : static_cast<double>(j) / (g.n - 1);
  if (g.plane == ScanPlane::Wedge) {
    const double theta = u * std::numbers::pi / 2;
    const double phi = -std::numbers::pi / 3 + v * 2.0 * std::numbers::pi / 3;
    return AbbPoint(g.r, theta, phi);
  }
  const double a = -1.0 + 2.0 * u;
  const double b = -1.0 + 2.0 * v;
  if (a * a + b * b > 1.0 + 1e-12) return std::nullopt;
  CartesianPoint p;
  switch (g.plane) {
    case ScanPlane::XZ:
      p = {a, 0.0, b};
      break;
    case ScanPlane::YZ:
      p = {0.0, a, b};
      break;
    default:
      p = {a, b, 0.0};
      break;
  }
  const double nrm = p.norm();
  if (nrm > 1.0) p = {p.x / nrm, p.y / nrm, p.z / nrm};
  return AbbPoint::from_cartesian(p);
}

/// Classifies one state in the order STAB, POSW, DISTILL, NEGUNDIST.
inline ScanRow classify_point(const Distiller& distiller, const Ket& limiting, const Operator& rho, int max_iters) {
  ScanRow row;
  IterationOptions iopts{max_iters, kDefaultConvergenceTol, false};
  try {
    row.p_succ = distiller.success_probability(rho);
    const auto tr = iterate_to_fixed_point(distiller, rho, limiting, iopts);
    row.fidelity = tr.final_fidelity();
  } catch (const PostselectionImpossible&) {
    row.fidelity = 0.0;
  }
  if (in_stabilizer_polytope(rho).inside)
    row.cls = RegionClass::Stabilizer;
  else if (in_wigner_polytope(rho).inside)
    row.cls = RegionClass::PositiveWigner;
  else if (row.fidelity > kDistillFidelity)
    row.cls = RegionClass::Distills;
  else
    row.cls = RegionClass::NegativeUndistilled;
  return row;
}

/// Grid rows in row-major (coord1, coord2) order, independent of threading.
inline std::vector<ScanRow> scan_region(const Distiller& distiller, const Ket& limiting, const GridSpec& grid) {
  if (grid.n < 1) throw DomainError("scan_region: grid needs at least one point per axis");
  struct Node {
    double c1, c2;
    Operator rho;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      const auto pt = grid_point(grid, i, j);
      if (!pt) continue;
      double c1 = 0.0;
      double c2 = 0.0;
      if (grid.plane == ScanPlane::Wedge) {
        c1 = static_cast<double>(i) / std::max(1, grid.n - 1) * std::numbers::pi / 2;
        c2 = -std::numbers::pi / 3 + static_cast<double>(j) / std::max(1, grid.n - 1) * 2.0 * std::numbers::pi / 3;
      } else {
        c1 = grid.n == 1 ? -1.0 : -1.0 + 2.0 * i / (grid.n - 1);
        c2 = grid.n == 1 ? -1.0 : -1.0 + 2.0 * j / (grid.n - 1);
      }
      nodes.push_back({c1, c2, pt->rho()});
    }
  std::vector<ScanRow> rows(nodes.size());
  parallel_for(nodes.size(), grid.threads, [&](std::size_t k) {
    rows[k] = classify_point(distiller, limiting, nodes[k].rho, grid.max_iters);
    rows[k].coord1 = nodes[k].c1;
    rows[k].coord2 = nodes[k].c2;
  });
  return rows;
}

inline std::string format_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "coord1,coord2,class,fidelity,p_succ\n";
  for (const auto& r : rows)
    os << format_sig9(r.coord1) << ',' << format_sig9(r.coord2) << ',' << to_string(r.cls) << ','
       << format_sig9(r.fidelity) << ',' << format_sig9(r.p_succ) << '\n';
}

}  // namespace qmsd
