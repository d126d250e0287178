// qmsd: command-line front end for the qutrit distillation library.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qmsd/acceptance.hpp"
#include "qmsd/qmsd.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateSpec {
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<double> r;
  std::string named;
  std::string json;

  void attach(CLI::App* app, const std::string& prefix = "") {
    app->add_option("--" + prefix + "theta", theta, "polar angle theta in [0, pi/2]");
    app->add_option("--" + prefix + "phi", phi, "azimuth phi");
    app->add_option("--" + prefix + "r", r, "radius r in [0, 1] (1 - depolarizing rate)")->check(CLI::Range(0.0, 1.0));
    app->add_option("--" + prefix + "named", named, "named state: E, norrell, norrell-wedge, fourier, zero, N");
    app->add_option("--" + prefix + "json", json, "JSON file with {\"ket\": [[re, im], ...]} or {\"rho\": [[[re, im], ...], ...]}");
  }

  /// --r may accompany any of the three forms; alone it means theta = phi = 0.
  int count() const {
    const int forms = (theta || phi ? 1 : 0) + (named.empty() ? 0 : 1) + (json.empty() ? 0 : 1);
    return forms == 0 && r ? 1 : forms;
  }
};

qmsd::Ket named_ket(const std::string& name) {
  if (name == "E") return qmsd::edge_ket_E();
  if (name == "norrell") return qmsd::norrell_ket();
  if (name == "norrell-wedge") return qmsd::principal_ket(qmsd::wedge_canonicalize(qmsd::norrell_state()).rho);
  if (name == "fourier") return qmsd::fourier_plus_ket();
  if (name == "zero") return qmsd::north_pole_ket();
  if (name == "N") return qmsd::south_pole_ket();
  throw UsageError("unknown named state '" + name + "' (expected E, norrell, norrell-wedge, fourier, zero, N)");
}

qmsd::cplx read_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw qmsd::DomainError("complex numbers are written as [re, im]");
  return {v[0], v[1]};
}

qmsd::Operator json_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qmsd::DomainError("cannot open state file " + path);
  try {
    nlohmann::json j;
    in >> j;
    if (j.contains("ket")) {
      const auto& k = j.at("ket");
      if (k.size() != 3) throw qmsd::DomainError("state file: ket must have 3 entries");
      qmsd::Ket v(3);
      for (int i = 0; i < 3; ++i) v(i) = read_complex(k[i]);
      if (v.norm() == 0.0) throw qmsd::DomainError("state file: zero ket");
      return qmsd::projector(v.normalized());
    }
    const auto& m = j.at("rho");
    if (m.size() != 3) throw qmsd::DomainError("state file: rho must be 3x3");
    qmsd::Operator rho(3, 3);
    for (int a = 0; a < 3; ++a) {
      if (m[a].size() != 3) throw qmsd::DomainError("state file: rho must be 3x3");
      for (int b = 0; b < 3; ++b) rho(a, b) = read_complex(m[a][b]);
    }
    if (!qmsd::is_density_matrix(rho, 1e-9)) throw qmsd::InvalidState("state file: rho is not a density matrix");
    return rho;
  } catch (const nlohmann::json::exception& e) {
    throw qmsd::DomainError(std::string("state file ") + path + ": " + e.what());
  }
}

qmsd::Operator resolve_state(const StateSpec& s) {
  if (s.count() != 1) throw UsageError("give exactly one state: --theta/--phi/--r, --named, or --json");
  const double r = s.r.value_or(1.0);
  if (!s.named.empty()) return qmsd::depolarized(qmsd::projector(named_ket(s.named)), r);
  if (!s.json.empty()) return qmsd::depolarized(json_state(s.json), r);
  return qmsd::AbbPoint(r, s.theta.value_or(0.0), s.phi.value_or(0.0)).rho();
}

/// Pure target for threshold/scan: named, JSON ket, or (theta, phi).
qmsd::Ket resolve_target(const StateSpec& s) {
  if (s.count() != 1) throw UsageError("give exactly one target: --target-theta/--target-phi, --target-named, or --target-json");
  if (s.r && std::abs(*s.r - 1.0) > 1e-12) throw UsageError("a target must be pure (omit --target-r)");
  if (!s.named.empty()) return named_ket(s.named);
  const qmsd::Operator rho = s.json.empty() ? qmsd::pure_state(s.theta.value_or(0.0), s.phi.value_or(0.0)) : json_state(s.json);
  double top = 0.0;
  const qmsd::Ket v = qmsd::principal_ket(rho, &top);
  if (std::abs(top - 1.0) > 1e-9) throw UsageError("a target must be a pure state");
  return v;
}

qmsd::StabilizerCode resolve_code(const std::string& arg) {
  if (arg == "edge") return qmsd::edge_code();
  if (arg == "face") return qmsd::face_code();
  return qmsd::load_code(arg);
}

void print_matrix(const qmsd::Operator& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::printf("  ");
    for (Eigen::Index j = 0; j < m.cols(); ++j) std::printf(" %+.9f%+.9fi", m(i, j).real(), m(i, j).imag());
    std::printf("\n");
  }
}

void print_verdicts(const qmsd::Operator& rho) {
  const auto w = qmsd::in_wigner_polytope(rho);
  const auto s = qmsd::in_stabilizer_polytope(rho);
  std::printf("Wigner polytope:     %s (min W = %.9g)\n", w.inside ? "inside" : "outside", w.margin);
  std::printf("stabilizer polytope: %s (LP margin = %.3g)\n", s.inside ? "inside" : "outside", s.margin + 0.0);
}

void print_coords(const qmsd::Operator& rho) {
  if (!qmsd::commutes_with_parity(rho)) {
    std::printf("(a,b,b) coordinates: n/a (state does not commute with A00)\n");
    return;
  }
  const auto p = qmsd::abb_point_of(rho);
  const auto c = p.cartesian();
  std::printf("(a,b,b) coordinates: r = %.9g, theta = %.9g, phi = %.9g; (x, y, z) = (%.9g, %.9g, %.9g)\n", p.r(), p.theta(),
              p.phi(), c.x, c.y, c.z);
}

int cmd_wigner(const StateSpec& state_opts, const std::string& csv) {
  const auto rho = resolve_state(state_opts);
  const auto w = qmsd::wigner_function(rho);
  std::printf("W(x, z)   z=0            z=1            z=2\n");
  for (int x = 0; x < 3; ++x) std::printf("x=%d  %+.9f   %+.9f   %+.9f\n", x, w.at(x, 0), w.at(x, 1), w.at(x, 2));
  std::printf("sum-negativity: %.9g\n", w.negativity());
  print_verdicts(rho);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw UsageError("cannot write " + csv);
    out << "x,z,W\n";
    for (int x = 0; x < 3; ++x)
      for (int z = 0; z < 3; ++z) out << x << ',' << z << ',' << qmsd::format_sig9(w.at(x, z)) << '\n';
  }
  return 0;
}

int cmd_membership(const StateSpec& state_opts) {
  const auto rho = resolve_state(state_opts);
  print_coords(rho);
  std::printf("sum-negativity: %.9g\n", qmsd::sum_negativity(rho));
  print_verdicts(rho);
  return 0;
}

int cmd_distill(const std::string& code_arg, const StateSpec& state_opts, int max_iters, double tol) {
  const qmsd::Distiller dist(resolve_code(code_arg));
  const auto rho = resolve_state(state_opts);
  const auto tr = qmsd::iterate_to_fixed_point(dist, rho, std::nullopt, {max_iters, tol, true});
  std::printf("round  p_succ        purity        min_W          sum_neg\n");
  for (std::size_t i = 1; i < tr.states.size(); ++i) {
    const auto& s = tr.states[i];
    const auto w = qmsd::wigner_function(s);
    std::printf("%5zu  %.9f  %.9f  %+.9f  %.9f\n", i, tr.success_probabilities[i - 1], (s * s).trace().real(), w.min(),
                w.negativity());
  }
  std::printf("%s after %d rounds\n", tr.converged ? "converged" : "not converged", tr.iterations);
  std::printf("final state:\n");
  print_matrix(tr.fixed_point);
  print_coords(tr.fixed_point);
  print_verdicts(tr.fixed_point);
  return 0;
}

int cmd_threshold(const std::string& code_arg, const StateSpec& target_opts, double p_lo, double p_hi, double tol) {
  const qmsd::Distiller dist(resolve_code(code_arg));
  const qmsd::Ket target = resolve_target(target_opts);
  qmsd::ThresholdOptions opts;
  opts.p_lo = p_lo;
  opts.p_hi = p_hi;
  opts.tol = tol;
  qmsd::ThresholdResult res;
  try {
    res = qmsd::threshold_bisection(dist, target, opts);
  } catch (const qmsd::NoThresholdInBracket& e) {
    std::fprintf(stderr,
                 "no threshold: %s\n"
                 "hint: the target axis must lead to a pure magic fixed point of the code. Stabilizer targets never do;\n"
                 "for the edge code use a target on the reference wedge (e.g. --target-named norrell-wedge).\n",
                 e.what());
    return kExitDomain;
  }
  std::printf("p* = %.9f\n", res.p_star);
  std::printf("bracket: distills at p = %.9f (F = %.6f), fails at p = %.9f (F = %.6f), width %.3g\n", res.p_distills,
              res.fidelity_at_distills, res.p_fails, res.fidelity_at_fails, res.bracket_width);
  std::printf("bisection steps: %d, distillation rounds: %ld\n", res.bisection_steps, res.total_rounds);
  std::printf("limiting state: (");
  for (int i = 0; i < 3; ++i)
    std::printf("%s%.6f%+.6fi", i ? ", " : "", res.limiting_state(i).real(), res.limiting_state(i).imag());
  std::printf(")\n");
  const qmsd::Operator t = qmsd::projector(target);
  if (qmsd::commutes_with_parity(t)) {
    const auto c = qmsd::cartesian_of(t);
    const auto p = qmsd::abb_point_of(t);
    if (std::abs(c.y) < 1e-9 && c.x >= -1e-12 && p.theta() <= qmsd::edge_theta_max() + 1e-12) {
      const double formula = qmsd::edge_threshold_formula(std::min(p.theta(), qmsd::edge_theta_max()));
      std::printf("edge closed form p*(theta = %.9f) = %.9f, difference %.3g\n", p.theta(), formula, res.p_star - formula);
    }
  }
  return 0;
}

int cmd_scan(const std::string& code_arg, const StateSpec& target_opts, const std::string& plane, int n, double r,
             int max_iters, unsigned threads, const std::string& out_path) {
  const auto code = resolve_code(code_arg);
  const qmsd::Distiller dist(code);
  qmsd::Ket start;
  if (target_opts.count() == 0) {
    if (code_arg == "edge")
      start = qmsd::edge_ket_E();
    else if (code_arg == "face")
      start = qmsd::norrell_ket();
    else
      throw UsageError("scan with a code file needs a target (--target-named, --target-theta/--target-phi or --target-json)");
  } else {
    start = resolve_target(target_opts);
  }
  double top = 0.0;
  const qmsd::Ket limiting = qmsd::principal_ket(qmsd::iterate_to_fixed_point(dist, qmsd::projector(start)).fixed_point, &top);
  if (top < qmsd::kDistillFidelity || qmsd::in_wigner_polytope(qmsd::projector(limiting)).inside)
    throw qmsd::DomainError("scan: the target does not lead to a pure magic fixed point of this code");
  qmsd::GridSpec g;
  g.plane = qmsd::parse_scan_plane(plane);
  g.n = n;
  g.r = r;
  g.max_iters = max_iters;
  g.threads = threads;
  const auto rows = qmsd::scan_region(dist, limiting, g);
  if (out_path.empty() || out_path == "-") {
    qmsd::write_scan_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    qmsd::write_scan_csv(out, rows);
  }
  return 0;
}

int cmd_search(std::uint64_t seed, int candidates, int max_iters, unsigned threads, const std::string& out_path,
               const std::string& codes_path) {
  qmsd::SearchConfig cfg;
  cfg.seed = seed;
  cfg.num_candidates = candidates;
  cfg.max_iters = max_iters;
  cfg.threads = threads;
  const auto report = qmsd::atlas(std::span<const qmsd::SearchConfig>(&cfg, 1));
  if (out_path.empty() || out_path == "-") {
    qmsd::write_atlas_csv(std::cout, report);
  } else {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    qmsd::write_atlas_csv(out, report);
  }
  if (!codes_path.empty()) {
    std::ofstream out(codes_path);
    if (!out) throw UsageError("cannot write " + codes_path);
    out << qmsd::atlas_codes_json(report).dump(2) << '\n';
  }
  std::fprintf(stderr, "%d candidates, %zu non-stabilizer fixed points in %zu codes\n", report.candidates,
               report.rows.size(), report.codes.size());
  return 0;
}

int cmd_verify(bool fast, const std::string& edge_path, const std::string& face_path) {
  qmsd::acceptance::Options opts;
  opts.fast = fast;
  if (!edge_path.empty()) opts.edge = qmsd::load_code(edge_path);
  if (!face_path.empty()) opts.face = qmsd::load_code(face_path);
  const auto results = qmsd::acceptance::run_all(opts);
  qmsd::acceptance::print_results(std::cout, results);
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) {
      ++failed;
      std::cout << "failed: [" << r.id << "] " << r.name << '\n';
    }
  std::cout << (results.size() - failed) << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmsd: qutrit magic state distillation analysis"};
  app.require_subcommand(1);

  StateSpec state;
  std::string csv_out;
  auto* wigner = app.add_subcommand("wigner", "print the discrete Wigner function of a state");
  state.attach(wigner);
  wigner->add_option("--csv", csv_out, "also write the table as CSV");

  auto* membership = app.add_subcommand("membership", "Wigner- and stabilizer-polytope membership of a state");
  state.attach(membership);

  std::string code_arg = "edge";
  int max_iters = qmsd::kDefaultMaxIters;
  double conv_tol = qmsd::kDefaultConvergenceTol;
  auto* distill = app.add_subcommand("distill", "iterate the distillation map from a state");
  distill->add_option("--code", code_arg, "edge, face, or a code JSON file")->capture_default_str();
  state.attach(distill);
  distill->add_option("--max-iters", max_iters, "maximum rounds")->check(CLI::Range(1, 100000))->capture_default_str();
  distill->add_option("--tol", conv_tol, "convergence tolerance (trace distance)")->check(CLI::PositiveNumber);

  StateSpec target;
  double p_lo = 0.0, p_hi = 1.0, bisect_tol = 1e-6;
  auto* threshold = app.add_subcommand("threshold", "depolarizing-noise threshold along a target axis");
  threshold->add_option("--code", code_arg, "edge, face, or a code JSON file")->capture_default_str();
  target.attach(threshold, "target-");
  threshold->add_option("--target", target.named, "shorthand for --target-named");
  threshold->add_option("--p-lo", p_lo, "lower end of the bracket")->check(CLI::Range(0.0, 1.0));
  threshold->add_option("--p-hi", p_hi, "upper end of the bracket")->check(CLI::Range(0.0, 1.0));
  threshold->add_option("--tol", bisect_tol, "bracket width")->check(CLI::Range(1e-12, 0.5));

  std::string plane = "xz", out_path;
  int grid_n = 101;
  double shell_r = 1.0;
  unsigned threads = 0;
  auto* scan = app.add_subcommand("scan", "classify a grid of states (STAB, POSW, DISTILL, NEGUNDIST) as CSV");
  scan->add_option("--code", code_arg, "edge, face, or a code JSON file")->capture_default_str();
  target.attach(scan, "target-");
  scan->add_option("--plane", plane, "xz, yz, xy or wedge")->check(CLI::IsMember({"xz", "yz", "xy", "wedge"}))->capture_default_str();
  scan->add_option("--n", grid_n, "grid points per axis")->check(CLI::Range(1, 2001))->capture_default_str();
  scan->add_option("--r", shell_r, "shell radius for the wedge grid")->check(CLI::Range(0.0, 1.0));
  scan->add_option("--max-iters", max_iters, "maximum rounds per point")->check(CLI::Range(1, 100000));
  scan->add_option("--threads", threads, "worker threads (0: all cores)");
  scan->add_option("--out", out_path, "output CSV (default stdout)");

  std::uint64_t seed = 0;
  int candidates = 100;
  std::string codes_out;
  auto* search = app.add_subcommand("search", "random code search; CSV of non-stabilizer fixed points");
  search->add_option("--seed", seed, "RNG seed")->required();
  search->add_option("--candidates", candidates, "number of random codes")->check(CLI::Range(0, 10000000))->capture_default_str();
  search->add_option("--max-iters", max_iters, "maximum rounds per start")->check(CLI::Range(1, 100000));
  search->add_option("--threads", threads, "worker threads (0: all cores)");
  search->add_option("--out", out_path, "output CSV (default stdout)");
  search->add_option("--codes-json", codes_out, "write the hit codes as JSON keyed by code_id");

  bool fast = false;
  std::string edge_path, face_path;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--fast", fast, "skip the region scan");
  verify->add_option("--edge-code", edge_path, "edge code JSON to use instead of the built-in table");
  verify->add_option("--face-code", face_path, "face code JSON to use instead of the built-in table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*wigner) return cmd_wigner(state, csv_out);
    if (*membership) return cmd_membership(state);
    if (*distill) return cmd_distill(code_arg, state, max_iters, conv_tol);
    if (*threshold) return cmd_threshold(code_arg, target, p_lo, p_hi, bisect_tol);
    if (*scan) return cmd_scan(code_arg, target, plane, grid_n, shell_r, max_iters, threads, out_path);
    if (*search) return cmd_search(seed, candidates, max_iters, threads, out_path, codes_out);
    if (*verify) return cmd_verify(fast, edge_path, face_path);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const qmsd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}
