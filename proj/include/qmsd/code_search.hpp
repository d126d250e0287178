#pragma once

// Randomized search over four-qutrit, one-logical stabilizer codes and
// classification of the fixed points of their distillation maps.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmsd/abb_geometry.hpp"
#include "qmsd/distillation.hpp"
#include "qmsd/parallel.hpp"
#include "qmsd/stab_codes.hpp"
#include "qmsd/wigner.hpp"

namespace qmsd {

inline constexpr double kDedupTol = 1e-6;
inline constexpr double kEdgeArcTol = 1e-4;
inline constexpr double kFaceOrbitTol = 1e-4;
inline constexpr double kFixedPointCheckTol = 1e-9;

/// Seeded generator of Z_3 symbols. Uses value % 3 of a 64-bit Mersenne
/// twister, which is identical on every standard library.
class CodeRng {
 public:
  explicit CodeRng(std::uint64_t seed) : engine_(seed) {}
  int symbol(int d = kQutrit) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(d)); }

  std::vector<int> row(std::size_t len, int d = kQutrit) {
    std::vector<int> r(len);
    for (auto& v : r) v = symbol(d);
    return r;
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline int row_product(const std::vector<int>& u, const std::vector<int>& v, int d) {
  return symplectic_product(PauliLabel::from_row(u, d), PauliLabel::from_row(v, d));
}

inline bool independent_of(std::vector<std::vector<int>> rows, const std::vector<int>& v, int d) {
  const int before = rank_mod(rows, d);
  rows.push_back(v);
  return rank_mod(rows, d) == before + 1;
}

}  // namespace detail

/// A random [[4,1]]_3 code: three independent, pairwise-commuting generators
/// drawn by rejection, then Z_L from the commutant outside the stabilizer span
/// and X_L from the commutant with <Z_L, X_L> scaled to 1.
inline StabilizerCode random_code(CodeRng& rng) {
  constexpr int d = kQutrit;
  constexpr int n = 4;
  std::vector<std::vector<int>> gens;
  while (gens.size() < 3) {
    auto v = rng.row(2 * n, d);
    bool ok = detail::independent_of(gens, v, d);
    for (const auto& g : gens) ok = ok && detail::row_product(g, v, d) == 0;
    if (ok) gens.push_back(std::move(v));
  }
  auto in_commutant = [&](const std::vector<int>& v) {
    for (const auto& g : gens)
      if (detail::row_product(g, v, d) != 0) return false;
    return true;
  };
  std::vector<int> zl;
  while (true) {
    auto v = rng.row(2 * n, d);
    if (in_commutant(v) && detail::independent_of(gens, v, d)) {
      zl = std::move(v);
      break;
    }
  }
  std::vector<int> xl;
  while (true) {
    auto v = rng.row(2 * n, d);
    if (!in_commutant(v)) continue;
    const int p = detail::row_product(zl, v, d);
    if (p == 0) continue;
    const int s = inv_mod(p, d);
    for (auto& e : v) e = mod(static_cast<long long>(e) * s, d);
    xl = std::move(v);
    break;
  }
  return StabilizerCode::from_rows(gens, zl, xl, d);
}

enum class HitClass { EdgeType, FaceType, Stabilizer, Other };

inline std::string_view to_string(HitClass c) {
  switch (c) {
    case HitClass::EdgeType:
      return "edge";
    case HitClass::FaceType:
      return "face";
    case HitClass::Stabilizer:
      return "stabilizer";
    case HitClass::Other:
      return "other";
  }
  return "?";
}

/// 60 starting points: 10 per meridian phi = k pi/3 (k = 0..5), theta evenly
/// spaced over [0, pi/2], at r = 0.9.
inline std::vector<AbbPoint> default_starting_ensemble() {
  std::vector<AbbPoint> pts;
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 10; ++i) pts.emplace_back(0.9, (std::numbers::pi / 2) * i / 9.0, k * std::numbers::pi / 3);
  return pts;
}

struct SearchConfig {
  std::uint64_t seed = 0;
  int num_candidates = 0;
  int max_iters = kDefaultMaxIters;
  /// Empty: default_starting_ensemble().
  std::vector<AbbPoint> starts;
  unsigned threads = 0;
};

struct SearchHit {
  StabilizerCode code;
  Operator fixed_point;
  /// Wedge-canonical coordinates, when the fixed point can be displaced into
  /// the (a,b,b) subspace.
  std::optional<AbbPoint> abb;
  double sum_negativity = 0.0;
  HitClass cls = HitClass::Other;
};

/// The Clifford orbit of the Norrell state.
inline const std::vector<Ket>& norrell_orbit() {
  static const std::vector<Ket> orbit = clifford_orbit(norrell_ket());
  return orbit;
}

/// Labels a fixed point: stabilizer, then edge-type, face-type, other.
inline HitClass label_fixed_point(const Operator& rho, std::optional<AbbPoint>* abb_out = nullptr) {
  std::optional<AbbPoint> abb;
  if (auto img = displace_into_abb(rho)) abb = abb_point_of(wedge_canonicalize(*img).rho);
  if (abb_out) *abb_out = abb;
  if (in_stabilizer_polytope(rho).inside) return HitClass::Stabilizer;
  if (abb && distance_to_edge_arc(abb->cartesian()) <= kEdgeArcTol) return HitClass::EdgeType;
  for (const Ket& v : norrell_orbit())
    if (trace_distance(rho, projector(v)) <= kFaceOrbitTol) return HitClass::FaceType;
  return HitClass::Other;
}

/// Distinct converged fixed points reached from the starting ensemble.
inline std::vector<SearchHit> classify_code(const StabilizerCode& code, const SearchConfig& config) {
  const Distiller distiller(code);
  const auto starts = config.starts.empty() ? default_starting_ensemble() : config.starts;
  std::vector<Operator> fixed;
  IterationOptions iopts{config.max_iters, kDefaultConvergenceTol, false};
  for (const auto& s : starts) {
    IterationTrace tr;
    try {
      tr = iterate_to_fixed_point(distiller, s.rho(), std::nullopt, iopts);
    } catch (const PostselectionImpossible&) {
      continue;
    }
    if (!tr.converged) continue;
    bool seen = false;
    for (const auto& f : fixed)
      if (trace_distance(f, tr.fixed_point) < kDedupTol) {
        seen = true;
        break;
      }
    if (!seen) fixed.push_back(tr.fixed_point);
  }

  std::vector<SearchHit> hits;
  for (auto& rho : fixed) {
    try {
      if (max_abs_diff(distiller.round(rho).rho_out, rho) > kFixedPointCheckTol) continue;
    } catch (const PostselectionImpossible&) {
      continue;
    }
    SearchHit h;
    h.code = code;
    h.cls = label_fixed_point(rho, &h.abb);
    h.sum_negativity = sum_negativity(rho);
    h.fixed_point = std::move(rho);
    hits.push_back(std::move(h));
  }
  return hits;
}

struct AtlasRow {
  int code_id = 0;
  HitClass cls = HitClass::Other;
  std::optional<AbbPoint> abb;
  double sum_negativity = 0.0;
};

struct AtlasReport {
  std::vector<AtlasRow> rows;
  /// Codes with at least one row, keyed by code_id.
  std::vector<std::pair<int, StabilizerCode>> codes;
  int candidates = 0;
};

/// Runs every config in order. Code ids number candidates consecutively
/// across configs; rows are emitted for every non-stabilizer fixed point.
inline AtlasReport atlas(std::span<const SearchConfig> configs) {
  AtlasReport report;
  int base_id = 0;
  for (const auto& cfg : configs) {
    if (cfg.num_candidates <= 0) continue;
    CodeRng rng(cfg.seed);
    std::vector<StabilizerCode> codes;
    for (int i = 0; i < cfg.num_candidates; ++i) codes.push_back(random_code(rng));
    std::vector<std::vector<SearchHit>> hits(codes.size());
    parallel_for(codes.size(), cfg.threads, [&](std::size_t i) { hits[i] = classify_code(codes[i], cfg); });
    for (std::size_t i = 0; i < codes.size(); ++i) {
      const int id = base_id + static_cast<int>(i);
      bool any = false;
      for (const auto& h : hits[i]) {
        if (h.cls == HitClass::Stabilizer) continue;
        report.rows.push_back({id, h.cls, h.abb, h.sum_negativity});
        any = true;
      }
      if (any) report.codes.emplace_back(id, codes[i]);
    }
    base_id += cfg.num_candidates;
    report.candidates += cfg.num_candidates;
  }
  return report;
}

/// phi mapped into (-pi, pi].
inline double signed_phi(double phi) { return phi > std::numbers::pi ? phi - 2.0 * std::numbers::pi : phi; }

inline void write_atlas_csv(std::ostream& os, const AtlasReport& report) {
  os << "code_id,fixed_point_class,theta,phi,r,sum_negativity\n";
  for (const auto& row : report.rows) {
    os << row.code_id << ',' << to_string(row.cls) << ',';
    if (row.abb)
      os << format_sig9(row.abb->theta()) << ',' << format_sig9(signed_phi(row.abb->phi())) << ','
         << format_sig9(row.abb->r());
    else
      os << "nan,nan,nan";
    os << ',' << format_sig9(row.sum_negativity) << '\n';
  }
}

inline nlohmann::json atlas_codes_json(const AtlasReport& report) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, code] : report.codes) j[std::to_string(id)] = code_to_json(code);
  return j;
}

}  // namespace qmsd
