#include <gtest/gtest.h>

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "qmsd/stab_codes.hpp"

using namespace qmsd;

namespace {

// Projector onto the common +1 eigenspace from the kernel of the stacked
// (G_i - 1), independent of the group-average construction.
Operator kernel_projector(const StabilizerCode& code) {
  const Eigen::Index dim = static_cast<Eigen::Index>(std::pow(code.d, code.n));
  Operator stacked(dim * static_cast<Eigen::Index>(code.generators.size()), dim);
  for (std::size_t i = 0; i < code.generators.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = displacement(code.generators[i]) - identity(dim);
  Eigen::FullPivLU<Operator> lu(stacked);
  lu.setThreshold(1e-10);
  const Operator k = lu.kernel();
  Eigen::HouseholderQR<Operator> qr(k);
  const Operator q = qr.householderQ() * Operator::Identity(k.rows(), k.cols());
  return q * q.adjoint();
}

int rank_of(const Operator& p) {
  int r = 0;
  for (double e : hermitian_eigenvalues(p)) r += e > 0.5 ? 1 : 0;
  return r;
}

std::vector<std::vector<int>> rows_of(const StabilizerCode& c) {
  std::vector<std::vector<int>> out;
  for (const auto& g : c.generators) out.push_back(g.row());
  return out;
}

}  // namespace

TEST(Tables, EdgeCodeRows) {
  const auto c = edge_code();
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(c.k(), 1);
  EXPECT_EQ(c.generators[0].row(), (std::vector<int>{0, 0, 0, 2, 2, 2, 0, 0}));
  EXPECT_EQ(c.generators[1].row(), (std::vector<int>{1, 1, 0, 1, 1, 1, 2, 2}));
  EXPECT_EQ(c.generators[2].row(), (std::vector<int>{0, 0, 1, 0, 2, 0, 0, 0}));
  EXPECT_EQ(c.logical_z.row(), (std::vector<int>{2, 0, 0, 2, 2, 2, 1, 2}));
  EXPECT_EQ(c.logical_x.row(), (std::vector<int>{0, 0, 0, 0, 1, 2, 0, 0}));
}

TEST(Tables, FaceCodeRows) {
  const auto c = face_code();
  EXPECT_EQ(c.generators[0].row(), (std::vector<int>{2, 0, 0, 2, 1, 2, 0, 1}));
  EXPECT_EQ(c.generators[1].row(), (std::vector<int>{2, 1, 0, 1, 1, 0, 1, 0}));
  EXPECT_EQ(c.generators[2].row(), (std::vector<int>{1, 0, 1, 2, 0, 2, 1, 0}));
  EXPECT_EQ(c.logical_z.row(), (std::vector<int>{1, 0, 0, 2, 1, 0, 1, 2}));
  EXPECT_EQ(c.logical_x.row(), (std::vector<int>{0, 0, 0, 0, 1, 2, 1, 2}));
}

TEST(Tables, JsonFixturesMatchBuiltInCodes) {
  EXPECT_EQ(load_code(QMSD_DATA_DIR "/codes/edge.json"), edge_code());
  EXPECT_EQ(load_code(QMSD_DATA_DIR "/codes/face.json"), face_code());
}

TEST(Validate, PublishedCodesAreValid) {
  EXPECT_TRUE(validate(edge_code()).empty());
  EXPECT_TRUE(validate(face_code()).empty());
}

TEST(Validate, DuplicatedGeneratorIsReportedAsDependent) {
  auto c = edge_code();
  c.generators[1] = c.generators[0];
  const auto v = validate(c);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("independent") != std::string::npos; }));
  EXPECT_THROW(trivial_syndrome_projector(c), DomainError);
}

TEST(Validate, AnticommutingGeneratorsAreReported) {
  auto c = edge_code();
  c.generators[0] = PauliLabel({0, 0, 0, 0}, {1, 0, 0, 0});
  c.generators[1] = PauliLabel({1, 0, 0, 0}, {0, 0, 0, 0});
  ASSERT_EQ(symplectic_product(c.generators[0], c.generators[1]), 1);
  const auto v = validate(c);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("G1 and G2 do not commute") != std::string::npos; }));
}

TEST(Validate, LogicalProblemsAreReported) {
  auto c = edge_code();
  c.logical_x = c.logical_z;
  auto v = validate(c);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("conjugate pair") != std::string::npos; }));
  c = edge_code();
  c.logical_z = PauliLabel({1, 0, 0, 0}, {0, 0, 0, 0});
  v = validate(c);
  EXPECT_FALSE(v.empty());
  c = edge_code();
  c.generators.pop_back();
  v = validate(c);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("k = 2") != std::string::npos; }));
}

TEST(Validate, RankOverZ3) {
  EXPECT_EQ(rank_mod(rows_of(edge_code()), 3), 3);
  EXPECT_EQ(rank_mod({{1, 2, 0}, {2, 1, 0}}, 3), 1);
  EXPECT_EQ(rank_mod({{1, 0}, {0, 1}, {1, 1}}, 3), 2);
}

TEST(Projector, PublishedCodesHaveRankThree) {
  for (const auto& c : {edge_code(), face_code()}) {
    const Operator pi = trivial_syndrome_projector(c);
    EXPECT_EQ(pi.rows(), 81);
    EXPECT_TRUE(approx_equal(pi, pi.adjoint()));
    EXPECT_TRUE(approx_equal(pi * pi, pi));
    EXPECT_EQ(rank_of(pi), 3);
    EXPECT_TRUE(approx_equal(pi, kernel_projector(c), 1e-9));
  }
}

TEST(Projector, SingleQutritToyCodeWithGeneratorZ) {
  StabilizerCode toy;
  toy.n = 1;
  toy.generators = {PauliLabel::single(0, 1)};
  EXPECT_TRUE(approx_equal(trivial_syndrome_projector(toy), projector(basis_ket(3, 0))));
}

TEST(Projector, CommutesWithLogicals) {
  for (const auto& c : {edge_code(), face_code()}) {
    const Operator pi = trivial_syndrome_projector(c);
    for (const auto& l : {c.logical_z, c.logical_x}) {
      const Operator op = displacement(l);
      EXPECT_TRUE(approx_equal(pi * op, op * pi));
    }
  }
}

TEST(Projector, InvariantUnderGeneratorPowersAndRowOperations) {
  const auto c = face_code();
  const Operator pi = trivial_syndrome_projector(c);
  // G1 -> G1^2 (same group).
  auto c2 = c;
  for (auto& v : c2.generators[0].x) v = mod(2 * v, 3);
  for (auto& v : c2.generators[0].z) v = mod(2 * v, 3);
  EXPECT_TRUE(approx_equal(trivial_syndrome_projector(c2), pi));
  // G2 -> G2 + G3 as rows; commuting labels add with no phase.
  auto c3 = c;
  for (int q = 0; q < 4; ++q) {
    c3.generators[1].x[q] = mod(c.generators[1].x[q] + c.generators[2].x[q], 3);
    c3.generators[1].z[q] = mod(c.generators[1].z[q] + c.generators[2].z[q], 3);
  }
  EXPECT_TRUE(approx_equal(displacement(c3.generators[1]),
                           displacement(c.generators[1]) * displacement(c.generators[2])));
  EXPECT_TRUE(approx_equal(trivial_syndrome_projector(c3), pi));
}

TEST(Isometry, LogicalAlgebraOnTheCodespace) {
  for (const auto& c : {edge_code(), face_code()}) {
    const auto cs = logical_isometry(c);
    const Operator& v = cs.isometry;
    ASSERT_EQ(v.rows(), 81);
    ASSERT_EQ(v.cols(), 3);
    EXPECT_TRUE(approx_equal(v.adjoint() * v, identity(3)));
    EXPECT_TRUE(approx_equal(v.adjoint() * displacement(c.logical_z) * v, pauli_z()));
    EXPECT_TRUE(approx_equal(v.adjoint() * displacement(c.logical_x) * v, pauli_x()));
    EXPECT_TRUE(approx_equal(cs.projector * v, v));
    EXPECT_TRUE(approx_equal(v * v.adjoint(), cs.projector, 1e-9));
  }
}

TEST(Isometry, RequiresUnitLogicalCommutator) {
  auto c = edge_code();
  for (auto& v : c.logical_x.x) v = mod(2 * v, 3);
  for (auto& v : c.logical_x.z) v = mod(2 * v, 3);
  ASSERT_TRUE(validate(c).empty());
  EXPECT_THROW(logical_isometry(c), LogicalAlgebraError);
}

TEST(Json, RoundTripAndPhases) {
  for (const auto& c : {edge_code(), face_code()}) {
    const auto j = code_to_json(c);
    EXPECT_FALSE(j.contains("phases"));
    EXPECT_EQ(code_from_json(j), c);
  }
  auto c = edge_code();
  c.generators[1].phase_exp = 2;
  const auto j = code_to_json(c);
  ASSERT_TRUE(j.contains("phases"));
  EXPECT_EQ(code_from_json(j), c);
}

TEST(Json, MalformedInputIsADomainError) {
  auto j = code_to_json(edge_code());
  j["generators"][0] = {1, 2, 3};
  EXPECT_THROW(code_from_json(j), DomainError);
  auto k = code_to_json(edge_code());
  k.erase("logical_x");
  EXPECT_THROW(code_from_json(k), DomainError);
  auto m = code_to_json(edge_code());
  m["d"] = 4;
  EXPECT_THROW(code_from_json(m), DomainError);
  EXPECT_THROW(load_code("/nonexistent/code.json"), DomainError);

  const auto path = std::filesystem::temp_directory_path() / "qmsd_bad_code.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_code(path.string()), DomainError);
  std::filesystem::remove(path);
}

TEST(CliffordConjugate, GeneratorsAndDecodingTransformCovariantly) {
  for (const auto& f : enumerate_psl2(3)) {
    const auto c = edge_code();
    const auto g = clifford_conjugate(c, f);
    ASSERT_TRUE(validate(g).empty()) << f;
    const Operator u = clifford_unitary(f);
    const Operator ubar = tensor_power(u, 4);
    for (std::size_t i = 0; i < c.generators.size(); ++i)
      EXPECT_TRUE(approx_equal(displacement(g.generators[i]), ubar * displacement(c.generators[i]) * ubar.adjoint(), 1e-9));
    EXPECT_TRUE(approx_equal(trivial_syndrome_projector(g), ubar * trivial_syndrome_projector(c) * ubar.adjoint(), 1e-9));
    const Operator v = logical_isometry(c).isometry;
    const Operator vg = logical_isometry(g).isometry;
    EXPECT_TRUE(equal_up_to_phase(vg, ubar * v * u.adjoint(), 1e-9)) << f;
  }
}
