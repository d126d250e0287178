#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "qmsd/abb_geometry.hpp"
#include "qmsd/random_states.hpp"
#include "qmsd/wigner.hpp"

using namespace qmsd;

namespace {

const cplx w = std::polar(1.0, 2.0 * M_PI / 3.0);

Ket ket3(cplx a, cplx b, cplx c) {
  Ket k(3);
  k << a, b, c;
  return k.normalized();
}

bool same_ray(const Ket& a, const Ket& b, double tol = 1e-9) { return std::abs(std::abs(a.dot(b)) - 1.0) < tol; }

AbbPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng) * M_PI / 2, u(rng) * 2 * M_PI};
}

}  // namespace

TEST(AbbKet, PolesAndNormalization) {
  EXPECT_TRUE(same_ray(abb_ket(0, 1.3), basis_ket(3, 0)));
  EXPECT_TRUE(same_ray(abb_ket(M_PI / 2, 0), ket3(0, 1, 1)));
  EXPECT_TRUE(same_ray(south_pole_ket(), ket3(0, 1, 1)));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_point(rng);
    const Ket v = abb_ket(p.theta(), p.phi());
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    EXPECT_EQ(v(1), v(2));
    EXPECT_TRUE(approx_equal(parity_operator() * v, v));
  }
}

TEST(AbbKet, RejectsBadAngles) {
  EXPECT_THROW(abb_ket(2.0, 0.0), DomainError);
  EXPECT_THROW(abb_ket(-0.1, 0.0), DomainError);
  EXPECT_THROW(abb_ket(NAN, 0.0), DomainError);
  EXPECT_THROW(AbbPoint(1.5, 0.1, 0.0), DomainError);
  EXPECT_THROW(AbbPoint(-0.5, 0.1, 0.0), DomainError);
  EXPECT_THROW(AbbPoint(0.5, 3.0, 0.0), DomainError);
  EXPECT_THROW(AbbPoint::from_cartesian({1.0, 1.0, 0.0}), DomainError);
}

TEST(AbbPoint, CentreAndNorthPole) {
  EXPECT_TRUE(approx_equal(AbbPoint(0.0, 0.7, 2.0).rho(), maximally_mixed(3)));
  EXPECT_TRUE(approx_equal(AbbPoint(1.0, 0.0, 0.0).rho(), projector(basis_ket(3, 0))));
  const auto c = AbbPoint(1.0, 0.0, 0.0).cartesian();
  EXPECT_NEAR(c.z, 1.0, 1e-15);
  EXPECT_NEAR(std::hypot(c.x, c.y), 0.0, 1e-15);
  EXPECT_NEAR(AbbPoint(0.4, 0.0, 7.0).phi(), 7.0 - 2 * M_PI, 1e-12);
}

TEST(AbbPoint, DepolarizedFormMatchesNoiseParameter) {
  const Ket v = abb_ket(0.4, 0.9);
  EXPECT_TRUE(approx_equal(AbbPoint(0.7, 0.4, 0.9).rho(), depolarize(v, 0.3), 1e-14));
  EXPECT_TRUE(approx_equal(depolarized(projector(v), 0.7), depolarize(v, 0.3), 1e-14));
  EXPECT_THROW(depolarize(v, 1.5), DomainError);
}

// Bloch vector of the (|0>, |N>) block from the amplitudes c0 = a, c1 = sqrt2 b.
TEST(Cartesian, MatchesBlochVectorOfTheTwoLevelBlock) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto p = random_point(rng);
    const Ket v = abb_ket(p.theta(), p.phi());
    const cplx c0 = v(0), c1 = std::sqrt(2.0) * v(1);
    const cplx xy = 2.0 * c1 * std::conj(c0);
    const auto c = cartesian_of(p.rho());
    EXPECT_NEAR(c.z, p.r() * (std::norm(c0) - std::norm(c1)), 1e-12);
    EXPECT_NEAR(c.x, p.r() * xy.real(), 1e-12);
    EXPECT_NEAR(c.y, p.r() * xy.imag(), 1e-12);
  }
}

TEST(Cartesian, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_point(rng);
    const auto q = abb_point_of(p.rho());
    const auto a = p.cartesian(), b = q.cartesian();
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(a.y, b.y, 1e-12);
    EXPECT_NEAR(a.z, b.z, 1e-12);
    EXPECT_TRUE(approx_equal(state_from_cartesian(a), p.rho(), 1e-12));
  }
}

TEST(Cartesian, OutsideTheSubspaceThrows) {
  EXPECT_THROW(cartesian_of(projector(basis_ket(3, 1))), SubspaceError);
  EXPECT_FALSE(commutes_with_parity(projector(basis_ket(3, 1))));
}

TEST(NamedStates, FourierPlusIsAFixedVectorOfTheDft) {
  const Operator dft = clifford_unitary(SymplecticMat2::make(0, 2, 1, 0));
  const Ket v = fourier_plus_ket();
  EXPECT_TRUE(approx_equal(dft * v, v, 1e-12));
  EXPECT_NEAR(std::tan(fourier_theta()), std::sqrt(2.0) / (std::sqrt(3.0) + 1.0), 1e-12);
}

TEST(NamedStates, NorrellCoordinates) {
  const auto c = cartesian_of(norrell_state());
  EXPECT_NEAR(c.z, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.x, -std::sqrt(8.0) / 3.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
  EXPECT_NEAR(c.norm(), 1.0, 1e-12);
}

TEST(NamedStates, EdgeStateLiesOnTheEdgeArc) {
  const Ket e = edge_ket_E();
  EXPECT_NEAR(e.norm(), 1.0, 1e-15);
  EXPECT_TRUE(commutes_with_parity(projector(e)));
  EXPECT_LT(distance_to_edge_arc(cartesian_of(projector(e))), 1e-6);
  EXPECT_LT(distance_to_edge_arc(cartesian_of(fourier_plus_state())), 1e-12);
}

TEST(CliffordAction, PslPreservesTheSubspaceAndTheRadius) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_point(rng);
    for (const auto& f : enumerate_psl2(3)) {
      const Operator u = clifford_unitary(f);
      const Operator img = u * p.rho() * u.adjoint();
      ASSERT_TRUE(commutes_with_parity(img));
      EXPECT_NEAR(cartesian_of(img).norm(), p.r(), 1e-12);
    }
  }
}

TEST(CliffordAction, MinusIdentityActsTrivially) {
  const Operator u = clifford_unitary(SymplecticMat2::make(2, 0, 0, 2));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_point(rng);
    EXPECT_TRUE(approx_equal(u * p.rho() * u.adjoint(), p.rho(), 1e-14));
  }
}

TEST(CliffordAction, OrbitOfZeroIsTheTwelveStabilizerStates) {
  const auto orbit = clifford_orbit(basis_ket(3, 0));
  const auto stab = stabilizer_states();
  ASSERT_EQ(orbit.size(), 12u);
  for (const auto& s : stab) {
    bool found = false;
    for (const auto& o : orbit) found = found || same_ray(o, s);
    EXPECT_TRUE(found);
  }
}

TEST(CliffordAction, NorrellOrbitHasMaximalNegativityThroughout) {
  const auto orbit = clifford_orbit(norrell_ket());
  EXPECT_GT(orbit.size(), 1u);
  for (const auto& v : orbit) EXPECT_NEAR(sum_negativity(projector(v)), 1.0 / 3.0, 1e-12);
  for (std::size_t i = 0; i < orbit.size(); ++i)
    for (std::size_t j = i + 1; j < orbit.size(); ++j) EXPECT_FALSE(same_ray(orbit[i], orbit[j]));
}

TEST(Wedge, InteriorPointIsLeftAlone) {
  const AbbPoint p(0.9, 0.3, 0.1);
  const auto img = wedge_canonicalize(p.rho());
  EXPECT_EQ(img.f, SymplecticMat2::identity());
  EXPECT_TRUE(approx_equal(img.rho, p.rho(), 1e-14));
}

TEST(Wedge, ImagesLieInTheReferenceWedgeAndStayInTheOrbit) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_point(rng);
    if (p.r() < 1e-3) continue;
    const auto img = wedge_canonicalize(p.rho());
    const Operator u = clifford_unitary(img.f);
    EXPECT_TRUE(approx_equal(img.rho, u * p.rho() * u.adjoint(), 1e-12));
    const auto c = cartesian_of(img.rho);
    const double phi = std::atan2(c.y, c.x);
    if (std::hypot(c.x, c.y) > 1e-6) {
      EXPECT_LE(std::abs(phi), M_PI / 3 + 1e-9);
    }
    // The canonical image is the orbit point with the largest z.
    for (const auto& f : enumerate_psl2(3)) {
      const Operator v = clifford_unitary(f);
      EXPECT_LE(cartesian_of(v * p.rho() * v.adjoint()).z, c.z + 1e-9);
    }
    EXPECT_NEAR(sum_negativity(img.rho), sum_negativity(p.rho()), 1e-12);
  }
}

TEST(Wedge, GenericPointHasTwelveDistinctImages) {
  const AbbPoint p(1.0, 0.5, 0.37);
  std::vector<CartesianPoint> imgs;
  for (const auto& f : enumerate_psl2(3)) {
    const Operator u = clifford_unitary(f);
    imgs.push_back(cartesian_of(u * p.rho() * u.adjoint()));
  }
  for (std::size_t i = 0; i < imgs.size(); ++i)
    for (std::size_t j = i + 1; j < imgs.size(); ++j) {
      const double dist = std::hypot(imgs[i].x - imgs[j].x, imgs[i].y - imgs[j].y, imgs[i].z - imgs[j].z);
      EXPECT_GT(dist, 1e-3);
    }
}

TEST(Wedge, NorrellCanonicalImage) {
  const auto img = wedge_canonicalize(norrell_state());
  const Ket expect = ket3(2, -w * w, -w * w);
  EXPECT_NEAR(fidelity(img.rho, expect), 1.0, 1e-12);
  const auto p = abb_point_of(img.rho);
  EXPECT_NEAR(p.phi(), M_PI / 3, 1e-9);
}

TEST(Wedge, OutsideTheSubspaceThrows) {
  EXPECT_THROW(wedge_canonicalize(projector(basis_ket(3, 2))), SubspaceError);
}

TEST(DisplaceIntoAbb, FindsAnImageForDisplacedSubspaceStates) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    const auto p = random_point(rng);
    const Operator d = displacement(i % 3, (i / 3) % 3);
    const auto img = displace_into_abb(d * p.rho() * d.adjoint());
    ASSERT_TRUE(img.has_value());
    EXPECT_TRUE(commutes_with_parity(*img));
  }
}

TEST(DisplaceIntoAbb, GenericStateHasNoImage) {
  std::mt19937_64 rng(8);
  EXPECT_FALSE(displace_into_abb(projector(random_ket(rng))).has_value());
}

TEST(EdgeArc, DistanceAgreesWithDenseSampling) {
  const double end = std::acos(-1.0 / 3.0);
  auto sampled = [&](const CartesianPoint& p) {
    double best = 1e9;
    for (int i = 0; i <= 200000; ++i) {
      const double a = end * i / 200000.0;
      best = std::min(best, std::hypot(p.x - std::sin(a), p.y, p.z - std::cos(a)));
    }
    return best;
  };
  for (const CartesianPoint& p : {CartesianPoint{0.3, 0.2, 0.5}, CartesianPoint{-0.5, 0.0, 0.1},
                                  CartesianPoint{0.9, -0.1, -0.6}, CartesianPoint{0.0, 0.0, 1.0}})
    EXPECT_NEAR(distance_to_edge_arc(p), sampled(p), 1e-5);
  EXPECT_NEAR(distance_to_edge_arc({std::sin(1.0), 0.0, std::cos(1.0)}), 0.0, 1e-15);
}
