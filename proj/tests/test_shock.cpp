#include <gtest/gtest.h>

#include <cmath>

#include "reflectlab/polar.hpp"
#include "reflectlab/shock.hpp"
#include "support/oracles.hpp"

using namespace reflectlab;

TEST(ShockClosure, SonicUpstreamIsVanishing) {
  GasConstants k{1.4};
  const NormalJump j = shock::downstreamFromNormalVelocity(1.0, 1.0, 0.0, k);
  EXPECT_TRUE(j.vanishing);
  EXPECT_DOUBLE_EQ(j.rhoD, 1.0);
  EXPECT_DOUBLE_EQ(j.vnD, 1.0);
}

TEST(ShockClosure, MatchesLongDoubleBisection) {
  GasConstants k{1.4};
  const NormalJump j = shock::downstreamFromNormalVelocity(1.0, 2.0, 0.0, k);
  const auto [rho, vn] = oracle::normalShock(1.0L, 2.0L, 1.4L);
  EXPECT_NEAR(j.rhoD / static_cast<double>(rho), 1.0, 1e-12);
  EXPECT_NEAR(j.vnD / static_cast<double>(vn), 1.0, 1e-12);
  // Both equations hold.
  EXPECT_NEAR(j.rhoD * j.vnD, 2.0, 1e-12);
  EXPECT_NEAR(gas::piFn(j.rhoD, k) + 0.5 * j.vnD * j.vnD, gas::piFn(1.0, k) + 2.0, 1e-12);
}

TEST(ShockClosure, RandomStatesAgainstOracleAndOrdering) {
  oracle::Gen g(21);
  for (int n = 0; n < 300; ++n) {
    const double gamma = g.uniform(1.1, 5.0 / 3.0);
    GasConstants k{gamma};
    const double rhoU = std::exp(g.uniform(-2.0, 2.0));
    const double cU = gas::soundSpeed(rhoU, k);
    const double M = g.uniform(1.001, 5.0);
    const NormalJump j = shock::downstreamFromNormalVelocity(rhoU, M * cU, 0.0, k);
    const auto [rho, vn] = oracle::normalShock(rhoU, M * cU, gamma);
    EXPECT_NEAR(j.rhoD / static_cast<double>(rho), 1.0, 1e-10);
    EXPECT_NEAR(j.vnD / static_cast<double>(vn), 1.0, 1e-10);
    EXPECT_GE(j.rhoD, rhoU);
    EXPECT_LE(j.vnD, M * cU);
    EXPECT_LT(j.vnD, gas::soundSpeed(j.rhoD, k));  // subsonic behind a normal shock
  }
}

TEST(ShockClosure, InverseMapRoundTrip) {
  oracle::Gen g(22);
  for (int n = 0; n < 100; ++n) {
    GasConstants k{g.uniform(1.1, 5.0 / 3.0)};
    const double rhoU = g.uniform(0.2, 3.0);
    const double vn = g.uniform(1.01, 4.0) * gas::soundSpeed(rhoU, k);
    const NormalJump d = shock::downstreamFromNormalVelocity(rhoU, vn, 0.0, k);
    const NormalJump u = shock::upstreamFromDownstreamNormal(d.rhoD, d.vnD, k);
    EXPECT_NEAR(u.rhoD / rhoU, 1.0, 1e-10);
    EXPECT_NEAR(u.vnD / vn, 1.0, 1e-10);
  }
}

TEST(ShockNormal, Examples) {
  const Vec2d a = shock::normalFromJump({2.0, 0.0}, {1.0, 0.0});
  EXPECT_NEAR(a.x, 1.0, 1e-15);
  EXPECT_NEAR(a.y, 0.0, 1e-15);
  const Vec2d b = shock::normalFromJump({1.0, 1.0}, {0.0, 0.0});
  EXPECT_NEAR(b.x, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(b.y, std::sqrt(0.5), 1e-15);
  EXPECT_THROW(shock::normalFromJump({1.0, 1.0}, {1.0, 1.0}), DegenerateShockError);
}

TEST(ShockNormal, RotationEquivariance) {
  oracle::Gen g(23);
  for (int n = 0; n < 100; ++n) {
    const Vec2d u{g.uniform(-2, 2), g.uniform(-2, 2)}, d{g.uniform(-2, 2), g.uniform(-2, 2)};
    const double w = g.uniform(-M_PI, M_PI);
    const Mat2 R{std::cos(w), -std::sin(w), std::sin(w), std::cos(w)};
    const Vec2d n0 = R * shock::normalFromJump(u, d);
    const Vec2d n1 = shock::normalFromJump(R * u, R * d);
    EXPECT_NEAR(n0.x, n1.x, 1e-12);
    EXPECT_NEAR(n0.y, n1.y, 1e-12);
  }
}

namespace {

// A pseudo-steady shock at `xi` for a random upstream state and normal.
struct RandomShock {
  ObliqueShock s;
  UpstreamPotential up;
  double psiD = 0.0;
};

RandomShock randomShock(oracle::Gen& g, const GasConstants& k) {
  RandomShock r;
  const double rhoU = g.uniform(0.3, 2.0);
  const double cU = gas::soundSpeed(rhoU, k);
  const Vec2d xi{g.uniform(-1, 1), g.uniform(-1, 1)};
  const double ang = g.uniform(-M_PI, M_PI);
  const Vec2d n = unitVector(ang);
  const double zn = g.uniform(1.05, 3.0) * cU;
  const double zt = g.uniform(-2.0, 2.0);
  const Vec2d v = xi + zn * n + zt * rotate90ccw(n);
  // Potential of the upstream state: psi = psi0 + v.xi with Bernoulli giving rhoU at xi.
  const double chiTarget = -gas::piFn(rhoU, k) - 0.5 * norm2(v - xi);
  r.up.velocity = v;
  r.up.psi0 = chiTarget + 0.5 * norm2(xi) - dot(v, xi);
  r.s = shock::fromUpstreamAndNormal(ThermoState::make(rhoU, v, k), n, xi, k);
  // Continuous potential across the shock.
  r.psiD = r.up.psi(xi);
  return r;
}

}  // namespace

TEST(ShockResidual, VanishesOnConstructedShocksAndInvariantsHold) {
  oracle::Gen g(24);
  for (int n = 0; n < 200; ++n) {
    GasConstants k{g.uniform(1.1, 5.0 / 3.0)};
    const RandomShock r = randomShock(g, k);
    EXPECT_NEAR(r.up.density(k) / r.s.upstream.rho, 1.0, 1e-12);
    EXPECT_LT(shock::invariantViolation(r.s), 1e-10);
    const double gr =
        shock::gResidual(r.s.downstream.velocity, r.psiD, r.s.location, r.up, k);
    EXPECT_LT(std::abs(gr), 1e-10 * r.s.upstream.rho * r.s.znU);
  }
}

TEST(ShockResidual, ZeroJumpIsDegenerate) {
  GasConstants k{1.4};
  UpstreamPotential up{-3.0, {0.5, 0.0}};
  EXPECT_THROW(shock::gResidual(Vec2d{0.5, 0.0}, -3.0, Vec2d{0.0, 0.0}, up, k),
               DegenerateShockError);
}

TEST(ShockResidual, GradientWithRespectToVelocityIsGv) {
  oracle::Gen g(25);
  for (int n = 0; n < 100; ++n) {
    GasConstants k{g.uniform(1.1, 5.0 / 3.0)};
    const RandomShock r = randomShock(g, k);
    const Vec2d gv = shock::gGradientV(r.s, k);
    const double h = 1e-6;
    auto G = [&](Vec2d v) { return shock::gResidual(v, r.psiD, r.s.location, r.up, k); };
    const Vec2d v = r.s.downstream.velocity;
    const Vec2d fd{(G(v + Vec2d{h, 0}) - G(v - Vec2d{h, 0})) / (2 * h),
                   (G(v + Vec2d{0, h}) - G(v - Vec2d{0, h})) / (2 * h)};
    EXPECT_LT(norm(fd - gv) / norm(gv), 1e-6);
  }
}

TEST(ShockResidual, DensityPerturbationSign) {
  // Raising rho_d by 1% (through psi) moves g in the direction of dg/drho_d.
  oracle::Gen g(26);
  for (int n = 0; n < 50; ++n) {
    GasConstants k{1.4};
    const RandomShock r = randomShock(g, k);
    const double rho = r.s.downstream.rho;
    // rho = piInv(-chi - |z|^2/2): shift psi by dpsi to change the density.
    const double dpsi = gas::piFn(rho, k) - gas::piFn(1.01 * rho, k);
    const double g1 = shock::gResidual(r.s.downstream.velocity, r.psiD + dpsi, r.s.location, r.up, k);
    // dg/drho_d = z_d . n = znD > 0.
    EXPECT_GT(g1, 0.0);
    EXPECT_NEAR(g1, 0.01 * rho * r.s.znD, 1e-3 * rho * r.s.znD);
  }
}

TEST(ShockGv, NormalShockAndTransonicCoefficient) {
  GasConstants k{1.4};
  const ThermoState up = ThermoState::make(1.0, {2.0, 0.0}, k);
  const ObliqueShock s = shock::fromUpstreamAndNormal(up, {1.0, 0.0}, {0.0, 0.0}, k);
  const Vec2d gv = shock::gGradientV(s, k);
  EXPECT_GT(gv.x, 0.0);
  EXPECT_NEAR(gv.y, 0.0, 1e-15);
  oracle::Gen g(27);
  for (int n = 0; n < 100; ++n) {
    const RandomShock r = randomShock(g, k);
    if (!(r.s.znD < r.s.downstream.c)) continue;
    EXPECT_GT(dot(shock::gGradientV(r.s, k), r.s.normal), 0.0);
  }
}

TEST(ShockType, PolarRootsAndSupersonicDownstream) {
  oracle::Gen g(28);
  for (int n = 0; n < 200; ++n) {
    GasConstants k{g.uniform(1.1, 5.0 / 3.0)};
    const double Mu = g.uniform(1.1, 5.0);
    const CriticalAngle crit = polar::criticalAngle(Mu, k);
    const double tau = g.uniform(0.02, 0.98) * crit.tauStar * (g.integer(0, 1) ? 1 : -1);
    const DeflectionRoots roots = polar::deflectionSolve(Mu, tau, k, &crit);
    EXPECT_EQ(shock::classifyType(roots.weak, k), ShockType::weak);
    EXPECT_EQ(shock::classifyType(roots.strong, k), ShockType::strong);
    if (!roots.weak.transonic()) {
      EXPECT_EQ(shock::classifyType(roots.weak, k), ShockType::weak);
    }
    EXPECT_TRUE(roots.strong.transonic());
  }
}

TEST(ShockType, GalileanInvariance) {
  oracle::Gen g(29);
  for (int n = 0; n < 100; ++n) {
    GasConstants k{1.4};
    const RandomShock r = randomShock(g, k);
    const Vec2d w{g.uniform(-1, 1), g.uniform(-1, 1)};
    ThermoState up = r.s.upstream;
    up.velocity = up.velocity + w;
    const ObliqueShock t = shock::fromUpstreamAndNormal(up, r.s.normal, r.s.location + w, k);
    EXPECT_LT(norm(t.zD() - r.s.zD()), 1e-12);
    EXPECT_LT(norm(shock::gGradientV(t, k) - shock::gGradientV(r.s, k)), 1e-12);
    EXPECT_EQ(shock::classifyType(t, k), shock::classifyType(r.s, k));
  }
}
