#include <gtest/gtest.h>

#include <cmath>

#include "reflectlab/linsolve.hpp"
#include "reflectlab/perturb.hpp"
#include "support/oracles.hpp"

using namespace reflectlab;

namespace {
constexpr double kDeg = M_PI / 180.0;
const GasConstants kAir{1.4};

const TrivialRR& baseRR() {
  static const TrivialRR t = reflection::trivialRRFromCore(1.0, -0.45, 125 * kDeg, kAir);
  return t;
}

ReflectionParams shifted(double dTheta, double dM1 = 0.0, double dAlpha = 0.0) {
  ReflectionParams p = baseRR().params;
  p.theta += dTheta;
  p.M1 += dM1;
  p.alpha += dAlpha;
  return p;
}

// Smooth random direction: low-order polynomial in the physical coordinates.
Eigen::VectorXd smoothDirection(const std::vector<Vec2d>& x, oracle::Gen& g) {
  double c[6];
  for (double& v : c) v = g.uniform(-1.0, 1.0);
  Eigen::VectorXd d(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Vec2d p = x[k];
    d[static_cast<Eigen::Index>(k)] =
        c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y;
  }
  return d;
}
}  // namespace

TEST(Pullback, IdentityAtBase) {
  const MappedGrid g{16, 16, 4.0};
  const PerturbSetup s = perturb::makeSetup(baseRR(), g, baseRR().params);
  const std::vector<Vec2d> x = perturb::shockPullback(s, perturb::basePsi(s));
  const std::vector<Vec2d> ref = s.geom.nodes();
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(norm(x[k] - ref[k]), 1e-14) << k;
}

TEST(Pullback, ShockShiftFollowsUpstreamPotential) {
  // Raising psi on S by eps * v2x moves every shock point by eps in x, since
  // psi^I = psi0 + v2 . xi and the base upstream flow is horizontal.
  const MappedGrid g{16, 16, 4.0};
  const PerturbSetup s = perturb::makeSetup(baseRR(), g, baseRR().params);
  ASSERT_NEAR(s.upstream.velocity.y, 0.0, 1e-14);
  const double eps = 1e-3;
  Eigen::VectorXd psi = perturb::basePsi(s);
  for (int j = 0; j <= g.M; ++j) psi[g.index(g.N, j)] += eps * s.upstream.velocity.x;
  const std::vector<Vec2d> x = perturb::shockPullback(s, psi);
  const std::vector<Vec2d> ref = s.geom.nodes();
  for (int j = 0; j <= g.M; ++j) {
    const int k = g.index(g.N, j);
    EXPECT_NEAR(x[k].x - ref[k].x, eps, 1e-13);
    // The point stays on its ray.
    EXPECT_NEAR(cross(x[k], ref[k]), 0.0, 1e-13);
  }
  // Interior nodes move proportionally to s(i).
  const int m = g.index(g.N / 2, 3);
  EXPECT_NEAR(x[m].x - ref[m].x, g.s(g.N / 2) * eps, 1e-13);
}

TEST(Pullback, ShockLeavingDomainIsTransformError) {
  const MappedGrid g{8, 8, 4.0};
  const PerturbSetup s = perturb::makeSetup(baseRR(), g, baseRR().params);
  Eigen::VectorXd psi = perturb::basePsi(s);
  // Far enough that psi^I(lambda P) = psi needs lambda < 0.
  psi[g.index(g.N, 2)] = s.upstream.psi0 + 1.0 * std::abs(s.upstream.velocity.x);
  EXPECT_THROW(perturb::shockPullback(s, psi), TransformError);
}

TEST(NonlinearResidual, VanishesAtBase) {
  const PerturbSetup s = perturb::makeSetup(baseRR(), {24, 24, 4.0}, baseRR().params);
  const Eigen::VectorXd r = perturb::residual(s, perturb::basePsi(s));
  EXPECT_LT(r.lpNorm<Eigen::Infinity>(), 1e-12);
  PerturbSetup raw = s;
  raw.rowScale.clear();
  EXPECT_LT(perturb::residual(raw, perturb::basePsi(raw)).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(NonlinearResidual, DirectionalDerivativeMatchesLinearization) {
  // Compared in equilibrated rows: unscaled interior rows are O(h^-2) and the
  // central difference would only measure round-off.
  const MappedGrid g{16, 16, 4.0};
  const PerturbSetup s = perturb::makeSetup(baseRR(), g, baseRR().params);
  const LinearizedSystem sys = linsolve::assembleLinearized(baseRR(), g);
  const Eigen::VectorXd psi0 = perturb::basePsi(s);
  oracle::Gen gen(71);
  for (int n = 0; n < 10; ++n) {
    const Eigen::VectorXd d = smoothDirection(sys.coords, gen);
    const double h = 1e-6;
    const Eigen::VectorXd fd =
        (perturb::residual(s, psi0 + h * d) - perturb::residual(s, psi0 - h * d)) / (2 * h);
    // K has every row but the one at xiB, in node order.
    Eigen::VectorXd kd = sys.K * d;
    for (Eigen::Index r = 0; r < kd.size(); ++r) kd[r] *= s.rowScale[static_cast<std::size_t>(r)];
    const Eigen::VectorXd fdK = fd.head(sys.size() - 1);
    EXPECT_LT((fdK - kd).norm() / kd.norm(), 1e-5) << n;
  }
}

TEST(NonlinearResidual, JacobianTaylorRemainderIsQuadratic) {
  const MappedGrid g{12, 12, 4.0};
  const PerturbSetup s = perturb::makeSetup(baseRR(), g, shifted(0.2 * kDeg));
  oracle::Gen gen(72);
  const Eigen::VectorXd psi0 = perturb::basePsi(s);
  const Eigen::VectorXd d = smoothDirection(s.geom.nodes(), gen);
  const Eigen::SparseMatrix<double> J = perturb::jacobian(s, psi0);
  const Eigen::VectorXd r0 = perturb::residual(s, psi0), jd = J * d;
  double prev = 0.0;
  for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    const double rem = (perturb::residual(s, psi0 + eps * d) - r0 - eps * jd).norm();
    if (prev > 0.0) {
      EXPECT_NEAR(prev / rem, 4.0, 0.4) << eps;
    }
    prev = rem;
  }
}

TEST(Newton, ZeroPerturbationIsBase) {
  const PerturbedRR p = perturb::newtonSolve(baseRR(), baseRR().params, {16, 16, 4.0});
  EXPECT_EQ(p.iterations, 1);
  EXPECT_NEAR(p.displacement, 0.0, 1e-12);
  EXPECT_TRUE(p.weakType);
  EXPECT_TRUE(p.transonic);
}

TEST(Newton, SmallWallAngleChange) {
  const MappedGrid g{32, 32, 4.0};
  const PerturbedRR a = perturb::newtonSolve(baseRR(), shifted(0.25 * kDeg), g);
  const PerturbedRR b = perturb::newtonSolve(baseRR(), shifted(0.5 * kDeg), g);
  for (const PerturbedRR* p : {&a, &b}) {
    EXPECT_LT(p->residualNorms.max(), 1e-8);
    EXPECT_LT(p->maxShockResidual, 1e-7);
    EXPECT_TRUE(p->weakType);
    EXPECT_TRUE(p->transonic);
    EXPECT_TRUE(p->shockSingleValued);
    EXPECT_GT(p->ellipticityMargin, 0.0);
    EXPECT_GT(p->beta0, 1.0);
    EXPECT_LE(p->iterations, 6);
    ASSERT_FALSE(p->stepRatios.empty());
    EXPECT_LT(p->stepRatios.back(), 1e3);
    // The shock stays on the perturbed wall B.
    EXPECT_NEAR(cross(p->xiB, unitVector(p->params.theta)), 0.0, 1e-10);
  }
  EXPECT_NE(a.displacement, 0.0);
  EXPECT_NEAR(b.displacement / a.displacement, 2.0, 0.2);
}

TEST(Newton, MachAndAngleOfIncidence) {
  for (const ReflectionParams& t : {shifted(0.0, 0.02), shifted(0.0, 0.0, 0.1 * kDeg)}) {
    double prev = INFINITY;
    for (int n : {16, 32}) {
      const PerturbedRR p = perturb::newtonSolve(baseRR(), t, {n, n, 4.0});
      EXPECT_LT(p.residualNorms.max(), 1e-8);
      EXPECT_TRUE(p.weakType);
      EXPECT_TRUE(p.transonic);
      // The corner state approaches the local RR polar root under refinement.
      EXPECT_LT(p.localRRMismatch, 0.5 * prev);
      prev = p.localRRMismatch;
    }
    EXPECT_LT(prev, 2e-2);
  }
}

TEST(Newton, RejectsParametersOffWallB) {
  ReflectionParams p = baseRR().params;
  p.theta = 92 * kDeg;
  EXPECT_THROW(perturb::newtonSolve(baseRR(), p, {8, 8, 4.0}), Error);
}
