#include <gtest/gtest.h>

#include <cmath>

#include "reflectlab/gas.hpp"
#include "support/oracles.hpp"

using namespace reflectlab;

TEST(Gas, SoundSpeedReferenceAndClosedForms) {
  GasConstants k{1.4, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(gas::soundSpeed(1.0, k), 1.0);
  EXPECT_NEAR(gas::soundSpeed(2.0, k), std::pow(2.0L, 0.2L), 1e-15);
  EXPECT_NEAR(gas::soundSpeed(2.0, k), 1.148698354997035, 1e-14);
  GasConstants k2{2.0, 1.0, 1.0};
  EXPECT_NEAR(gas::soundSpeed(4.0, k2), 2.0, 1e-15);
  GasConstants scaled{1.4, 3.0, 0.5};
  EXPECT_NEAR(gas::soundSpeed(3.0, scaled), 0.5, 1e-15);
}

TEST(Gas, NonpositiveDensityIsDomainError) {
  GasConstants k;
  EXPECT_THROW(gas::soundSpeed(0.0, k), DomainError);
  EXPECT_THROW(gas::soundSpeed(-1.0, k), DomainError);
  EXPECT_THROW(gas::piFn(0.0, k), DomainError);
}

TEST(Gas, PiClosedFormsAndVacuum) {
  GasConstants k{1.4};
  EXPECT_NEAR(gas::piFn(1.0, k), 2.5, 1e-15);
  EXPECT_NEAR(gas::piFn(2.0, k), 2.5 * std::pow(2.0L, 0.4L), 1e-14);
  EXPECT_THROW(gas::piInv(0.0, k), VacuumError);
  EXPECT_THROW(gas::piInv(-0.3, k), VacuumError);
}

TEST(Gas, PiRoundTrip) {
  for (double gamma : {1.1, 1.4, 5.0 / 3.0, 3.0}) {
    GasConstants k{gamma};
    for (double rho : {0.1, 1.0, 10.0}) {
      EXPECT_NEAR(gas::piInv(gas::piFn(rho, k), k) / rho, 1.0, 1e-14) << gamma << ' ' << rho;
    }
  }
}

TEST(Gas, RoundTripPropertyOnRandomSamples) {
  oracle::Gen g(11);
  for (int n = 0; n < 500; ++n) {
    GasConstants k{g.uniform(1.05, 3.0)};
    const double rho = std::exp(g.uniform(std::log(1e-3), std::log(1e3)));
    EXPECT_NEAR(gas::piInv(gas::piFn(rho, k), k) / rho, 1.0, 1e-13);
    const double w = std::exp(g.uniform(-5.0, 5.0));
    EXPECT_NEAR(gas::piFn(gas::piInv(w, k), k) / w, 1.0, 1e-13);
  }
}

TEST(Gas, PiDerivativeIsCSquaredOverRho) {
  oracle::Gen g(12);
  for (int n = 0; n < 200; ++n) {
    GasConstants k{g.uniform(1.05, 3.0)};
    const double rho = g.uniform(0.05, 20.0);
    const double h = 1e-5 * rho;
    const double fd = (gas::piFn(rho + h, k) - gas::piFn(rho - h, k)) / (2.0 * h);
    const double c = gas::soundSpeed(rho, k);
    EXPECT_NEAR(fd / (c * c / rho), 1.0, 1e-8);
  }
}

TEST(Gas, SoundSpeedIncreasing) {
  oracle::Gen g(13);
  for (int n = 0; n < 200; ++n) {
    GasConstants k{g.uniform(1.01, 3.0)};
    const double a = g.uniform(0.01, 10.0), b = a * g.uniform(1.0001, 2.0);
    EXPECT_LT(gas::soundSpeed(a, k), gas::soundSpeed(b, k));
  }
}

TEST(Gas, DensityFromChiExamples) {
  GasConstants k{1.4};
  const double p0 = gas::piFn(1.0, k);
  EXPECT_NEAR(gas::densityFromChi(-p0, Vec2d{0.0, 0.0}, k), 1.0, 1e-14);
  EXPECT_NEAR(gas::densityFromChi(-p0 - 0.5, Vec2d{1.0, 0.0}, k), 1.0, 1e-14);
  EXPECT_NEAR(gas::densityFromChi(-2.0 * p0, Vec2d{0.0, 0.0}, k), std::pow(2.0, 2.5), 1e-13);
  EXPECT_THROW(gas::densityFromChi(0.1, Vec2d{0.0, 0.0}, k), VacuumError);
}

TEST(Gas, ThermoStateInvariant) {
  GasConstants k{1.4};
  const ThermoState s = ThermoState::make(2.0, {0.3, -0.1}, k);
  EXPECT_DOUBLE_EQ(s.c, gas::soundSpeed(2.0, k));
  EXPECT_NEAR(s.mach(), std::hypot(0.3, 0.1) / s.c, 1e-15);
}

TEST(Gas, InvalidConstants) {
  EXPECT_THROW((GasConstants{1.0}.validate()), DomainError);
  EXPECT_THROW((GasConstants{1.4, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((GasConstants{1.4, 1.0, -1.0}.validate()), DomainError);
}
