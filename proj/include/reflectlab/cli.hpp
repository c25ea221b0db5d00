#pragma once

// Command-line front end. run() parses argv, executes one subcommand and
// returns the process exit status:
//   0 success, 1 domain error, 2 solver failure, 3 diagnostic failure, 64 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reflectlab/core/errors.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/linsolve.hpp"
#include "reflectlab/mesh.hpp"
#include "reflectlab/pencil.hpp"
#include "reflectlab/perturb.hpp"
#include "reflectlab/polar.hpp"
#include "reflectlab/reflection.hpp"
#include "reflectlab/version.hpp"

namespace reflectlab::cli {

constexpr int exitOk = 0;
constexpr int exitDomain = 1;
constexpr int exitSolver = 2;
constexpr int exitDiagnostic = 3;
constexpr int exitUsage = 64;

inline double deg(double r) { return r * 180.0 / M_PI; }
inline double rad(double d) { return d * M_PI / 180.0; }

/// Angle in radians: a number, or a multiple/fraction of pi such as "pi",
/// "-pi/2", "2*pi/3", "0.75pi".
inline double parseAngle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw DomainError("empty angle");
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  double den = 1.0;
  if (slash != std::string::npos) den = std::stod(s.substr(slash + 1));
  double value = 0.0;
  const auto p = num.find("pi");
  if (p == std::string::npos) {
    std::size_t used = 0;
    value = std::stod(num, &used);
    if (used != num.size()) throw DomainError("cannot parse angle '" + text + "'");
  } else {
    std::string coef = num.substr(0, p);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = 1.0;
    if (coef == "-") c = -1.0;
    else if (coef == "+" || coef.empty()) c = 1.0;
    else c = std::stod(coef);
    if (p + 2 != num.size()) throw DomainError("cannot parse angle '" + text + "'");
    value = c * M_PI;
  }
  if (!(den != 0.0)) throw DomainError("angle denominator is zero");
  return value / den;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw DomainError("cannot open output file " + path);
      os = &file;
    }
  }
  std::ostream& operator*() { return *os; }
};

struct Common {
  double gamma = 1.4;
  double tol = 1e-8;
  std::string out;
  std::string format;
};

inline void validateGamma(double g) {
  if (!(g > 1.0)) throw DomainError("--gamma must exceed 1");
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline std::string headerText(const Common& c, const std::string& extra = "") {
  std::ostringstream os;
  os << "reflectlab " << version << " gamma=" << fmt(c.gamma) << " tol=" << fmt(c.tol);
  if (!extra.empty()) os << ' ' << extra;
  return os.str();
}

inline nlohmann::json headerJson(const Common& c) {
  return {{"version", version}, {"gamma", c.gamma}, {"tol", c.tol}};
}

/// Base trivial RR from either the physical parameters (M1, alpha, theta) or
/// the core parametrization (rho3, xiA, theta).
struct BaseSpec {
  std::optional<double> M1;
  double alphaDeg = 0.0;
  double thetaDeg = 125.0;
  double rho3 = 1.0;
  double xiA = -0.45;

  TrivialRR build(const GasConstants& k) const {
    if (!(thetaDeg > 90.0 && thetaDeg < 180.0))
      throw DomainError("--theta-deg must lie in (90, 180)");
    if (M1) {
      if (!(*M1 > 1.0)) throw DomainError("--M1 must exceed 1");
      return reflection::coreFromParams({*M1, rad(alphaDeg), rad(thetaDeg), k.gamma}, k);
    }
    return reflection::trivialRRFromCore(rho3, xiA, rad(thetaDeg), k);
  }
};

inline void addBaseOptions(CLI::App* sub, BaseSpec& b) {
  sub->add_option("--M1", b.M1, "incident Mach number (selects the physical parametrization)");
  sub->add_option("--alpha-deg", b.alphaDeg, "incident shock angle alpha [deg]");
  sub->add_option("--theta-deg", b.thetaDeg, "wedge angle theta_w [deg]");
  sub->add_option("--rho3", b.rho3, "density in the elliptic triangle (core parametrization)");
  sub->add_option("--xi-a", b.xiA, "xi-coordinate of the shock foot on wall A (core parametrization)");
}

inline nlohmann::json trivialJson(const TrivialRR& t) {
  using nlohmann::json;
  auto st = [](const ThermoState& s) {
    return json{{"rho", s.rho}, {"c", s.c}, {"vx", s.velocity.x}, {"vy", s.velocity.y}};
  };
  return {{"M1", t.params.M1},
          {"alpha_rad", t.params.alpha},
          {"theta_rad", t.theta},
          {"xiA", t.xiA},
          {"xiB", {t.xiB.x, t.xiB.y}},
          {"sector1", st(t.sector1)},
          {"sector2", st(t.sector2)},
          {"sector3", st(t.sector3)},
          {"M2", t.M2},
          {"pseudo_mach_B", t.pseudoMachB},
          {"reflected_type", toString(t.reflectedType)},
          {"transonic", t.transonic()}};
}

// ---------------------------------------------------------------------------

inline int runPolar(const Common& c, double Mu, int samples) {
  validateGamma(c.gamma);
  const GasConstants k{c.gamma};
  const PolarCurve curve = polar::sweep(Mu, samples, k);
  const CriticalAngle crit = polar::criticalAngle(Mu, k);
  const SonicAngle son = polar::sonicAngle(Mu, k);
  {
    Output o(c.out);
    std::ostream& os = *o;
    os << "# " << headerText(c, "Mu=" + fmt(Mu)) << '\n';
    os << "beta_rad,tau_rad,vdx,vdy,rhoD,MD,type\n";
    os << std::setprecision(17);
    for (const PolarSample& s : curve.samples)
      os << s.beta << ',' << s.tau << ',' << s.vD.x << ',' << s.vD.y << ',' << s.rhoD << ','
         << s.MD << ',' << typeLetter(s.type) << '\n';
    if (o.os != &std::cout) os.flush();
  }
  std::cout << std::setprecision(12) << "tau_star=" << crit.tauStar << ",tau_s=" << son.tauS
            << '\n';
  return exitOk;
}

inline int runTransition(const Common& c, double alphaDeg, double M1min, double M1max, int points) {
  validateGamma(c.gamma);
  if (!(M1min > 1.0) || !(M1max > M1min) || points < 2)
    throw DomainError("transition: need 1 < M1-min < M1-max and at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = M1min + (M1max - M1min) * i / (points - 1);
  const auto pts = reflection::transitionCurves(c.gamma, rad(alphaDeg), grid);
  int ok = 0;
  {
    Output o(c.out);
    std::ostream& os = *o;
    os << "# " << headerText(c, "alpha_deg=" + fmt(alphaDeg)) << '\n';
    os << "M1,theta_d_deg,theta_s_deg,status\n" << std::setprecision(17);
    for (const TransitionPoint& p : pts) {
      os << p.M1 << ',' << deg(p.thetaD) << ',' << deg(p.thetaS) << ',' << p.status << '\n';
      ok += p.status == "ok";
    }
  }
  std::cout << "points=" << pts.size() << ",ok=" << ok << '\n';
  return exitOk;
}

inline int runTrivial(const Common& c, const BaseSpec& b) {
  validateGamma(c.gamma);
  const GasConstants k{c.gamma};
  const TrivialRR t = b.build(k);
  const CornerBeta0 cb = pencil::reflectionCornerBeta0(t);
  nlohmann::json j = trivialJson(t);
  j["beta0"] = cb.beta0;
  j["header"] = headerJson(c);
  {
    Output o(c.out);
    *o << j.dump(2) << '\n';
  }
  std::cout << std::setprecision(12) << "type=" << toString(t.reflectedType)
            << ",transonic=" << t.transonic() << ",beta0=" << cb.beta0 << ",M1=" << t.params.M1
            << ",alpha_deg=" << deg(t.params.alpha) << '\n';
  return exitOk;
}

inline int runPencil(const Common& c, const std::string& phi1s, const std::string& phi2s,
                     const std::string& g1s, const std::string& g2s, bool neumann, int count) {
  const double phi1 = parseAngle(phi1s), phi2 = parseAngle(phi2s);
  double g1 = 0.5 * M_PI, g2 = 0.5 * M_PI;
  if (!neumann) {
    if (g1s.empty() || g2s.empty())
      throw DomainError("pencil: give --gamma1 and --gamma2, or --neumann");
    g1 = parseAngle(g1s);
    g2 = parseAngle(g2s);
  }
  const CornerSpectrum s = pencil::pencilSpectrum(phi1, phi2, g1, g2, count);
  nlohmann::json j{{"phi1", s.phi1}, {"phi2", s.phi2}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2}};
  j["betas"] = nlohmann::json::array();
  for (const auto& e : s.betas) j["betas"].push_back({{"beta", e.beta}, {"mult", e.mult}});
  j["header"] = headerJson(c);
  {
    Output o(c.out);
    *o << j.dump(2) << '\n';
  }
  std::cout << std::setprecision(15) << "beta0=" << s.beta0 << ",beta1=" << s.beta1 << '\n';
  return exitOk;
}

inline int runLinsolve(const Common& c, const BaseSpec& b, double meshH, double kappa,
                       double rMin, double rMax, const std::string& meshOut) {
  validateGamma(c.gamma);
  const GasConstants k{c.gamma};
  const TrivialRR t = b.build(k);
  const MappedGrid grid = MappedGrid::fromH(meshH, kappa);
  const LinearizedSystem sys = linsolve::assembleLinearized(t, grid);
  const linsolve::KernelResult kr = linsolve::kernelCompute(sys);
  const linsolve::ExtremumCheck mp = linsolve::maximumPrincipleCheck(kr.field);
  const CornerBeta0 cb = pencil::reflectionCornerBeta0(t);
  const linsolve::ExponentFit fit = linsolve::reflectionCornerFit(sys, kr.field, rMin, rMax);
  {
    Output o(c.out);
    *o << "# " << headerText(c, "mesh_h=" + fmt(meshH) + " kappa=" + fmt(kappa)) << '\n';
    kr.field.writeCsv(*o);
  }
  if (!meshOut.empty()) {
    Output m(meshOut);
    *m << "# " << headerText(c, "mesh_h=" + fmt(meshH) + " kappa=" + fmt(kappa)) << '\n';
    TriangleMesh::fromGeometry(sys.geom).write(*m);
  }
  std::cout << std::setprecision(6) << "sigma_min=" << kr.sigmaMin
            << ",sigma_second=" << kr.sigmaSecond << ",gap=" << kr.gap
            << ",max_principle=" << (mp.ok ? "ok" : "violated") << ",beta0=" << cb.beta0
            << ",fitted=" << fit.exponent << "+-" << fit.halfWidth << '\n';
  return mp.ok ? exitOk : exitDiagnostic;
}

inline int runPerturb(const Common& c, const BaseSpec& b, double dTheta, double dM1,
                      double dAlpha, double meshH, double kappa, int maxIter,
                      const std::string& fieldOut) {
  validateGamma(c.gamma);
  const GasConstants k{c.gamma};
  const TrivialRR t = b.build(k);
  ReflectionParams q = t.params;
  q.theta += rad(dTheta);
  q.M1 += dM1;
  q.alpha += rad(dAlpha);
  const MappedGrid grid = MappedGrid::fromH(meshH, kappa);
  NewtonOptions opt;
  opt.tol = c.tol;
  opt.maxIter = maxIter;
  const PerturbedRR r = perturb::newtonSolve(t, q, grid, opt);

  using nlohmann::json;
  json j;
  j["header"] = headerJson(c);
  j["params"] = {{"M1", q.M1}, {"alpha_rad", q.alpha}, {"theta_rad", q.theta},
                 {"gamma", q.gamma}, {"mesh_h", meshH}, {"kappa", kappa}};
  j["base"] = trivialJson(t);
  j["iterations"] = r.iterations;
  j["continuation_steps"] = r.continuationSteps;
  j["residual_history"] = r.residualHistory;
  j["residual_norms"] = {{"interior", r.residualNorms.interior}, {"A", r.residualNorms.wallA},
                         {"B", r.residualNorms.wallB},          {"S", r.residualNorms.shock},
                         {"corner", r.residualNorms.corner},    {"pin", r.residualNorms.pin}};
  j["shock_curve"] = json::array();
  for (const Vec2d& p : r.shockCurve) j["shock_curve"].push_back({p.x, p.y});
  j["beta0"] = std::isfinite(r.beta0) ? json(r.beta0) : json(nullptr);
  j["type_flags"] = {{"weak", r.weakType}, {"transonic", r.transonic}};
  j["displacement"] = r.displacement;
  j["xiB"] = {r.xiB.x, r.xiB.y};
  j["ellipticity_margin"] = r.ellipticityMargin;
  j["shock_single_valued"] = r.shockSingleValued;
  {
    Output o(c.out);
    *o << j.dump(2) << '\n';
  }
  if (!fieldOut.empty()) {
    Output f(fieldOut);
    *f << "# " << headerText(c, "mesh_h=" + fmt(meshH)) << '\n';
    r.field.writeCsv(*f);
  }
  std::cout << std::setprecision(6) << "iterations=" << r.iterations
            << ",residual=" << r.residualHistory.back() << ",displacement=" << r.displacement
            << ",weak=" << r.weakType << ",transonic=" << r.transonic << '\n';
  return exitOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
  CLI::App app{"reflectlab: shock polars, trivial regular reflection and its perturbations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  Common common;
  auto addCommon = [&](CLI::App* sub, const std::string& defaultFormat) {
    common.format = defaultFormat;
    sub->add_option("--gamma", common.gamma, "adiabatic exponent (> 1)");
    sub->add_option("--tol", common.tol, "solver tolerance");
    sub->add_option("--out", common.out, "output file (default stdout)");
    sub->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({defaultFormat}));
  };

  double Mu = 2.0;
  int samples = 200;
  auto* polarCmd = app.add_subcommand("polar", "shock polar sweep with tau* and tau_s");
  addCommon(polarCmd, "csv");
  polarCmd->add_option("--Mu", Mu, "upstream Mach number")->required();
  polarCmd->add_option("--samples", samples, "number of polar samples")->check(CLI::Range(2, 1000000));

  double alphaDeg = 0.0, M1min = 1.2, M1max = 4.0;
  int points = 20;
  auto* transCmd = app.add_subcommand("transition", "detachment and sonic wedge angles");
  addCommon(transCmd, "csv");
  transCmd->add_option("--alpha-deg", alphaDeg, "incident shock angle alpha [deg]");
  transCmd->add_option("--M1-min", M1min, "smallest M1");
  transCmd->add_option("--M1-max", M1max, "largest M1");
  transCmd->add_option("--points", points, "number of M1 values");

  BaseSpec base;
  auto* trivCmd = app.add_subcommand("trivial", "build and validate a trivial RR");
  addCommon(trivCmd, "json");
  addBaseOptions(trivCmd, base);

  std::string phi1 = "0", phi2 = "pi/2", g1, g2;
  bool neumann = false;
  int count = 4;
  auto* pencilCmd = app.add_subcommand("pencil", "corner pencil spectrum (angles in radians)");
  addCommon(pencilCmd, "json");
  pencilCmd->add_option("--phi1", phi1, "first edge angle");
  pencilCmd->add_option("--phi2", phi2, "second edge angle");
  pencilCmd->add_option("--gamma1", g1, "bc angle on edge 1");
  pencilCmd->add_option("--gamma2", g2, "bc angle on edge 2");
  pencilCmd->add_flag("--neumann", neumann, "Neumann conditions on both edges");
  pencilCmd->add_option("--count", count, "eigenvalues beta_l for |l| <= count");

  double meshH = 1.0 / 80.0, kappa = 4.0, rMin = 0.005, rMax = 0.05;
  std::string meshOut, fieldOut;
  auto* linCmd = app.add_subcommand("linsolve", "kernel of the linearized problem and corner fit");
  addCommon(linCmd, "csv");
  addBaseOptions(linCmd, base);
  linCmd->add_option("--mesh-h", meshH, "reference mesh size");
  linCmd->add_option("--kappa", kappa, "grading strength");
  linCmd->add_option("--fit-rmin", rMin, "inner radius of the exponent fit");
  linCmd->add_option("--fit-rmax", rMax, "outer radius of the exponent fit");
  linCmd->add_option("--mesh-out", meshOut, "write the triangulated mesh here");

  double dTheta = 0.0, dM1 = 0.0, dAlpha = 0.0;
  int maxIter = 30;
  auto* pertCmd = app.add_subcommand("perturb", "Newton continuation to a perturbed RR");
  addCommon(pertCmd, "json");
  addBaseOptions(pertCmd, base);
  pertCmd->add_option("--dtheta", dTheta, "wedge angle perturbation [deg]");
  pertCmd->add_option("--dM1", dM1, "incident Mach perturbation");
  pertCmd->add_option("--dalpha", dAlpha, "incident angle perturbation [deg]");
  pertCmd->add_option("--mesh-h", meshH, "reference mesh size");
  pertCmd->add_option("--kappa", kappa, "grading strength");
  pertCmd->add_option("--max-iter", maxIter, "Newton iteration cap");
  pertCmd->add_option("--field-out", fieldOut, "write psi at the nodes here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exitUsage;
  }

  try {
    if (*polarCmd) return runPolar(common, Mu, samples);
    if (*transCmd) return runTransition(common, alphaDeg, M1min, M1max, points);
    if (*trivCmd) return runTrivial(common, base);
    if (*pencilCmd) return runPencil(common, phi1, phi2, g1, g2, neumann, count);
    if (*linCmd) return runLinsolve(common, base, meshH, kappa, rMin, rMax, meshOut);
    if (*pertCmd)
      return runPerturb(common, base, dTheta, dM1, dAlpha, meshH, kappa, maxIter, fieldOut);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::domain: return exitDomain;
      case ErrorKind::solver: return exitSolver;
      case ErrorKind::diagnostic: return exitDiagnostic;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exitUsage;
  }
  return exitUsage;
}

}  // namespace reflectlab::cli
