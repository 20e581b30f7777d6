#include <gtest/gtest.h>

#include <random>

#include "arcrte/forward.hpp"
#include "arcrte/phantom.hpp"

using namespace arcrte;
using namespace arcrte::forward;
using transforms::MediumModel;
using transforms::PiecewiseConstantField;

namespace {

const geometry::Disk kUnit{0.0, 1.0};

MediumModel medium(double mu_a, double mu_s, double g) {
  return {kUnit, PiecewiseConstantField(kUnit, mu_a), PiecewiseConstantField(kUnit, mu_s), g};
}

ForwardOptions small(int triangles, int T = 90) {
  ForwardOptions o;
  o.mesh_triangles = triangles;
  o.directions = T;
  return o;
}

ForwardSolver solver(const MediumModel& m, const ForwardOptions& o) {
  return ForwardSolver(m, geometry::disk_mesh(m.domain, o.mesh_triangles), o);
}

}  // namespace

TEST(Forward, ZeroSourceGivesZero) {
  const auto ph = harness::standard_phantom();
  const auto s = solver(ph.medium, small(2000));
  const auto sol = s.solve(PiecewiseConstantField(kUnit, 0.0));
  for (double v : sol.values) EXPECT_EQ(v, 0.0);
  const auto meas = extract_measurement(s, sol, ph.arc(40), 90);
  EXPECT_EQ(meas.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Forward, NonnegativeAndInflowSlotsZero) {
  const auto ph = harness::standard_phantom();
  const auto s = solver(ph.medium, small(4000));
  const auto sol = s.solve(ph.source);
  EXPECT_GT(sol.iterations, 0);
  for (double v : sol.values) EXPECT_GE(v, -1e-12);
  const auto arc = ph.arc(50);
  const auto meas = extract_measurement(s, sol, arc, 45);
  EXPECT_EQ(meas.K, 50);
  EXPECT_EQ(meas.T, 45);
  EXPECT_NEAR(meas.c, 1.0, 1e-14);
  int positive = 0;
  for (int k = 0; k < meas.K; ++k)
    for (int t = 0; t < meas.T; ++t) {
      const cplx nu = arc.normal(arc.params()[k]);
      const double f = (std::conj(nu) * std::polar(1.0, 2 * kPi * t / meas.T)).real();
      if (f <= 0.0) EXPECT_EQ(meas.values(k, t), 0.0);
      if (meas.values(k, t) > 0.0) ++positive;
    }
  EXPECT_GT(positive, 0);
  EXPECT_THROW(extract_measurement(s, sol, arc, 60), std::invalid_argument);
}

TEST(Forward, OutflowNearTopDominatedByOutgoingDirections) {
  const auto ph = harness::standard_phantom();
  const auto s = solver(ph.medium, small(4000));
  const auto sol = s.solve(ph.source);
  const auto arc = ph.arc(41);
  const auto meas = extract_measurement(s, sol, arc, 90);
  const int k = 20;  // zeta = i
  EXPECT_LT(std::abs(arc.points()[k] - cplx(0, 1)), 1e-12);
  double best = 0.0;
  int tbest = -1;
  for (int t = 0; t < 90; ++t)
    if (meas.values(k, t) > best) best = meas.values(k, t), tbest = t;
  ASSERT_GE(tbest, 0);
  EXPECT_GT(std::sin(2 * kPi * tbest / 90), 0.0);
}

TEST(Forward, RayOracleWithoutScattering) {
  const double mu0 = 0.8, q0 = 1.5;
  const auto m = medium(mu0, 0.0, 0.0);
  const auto s = solver(m, small(20000, 180));
  const auto sol = s.solve(PiecewiseConstantField(kUnit, q0));
  EXPECT_EQ(sol.iterations, 0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 2 * kPi);
  for (int i = 0; i < 20; ++i) {
    const double a = U(rng);
    const cplx z = std::polar(1.0, a);
    int t;
    double cosv;
    do {
      t = static_cast<int>(U(rng) / (2 * kPi) * 180) % 180;
      cosv = std::cos(2 * kPi * t / 180 - a);
    } while (cosv < 0.5);  // chords of length >= 1, away from grazing
    const double L = 2 * cosv;
    const double exact = q0 * (1 - std::exp(-mu0 * L)) / mu0;
    EXPECT_NEAR(s.boundary_value(sol, z, t), exact, 0.04 * exact) << "pair " << i;
  }
}

TEST(Forward, BalanceWithoutAbsorption) {
  const auto m = medium(0.0, 2.0, 0.5);
  const auto s = solver(m, small(8000));
  PiecewiseConstantField q(kUnit, 0.0, {{transforms::Circle{cplx(0.2, 0.1), 0.3}, 1.0}});
  const auto sol = s.solve(q);
  const double expected = 2 * kPi * kPi * 0.09;
  EXPECT_NEAR(s.total_outflow(sol), expected, 0.01 * expected);
}

TEST(Forward, SchemesAgree) {
  const auto ph = harness::standard_phantom();
  auto o = small(2000);
  const auto g = solver(ph.medium, o).solve(ph.source);
  o.scheme = Scheme::SourceIteration;
  const auto si = solver(ph.medium, o).solve(ph.source);
  EXPECT_LT(si.history.back(), 1e-8);
  double d = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    d = std::max(d, std::abs(g.values[i] - si.values[i]));
    ref = std::max(ref, std::abs(g.values[i]));
  }
  EXPECT_LT(d, 1e-6 * ref);
  // GMRES needs far fewer sweeps at mu_s = 3.
  EXPECT_LT(g.iterations, si.iterations);
}

TEST(Forward, NonConvergenceCarriesHistory) {
  const auto ph = harness::standard_phantom();
  auto o = small(2000);
  o.scheme = Scheme::SourceIteration;
  o.max_iter = 3;
  try {
    solver(ph.medium, o).solve(ph.source);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.stage(), "forward");
    EXPECT_EQ(e.history().size(), 3u);
  }
}

TEST(Forward, Preconditions) {
  const auto m = medium(0.1, 1.0, 0.5);
  EXPECT_THROW(solver(m, small(2000, 60)), std::invalid_argument);
  EXPECT_THROW(solver(m, small(500)), std::invalid_argument);
  EXPECT_THROW(solver(medium(0.1, 1.0, 1.0), small(2000)), std::invalid_argument);
}

TEST(Forward, RefinementChangesShrink) {
  const auto m = medium(0.5, 0.0, 0.0);
  PiecewiseConstantField q(kUnit, 0.0, {{transforms::Circle{cplx(0.1, 0.3), 0.4}, 1.0}});
  const auto arc = geometry::Arc(kUnit, 0.0, kPi, 30);
  std::vector<Eigen::MatrixXd> meas;
  for (int n : {2000, 8000, 32000}) {
    const auto s = solver(m, small(n));
    meas.push_back(extract_measurement(s, s.solve(q), arc, 90).values);
  }
  const double d1 = (meas[1] - meas[0]).norm(), d2 = (meas[2] - meas[1]).norm();
  EXPECT_LT(d2, d1);
}

TEST(ArcId, RoundTrip) {
  const geometry::Arc arc(geometry::Disk{cplx(0.1, -0.2), 1.5}, 0.25, 2.5, 10, 0.7);
  const auto back = arc_from_id(arc_id(arc), 10);
  EXPECT_EQ(back.omega_minus(), 0.25);
  EXPECT_EQ(back.omega_plus(), 2.5);
  EXPECT_EQ(back.phase(), 0.7);
  EXPECT_EQ(back.disk().radius, 1.5);
  EXPECT_EQ(back.disk().center, cplx(0.1, -0.2));
  EXPECT_THROW(arc_from_id("ellipse:1:2", 10), ConfigError);
  EXPECT_THROW(arc_from_id("circle:1:2", 10), ConfigError);
}
