#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "arcrte/mesh.hpp"
#include "arcrte/phantom.hpp"
#include "arcrte/transforms.hpp"

using namespace arcrte;
using namespace arcrte::transforms;

namespace {

const geometry::Disk kUnit{0.0, 1.0};

MediumModel constant_medium(double mu_a, double mu_s = 0.0, double g = 0.0) {
  return {kUnit, PiecewiseConstantField(kUnit, mu_a), PiecewiseConstantField(kUnit, mu_s), g};
}

// Principal value of (1/pi) int f(t)/(s-t) dt with cells placed symmetrically
// about s, so the singular part cancels pairwise.
double brute_pv(const std::function<double(double)>& f, double s, double half_width, long n) {
  const double h = half_width / n;
  double sum = 0.0;
  for (long j = 0; j < n; ++j) {
    const double d = (j + 0.5) * h;
    sum += (f(s - d) - f(s + d)) / d;
  }
  return sum * h / kPi;
}

}  // namespace

TEST(Medium, PhaseFunctionIsNormalized) {
  for (double g : {0.0, 0.5, 0.9}) {
    MediumModel m = constant_medium(0.0, 1.0, g);
    const int n = 4096;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m.phase_function(std::cos(2 * kPi * j / n));
    EXPECT_NEAR(s * 2 * kPi / n, 1.0, 1e-10) << "g = " << g;
  }
}

TEST(Medium, PhaseModesAreSymmetricGeometric) {
  MediumModel m = constant_medium(0.0, 1.0, 0.5);
  const int n = 4096;
  for (int k = 0; k <= 6; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = 2 * kPi * j / n;
      s += m.phase_function(std::cos(a)) * std::cos(k * a);
    }
    s /= n;
    EXPECT_NEAR(s, m.p_mode(k), 1e-12);
    EXPECT_DOUBLE_EQ(m.p_mode(k), m.p_mode(-k));
    EXPECT_NEAR(m.p_mode(k), std::pow(0.5, k) / (2 * kPi), 1e-15);
  }
}

TEST(Field, PiecesAndLineIntegral) {
  PiecewiseConstantField f(kUnit, 0.1, {{Circle{cplx(0.5, 0.0), 0.3}, 1.9},
                                       {Rect::from_bounds(-0.5, -0.1, -0.2, 0.2), 1.0}});
  EXPECT_DOUBLE_EQ(f(cplx(0.5, 0.0)), 1.9);
  EXPECT_DOUBLE_EQ(f(cplx(-0.3, 0.0)), 1.0);
  EXPECT_DOUBLE_EQ(f(cplx(0.0, 0.5)), 0.1);
  EXPECT_DOUBLE_EQ(f(cplx(1.5, 0.0)), 0.0);
  // Piece values replace the background: along the x axis 1.0 of background,
  // 0.6 inside the disk, 0.4 inside the rectangle.
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_NEAR(f.line_integral(0.0, 1.0, -inf, inf), 0.1 + 0.6 * 1.9 + 0.4, 1e-14);
  EXPECT_NEAR(f.line_integral(cplx(0.5, 0.0), 1.0, 0.0, inf), 0.02 + 0.3 * 1.9, 1e-14);
  EXPECT_NEAR(f.triangle_average(cplx(0.45, -0.05), cplx(0.55, -0.05), cplx(0.5, 0.05)), 1.9, 1e-15);
}

TEST(Field, RadonPathMatchesLineIntegral) {
  PiecewiseConstantField f(kUnit, 0.3, {{Circle{cplx(0.2, -0.1), 0.4}, 2.0},
                                       {Rect{cplx(-0.4, 0.3), 0.2, 0.1, 0.6}, 1.0}});
  const double inf = std::numeric_limits<double>::infinity();
  for (double th : {0.0, 0.9, 2.2, 4.4})
    for (double s : {-0.7, -0.2, 0.05, 0.5}) {
      const cplx xi = std::polar(1.0, th);
      EXPECT_NEAR(f.radon_integral(s, th), f.line_integral(s * xi, kI * xi, -inf, inf), 1e-13);
    }
}

TEST(Field, RectangleRotationAndCoverage) {
  const Rect r{0.0, 0.5, 0.1, kPi / 2};
  EXPECT_TRUE(contains(r, cplx(0.0, 0.45)));
  EXPECT_FALSE(contains(r, cplx(0.45, 0.0)));
  EXPECT_NEAR(chord_length(r, cplx(0.0, -2.0), cplx(0.0, 1.0), -10.0, 10.0), 1.0, 1e-14);
  const Region moved = transformed(Region(Circle{cplx(0.5, 0.0), 0.2}), geometry::RigidMotion{kPi / 2, 0.0});
  EXPECT_TRUE(contains(moved, cplx(0.0, -0.5)));
  EXPECT_DOUBLE_EQ(coverage(Circle{0.0, 5.0}, 0.0, 1.0, cplx(0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(coverage(Circle{cplx(9, 9), 0.1}, 0.0, 1.0, cplx(0, 1)), 0.0);
}

TEST(DivergentBeam, ClosedForms) {
  EXPECT_EQ(divergent_beam(constant_medium(0.0), cplx(0.2, 0.1), 1.0), 0.0);
  const auto m = constant_medium(0.7);
  for (double th : {0.0, 1.0, 2.5, 4.0}) EXPECT_NEAR(divergent_beam(m, 0.0, th), 0.7, 1e-14);
  for (double s : {-0.6, 0.0, 0.3, 0.9}) EXPECT_NEAR(divergent_beam(m, cplx(s, 0.0), 0.0), 0.7 * (1 - s), 1e-14);
}

TEST(Radon, UnitDiskIndicator) {
  const auto m = constant_medium(1.0);
  EXPECT_EQ(radon(constant_medium(0.0), 0.3, 0.2), 0.0);
  for (int j = -20; j <= 20; ++j) {
    const double s = j / 20.0;
    for (double th : {0.0, 0.7, 3.0}) EXPECT_NEAR(radon(m, s, th), 2 * std::sqrt(1 - s * s), 1e-12);
  }
  EXPECT_EQ(radon(m, 1.2, 0.4), 0.0);
  EXPECT_EQ(radon(m, -3.0, 0.4), 0.0);
}

TEST(Hilbert, ZeroAndOddSymmetry) {
  EXPECT_EQ(hilbert_of_radon(constant_medium(0.0), 0.3, 0.0, 100), 0.0);
  EXPECT_NEAR(hilbert_of_radon(constant_medium(1.0), 0.0, 0.3, 100), 0.0, 1e-14);
  EXPECT_THROW(hilbert_of_radon(constant_medium(1.0), 0.0, 0.3, 8), std::invalid_argument);
}

TEST(Hilbert, MatchesDenseOracle) {
  const auto m = constant_medium(1.0);
  auto R = [](double t) { return std::abs(t) < 1 ? 2 * std::sqrt(1 - t * t) : 0.0; };
  const double ref = brute_pv(R, 0.5, 2.0, 1000000);
  EXPECT_NEAR(hilbert_of_radon(m, 0.5, 0.0, 10000), ref, 1e-4);
  // Analytic value for the semicircle profile: (2/pi) * pi * s = 2 s.
  EXPECT_NEAR(ref, 1.0, 1e-5);
}

TEST(Hilbert, ConvergesAtLeastFirstOrder) {
  // Smooth profile: a disk off centre, evaluated away from its support edge.
  PiecewiseConstantField f(kUnit, 0.0, {{Circle{cplx(0.0, 0.1), 0.5}, 1.0}});
  MediumModel m{kUnit, f, PiecewiseConstantField(kUnit, 0.0), 0.0};
  auto R = [&](double t) { return radon(m, t, 0.0); };
  const double ref = brute_pv(R, 0.2, 2.0, 1000000);
  double prev = 0.0;
  for (int n : {200, 400, 800, 1600}) {
    const double e = std::abs(hilbert_of_radon(m, 0.2, 0.0, n) - ref);
    if (prev > 0.0) EXPECT_LT(e, 0.75 * prev) << "nodes " << n;
    prev = e;
  }
}

TEST(HFactor, Decomposition) {
  const auto zero = constant_medium(0.0);
  EXPECT_EQ(std::abs(h_factor(zero, cplx(0.1, 0.2), 1.0, 100)), 0.0);
  const auto unit = constant_medium(1.0);
  EXPECT_LT(std::abs(h_factor(unit, 0.0, 0.0, 100)), 1e-13);
  const auto ph = harness::standard_phantom();
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.4, 0.5), cplx(0.7, -0.3)})
    for (double th : {0.3, 2.0, 5.1}) {
      const cplx h = h_factor(ph.medium, z, th, 100);
      const cplx perp = kI * direction(th);
      const double s = (std::conj(perp) * z).real();
      EXPECT_NEAR(h.real(), divergent_beam(ph.medium, z, th) - 0.5 * radon(ph.medium, s, th + kPi / 2), 1e-13);
      EXPECT_NEAR(h.imag(), 0.5 * hilbert_of_radon(ph.medium, s, th + kPi / 2, 100), 1e-13);
    }
}

TEST(Tables, VacuumIsDelta) {
  const auto zero = constant_medium(0.0);
  const std::vector<cplx> pts = {cplx(0.1, 0.3), cplx(-0.5, 0.2)};
  const auto tab = alpha_beta_tables(zero, pts, pts, pts, 64, 20, 4, 100);
  EXPECT_EQ(tab.alpha.cols(), 21);
  EXPECT_EQ(tab.beta.cols(), 15);
  for (const auto* A : {&tab.alpha, &tab.beta, &tab.beta_chord})
    for (int p = 0; p < 2; ++p)
      for (int m = 0; m < A->cols(); ++m) EXPECT_LT(std::abs((*A)(p, m) - (m == 0 ? 1.0 : 0.0)), 1e-14);
}

TEST(Tables, Preconditions) {
  const auto m = constant_medium(0.1);
  const std::vector<cplx> pts = {cplx(0.1, 0.3)};
  EXPECT_THROW(alpha_beta_tables(m, pts, pts, pts, 39, 20, 4), std::invalid_argument);
  EXPECT_THROW(alpha_beta_tables(m, pts, pts, pts, 64, 6, 4), std::invalid_argument);
}

TEST(Tables, ConvolutionInverseOnSmoothMedium) {
  // Constant attenuation on the disk: h is smooth in theta at interior points.
  const auto m = constant_medium(0.6);
  const std::vector<cplx> pts = {cplx(0.1, 0.2), cplx(-0.3, 0.1), cplx(0.0, 0.6)};
  const auto A = integrating_factor_modes(m, pts, 512, 12, -1, 4000);
  const auto B = integrating_factor_modes(m, pts, 512, 12, +1, 4000);
  for (int p = 0; p < 3; ++p)
    for (int n = 0; n <= 8; ++n) {
      cplx s = 0.0;
      for (int j = 0; j <= n; ++j) s += A(p, j) * B(p, n - j);
      EXPECT_LT(std::abs(s - (n == 0 ? 1.0 : 0.0)), 1e-6) << "point " << p << " mode " << n;
    }
}

TEST(Tables, ModesBoundedBySupremum) {
  const auto ph = harness::standard_phantom();
  const std::vector<cplx> pts = {cplx(0.2, 0.5), cplx(-0.6, 0.3)};
  const int T = 128;
  const auto A = integrating_factor_modes(ph.medium, pts, T, 60, -1, 100);
  for (int p = 0; p < 2; ++p) {
    double sup = 0.0;
    for (int t = 0; t < T; ++t) sup = std::max(sup, std::abs(std::exp(-h_factor(ph.medium, pts[p], 2 * kPi * t / T, 100))));
    for (int k = 0; k <= 60; ++k) EXPECT_LE(std::abs(A(p, k)), sup * (1 + 1e-12));
  }
}

namespace {

struct PhantomTables {
  harness::Phantom ph = harness::standard_phantom();
  geometry::Arc arc = ph.arc(314);
  geometry::FanMesh fm = geometry::fan_mesh(arc, geometry::Chord(1.0, 500), 8000);
  std::vector<cplx> vertices;
  PhantomTables() {
    for (int v = 0; v < fm.tri.num_vertices(); ++v)
      if (fm.tri.kinds()[v] == geometry::VertexKind::Interior) vertices.push_back(fm.tri.vertices()[v]);
  }
};

}  // namespace

TEST(Tables, PhantomDecayBelowThresholdFromMode175) {
  PhantomTables pt;
  const auto A = integrating_factor_modes(pt.ph.medium, pt.arc.points(), 360, 179, -1, 100);
  const auto B = integrating_factor_modes(pt.ph.medium, pt.vertices, 360, 179, +1, 100);
  const auto ca = column_max_abs(A), cb = column_max_abs(B);
  for (int m = 175; m <= 179; ++m) {
    EXPECT_LT(ca[m], 0.01) << m;
    EXPECT_LT(cb[m], 0.01) << m;
  }
}

TEST(Tables, CoarseAndFineAgreeOnSubset) {
  PhantomTables pt;
  std::vector<cplx> arc_sub, vert_sub;
  for (int k = 0; k < pt.arc.size(); k += 20) arc_sub.push_back(pt.arc.points()[k]);
  for (std::size_t v = 0; v < pt.vertices.size(); v += pt.vertices.size() / 12) vert_sub.push_back(pt.vertices[v]);
  auto compare = [&](const std::vector<cplx>& pts, int sign) {
    const auto coarse = integrating_factor_modes(pt.ph.medium, pts, 360, 175, sign, 100);
    const auto fine = integrating_factor_modes(pt.ph.medium, pts, 2880, 175, sign, 10000);
    return (coarse - fine).cwiseAbs().maxCoeff();
  };
  EXPECT_LT(compare(arc_sub, -1), 0.01);
  EXPECT_LT(compare(vert_sub, +1), 0.01);
}

TEST(Tables, CsvHeader) {
  Eigen::MatrixXcd t(1, 2);
  t << cplx(1, 2), cplx(3, 4);
  std::ostringstream os;
  write_table_csv(os, t);
  EXPECT_EQ(os.str().substr(0, 17), "point,mode,re,im\n");
}
