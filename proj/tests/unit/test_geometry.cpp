#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "arcrte/geometry.hpp"
#include "arcrte/mesh.hpp"

using namespace arcrte;
using namespace arcrte::geometry;

namespace {

Arc upper_half(int K) { return Arc(Disk{0.0, 1.0}, 0.0, kPi, K); }

}  // namespace

TEST(Arc, WeightsSumToParameterRange) {
  const Arc arc(Disk{cplx(0.3, -0.2), 2.0}, 0.4, 2.9, 37);
  double s = 0.0;
  for (double w : arc.weights()) s += w;
  EXPECT_NEAR(s, 2.5, 1e-13);
  for (int k = 0; k < arc.size(); ++k) {
    EXPECT_GT(arc.params()[k], 0.4);
    EXPECT_LT(arc.params()[k], 2.9);
  }
  const auto e = arc.cell_edges();
  EXPECT_DOUBLE_EQ(e.front(), 0.4);
  EXPECT_DOUBLE_EQ(e.back(), 2.9);
}

TEST(Arc, DerivativeMatchesFiniteDifference) {
  const Arc arc(Disk{cplx(0.1, 0.2), 1.5}, -1.0, 1.0, 5, 0.3);
  const double w = 0.37, h = 1e-6;
  const cplx fd = (arc.point(w + h) - arc.point(w - h)) / (2 * h);
  EXPECT_LT(std::abs(fd - arc.derivative(w)), 1e-8);
}

TEST(Arc, RejectsFullCircleAndEmptyRange) {
  EXPECT_THROW(Arc(Disk{}, 0.0, 2 * kPi, 10), std::invalid_argument);
  EXPECT_THROW(Arc(Disk{}, 1.0, 1.0, 10), std::invalid_argument);
}

TEST(Chord, NodesInteriorAndSymmetric) {
  const Chord ch(0.7, 9);
  EXPECT_DOUBLE_EQ(ch.dx(), 1.4 / 9);
  for (int n = 0; n < ch.N; ++n) {
    EXPECT_GT(ch.node(n), -0.7);
    EXPECT_LT(ch.node(n), 0.7);
    EXPECT_NEAR(ch.node(n), -ch.node(ch.N - 1 - n), 1e-15);
  }
  EXPECT_NEAR(ch.node(4), 0.0, 1e-15);
}

TEST(Normalize, UpperHalfCircleIsIdentity) {
  const auto g = normalize(Disk{}, upper_half(16), 10);
  EXPECT_NEAR(g.chord.c, 1.0, 1e-14);
  EXPECT_NEAR(g.motion.angle, 0.0, 1e-14);
  EXPECT_LT(std::abs(g.motion.origin), 1e-14);
  EXPECT_LT(std::abs(g.arc.point(g.arc.omega_minus()) - 1.0), 1e-14);
  EXPECT_LT(std::abs(g.arc.point(g.arc.omega_plus()) + 1.0), 1e-14);
}

TEST(Normalize, RightHalfCircleRotatesByQuarterTurn) {
  const Arc arc(Disk{}, -kPi / 2, kPi / 2, 20);
  const auto g = normalize(Disk{}, arc, 10);
  EXPECT_NEAR(g.chord.c, 1.0, 1e-14);
  // Endpoint -i must land on +c, endpoint +i on -c.
  EXPECT_LT(std::abs(g.motion.apply(cplx(0, -1)) - 1.0), 1e-14);
  EXPECT_LT(std::abs(g.motion.apply(cplx(0, 1)) + 1.0), 1e-14);
  EXPECT_NEAR(std::remainder(g.motion.angle + kPi / 2, 2 * kPi), 0.0, 1e-14);
  for (cplx z : g.arc.points()) EXPECT_GT(z.imag(), 0.0);
}

TEST(Normalize, RotatedArcKeepsHalfLength) {
  for (double phi : {0.3, 1.7, -2.4}) {
    const Arc arc(Disk{cplx(0.2, -0.1), 1.0}, 0.0, kPi, 30, phi);
    const auto g = normalize(arc.disk(), arc, 10);
    EXPECT_NEAR(g.chord.c, 1.0, 1e-13);
    for (cplx z : g.arc.points()) EXPECT_GT(z.imag(), 0.0);
    const cplx w = cplx(0.31, 0.4);
    EXPECT_LT(std::abs(g.motion.inverse(g.motion.apply(w)) - w), 1e-14);
  }
}

TEST(Normalize, ShortArcHasShorterChord) {
  const Arc arc(Disk{}, 0.5, 1.5, 30);
  const auto g = normalize(Disk{}, arc, 10);
  EXPECT_NEAR(g.chord.c, std::sin(0.5), 1e-14);
}

TEST(FanMesh, SmallTargetTilesPolygon) {
  const Arc arc = upper_half(24);
  const auto fm = fan_mesh(arc, Chord(1.0, 20), 8);
  EXPECT_GE(fm.tri.num_triangles(), 8);
  for (double a : fm.tri.areas()) EXPECT_GT(a, 0.0);
  EXPECT_NEAR(fm.tri.total_area(), fm.polygon_area, 1e-12);
}

TEST(FanMesh, DeskScaleTriangleCount) {
  const auto fm = fan_mesh(upper_half(314), Chord(1.0, 500), 8631);
  EXPECT_GE(fm.tri.num_triangles(), 4316);
  EXPECT_LE(fm.tri.num_triangles(), 17262);
  EXPECT_NEAR(fm.tri.total_area(), fm.polygon_area, 1e-10 * fm.polygon_area);
}

TEST(FanMesh, BoundaryVerticesOnDataNodes) {
  const Arc arc = upper_half(314);
  const Chord ch(1.0, 500);
  const auto fm = fan_mesh(arc, ch, 8000);
  const auto& V = fm.tri.vertices();
  const auto& kinds = fm.tri.kinds();
  std::set<int> seen;
  for (int v = 0; v < fm.tri.num_vertices(); ++v) {
    if (kinds[v] == VertexKind::Arc) {
      const int k = fm.arc_sample[v];
      ASSERT_GE(k, 0);
      EXPECT_LT(std::abs(V[v] - arc.points()[k]), 1e-15);
      EXPECT_TRUE(seen.insert(k).second);
    } else if (kinds[v] == VertexKind::Chord) {
      EXPECT_EQ(V[v].imag(), 0.0);
      const double x = V[v].real();
      if (std::abs(std::abs(x) - 1.0) < 1e-14 || x == 0.0) continue;  // corners and centre
      const double n = (x + 1.0) / ch.dx() - 0.5;
      EXPECT_NEAR(n, std::round(n), 1e-9);
    } else {
      EXPECT_GT(V[v].imag(), 0.0);
      EXPECT_LT(std::abs(V[v]), 1.0);
    }
  }
  // Loop starts at the +c corner and walks counter-clockwise.
  EXPECT_LT(std::abs(V[fm.boundary_loop.front()] - 1.0), 1e-15);
}

TEST(FanMesh, CentroidsInsidePolygon) {
  const auto fm = fan_mesh(upper_half(200), Chord(1.0, 300), 2000);
  for (cplx r : fm.tri.centroids()) {
    EXPECT_GT(r.imag(), 0.0);
    EXPECT_LT(std::abs(r), 1.0);
  }
}

TEST(FanMesh, TooFewSamplesRejected) {
  EXPECT_THROW(fan_mesh(upper_half(20), Chord(1.0, 100), 8000), std::invalid_argument);
  EXPECT_THROW(fan_mesh(upper_half(20), Chord(1.0, 100), 4), std::invalid_argument);
}

TEST(Locate, CentroidOutsideAndSharedEdge) {
  const auto fm = fan_mesh(upper_half(100), Chord(1.0, 100), 500);
  const auto& T = fm.tri;
  for (int l = 0; l < T.num_triangles(); l += 7) {
    auto hit = T.locate(T.centroids()[l]);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(*hit, l);
  }
  EXPECT_FALSE(T.locate(cplx(0.0, -0.1)).has_value());
  EXPECT_FALSE(T.locate(cplx(2.0, 0.5)).has_value());
  // Find a shared edge and check the tie-break.
  bool checked = false;
  for (int a = 0; a < T.num_triangles() && !checked; ++a)
    for (int b = a + 1; b < T.num_triangles() && !checked; ++b) {
      int shared[3], ns = 0;
      for (int i : T.triangles()[a])
        for (int j : T.triangles()[b])
          if (i == j) shared[ns++] = i;
      if (ns != 2) continue;
      const cplx mid = 0.5 * (T.vertices()[shared[0]] + T.vertices()[shared[1]]);
      auto hit = T.locate(mid);
      ASSERT_TRUE(hit.has_value());
      EXPECT_EQ(*hit, std::min(a, b));
      checked = true;
    }
  EXPECT_TRUE(checked);
}

TEST(Triangulation, RejectsClockwiseTriangle) {
  std::vector<cplx> v = {0.0, 1.0, cplx(0, 1)};
  EXPECT_NO_THROW(Triangulation(v, {{0, 1, 2}}));
  EXPECT_THROW(Triangulation(v, {{0, 2, 1}}), std::invalid_argument);
  EXPECT_THROW(Triangulation(v, {{0, 1, 3}}), std::invalid_argument);
}

TEST(Triangulation, TextRoundTrip) {
  const auto fm = fan_mesh(upper_half(60), Chord(1.0, 60), 100);
  std::stringstream ss;
  fm.tri.write(ss);
  const auto back = Triangulation::read(ss);
  ASSERT_EQ(back.num_vertices(), fm.tri.num_vertices());
  ASSERT_EQ(back.num_triangles(), fm.tri.num_triangles());
  for (int v = 0; v < back.num_vertices(); ++v)
    EXPECT_LT(std::abs(back.vertices()[v] - fm.tri.vertices()[v]), 1e-15);
  EXPECT_EQ(back.triangles(), fm.tri.triangles());
  std::stringstream bad("3\n0 0\n1 0\n");
  EXPECT_THROW(Triangulation::read(bad), std::invalid_argument);
}

TEST(DiskMesh, CoversDiskWithMinimumQuality) {
  const Disk d{cplx(0.1, 0.0), 1.0};
  const auto T = disk_mesh(d, 5000);
  EXPECT_GE(T.num_triangles(), 2500);
  EXPECT_LE(T.num_triangles(), 10000);
  // Inscribed polygon area converges to pi at second order.
  EXPECT_NEAR(T.total_area(), kPi, 5e-3);
  for (cplx v : T.vertices()) EXPECT_LE(std::abs(v - d.center), 1.0 + 1e-12);
  EXPECT_NE(T.strategy(), fan_mesh(upper_half(400), Chord(1.0, 400), 5000).tri.strategy());
}
