#include "arcrte/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace arcrte::geometry {

double signed_area(cplx a, cplx b, cplx c) {
  return 0.5 * ((b.real() - a.real()) * (c.imag() - a.imag()) -
                (c.real() - a.real()) * (b.imag() - a.imag()));
}

Triangulation::Triangulation(std::vector<cplx> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             std::vector<VertexKind> kinds, std::string strategy)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      kinds_(std::move(kinds)),
      strategy_(std::move(strategy)) {
  const int nv = num_vertices();
  if (kinds_.empty()) kinds_.assign(nv, VertexKind::Interior);
  if (static_cast<int>(kinds_.size()) != nv)
    throw std::invalid_argument("triangulation: vertex kind count mismatch");
  centroids_.resize(triangles_.size());
  areas_.resize(triangles_.size());
  bbox_.resize(triangles_.size());
  for (std::size_t l = 0; l < triangles_.size(); ++l) {
    const auto& t = triangles_[l];
    for (int v : t)
      if (v < 0 || v >= nv) throw std::invalid_argument("triangulation: vertex index out of range");
    const cplx a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
    const double area = signed_area(a, b, c);
    const double scale = std::max({std::norm(b - a), std::norm(c - b), std::norm(a - c)});
    if (!(area > 1e-14 * scale))
      throw std::invalid_argument("triangulation: triangle " + std::to_string(l) +
                                  " is degenerate or clockwise");
    areas_[l] = area;
    centroids_[l] = (a + b + c) / 3.0;
    bbox_[l] = {std::min({a.real(), b.real(), c.real()}), std::max({a.real(), b.real(), c.real()}),
                std::min({a.imag(), b.imag(), c.imag()}), std::max({a.imag(), b.imag(), c.imag()})};
  }
}

double Triangulation::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

std::vector<double> Triangulation::diameters() const {
  std::vector<double> d(triangles_.size());
  for (std::size_t l = 0; l < triangles_.size(); ++l) {
    const auto& t = triangles_[l];
    const cplx a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
    d[l] = std::max({std::abs(b - a), std::abs(c - b), std::abs(a - c)});
  }
  return d;
}

std::optional<int> Triangulation::locate(cplx z, double tol) const {
  for (int l = 0; l < num_triangles(); ++l) {
    const auto& bb = bbox_[l];
    const double pad = tol * (1.0 + bb[1] - bb[0] + bb[3] - bb[2]);
    if (z.real() < bb[0] - pad || z.real() > bb[1] + pad || z.imag() < bb[2] - pad ||
        z.imag() > bb[3] + pad)
      continue;
    const auto& t = triangles_[l];
    const cplx a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
    const double A = areas_[l];
    const double l0 = signed_area(z, b, c) / A;
    const double l1 = signed_area(a, z, c) / A;
    const double l2 = signed_area(a, b, z) / A;
    if (l0 >= -tol && l1 >= -tol && l2 >= -tol) return l;
  }
  return std::nullopt;
}

void Triangulation::write(std::ostream& os) const {
  os << std::setprecision(17);
  os << num_vertices() << '\n';
  for (const cplx& v : vertices_) os << v.real() << ' ' << v.imag() << '\n';
  os << num_triangles() << '\n';
  for (const auto& t : triangles_) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Triangulation Triangulation::read(std::istream& is) {
  long nv = -1;
  if (!(is >> nv) || nv < 0) throw std::invalid_argument("mesh file: bad vertex count");
  std::vector<cplx> v(nv);
  for (long i = 0; i < nv; ++i) {
    double x, y;
    if (!(is >> x >> y)) throw std::invalid_argument("mesh file: truncated vertex list");
    v[i] = {x, y};
  }
  long nt = -1;
  if (!(is >> nt) || nt < 0) throw std::invalid_argument("mesh file: bad triangle count");
  std::vector<std::array<int, 3>> t(nt);
  for (long i = 0; i < nt; ++i)
    if (!(is >> t[i][0] >> t[i][1] >> t[i][2]))
      throw std::invalid_argument("mesh file: truncated triangle list");
  return Triangulation(std::move(v), std::move(t), {}, "file");
}

FanMesh fan_mesh(const Arc& arc, const Chord& chord, int target_triangles) {
  if (target_triangles < 8) throw std::invalid_argument("fan_mesh: target must be >= 8");
  const double wm = arc.omega_minus(), wp = arc.omega_plus();
  const double c = chord.c;
  // Make the innermost sectors roughly isotropic.
  double mean_radius = 0.0;
  for (int j = 0; j < 64; ++j) mean_radius += std::abs(arc.point(wm + (j + 0.5) * (wp - wm) / 64));
  mean_radius /= 64;
  const int n0 = std::max(2, static_cast<int>(std::lround(arc.length() / mean_radius)));
  const int nr = std::max(1, static_cast<int>(std::lround(std::sqrt(double(target_triangles) / n0))));
  const int n_out = nr * n0;
  const int K = arc.size();
  if (K < n_out)
    throw std::invalid_argument("fan_mesh: " + std::to_string(K) + " arc samples cannot host " +
                                std::to_string(n_out) + " outer intervals");
  const bool snap_chord = chord.N > 2 * nr;
  const double h = arc.cell_width();

  FanMesh out;
  out.n0 = n0;
  out.rings = nr;
  std::vector<cplx> verts;
  std::vector<VertexKind> kinds;
  std::vector<double> param;
  std::vector<int> sample;
  std::vector<std::vector<int>> ring_ids(nr + 1);
  std::vector<std::vector<double>> ring_w(nr + 1);

  auto add = [&](cplx z, VertexKind k, double p, int s) {
    verts.push_back(z);
    kinds.push_back(k);
    param.push_back(p);
    sample.push_back(s);
    return static_cast<int>(verts.size()) - 1;
  };
  auto snap_x = [&](double x) {
    if (!snap_chord) return x;
    const int n = std::clamp(static_cast<int>(std::floor((x + c) / chord.dx())), 0, chord.N - 1);
    return chord.node(n);
  };

  ring_ids[0] = {add(0.0, VertexKind::Chord, 0.0, -1)};
  ring_w[0] = {0.5 * (wm + wp)};
  for (int i = 1; i <= nr; ++i) {
    const double rho = double(i) / nr;
    const int ni = i * n0;
    for (int j = 0; j <= ni; ++j) {
      double w = wm + j * (wp - wm) / ni;
      int id;
      if (j == 0 || j == ni) {
        double x = (j == 0 ? 1.0 : -1.0) * rho * c;
        if (i < nr) x = snap_x(x);
        id = add(cplx(x, 0.0), VertexKind::Chord, x, -1);
      } else if (i == nr) {
        const int k = std::clamp(static_cast<int>(std::lround((w - wm) / h - 0.5)), 0, K - 1);
        w = arc.params()[k];
        id = add(arc.points()[k], VertexKind::Arc, w, k);
      } else {
        id = add(rho * arc.point(w), VertexKind::Interior, 0.0, -1);
      }
      ring_ids[i].push_back(id);
      ring_w[i].push_back(w);
    }
  }
  // Snapped outer samples must stay strictly increasing.
  for (std::size_t j = 1; j < ring_w[nr].size(); ++j)
    if (!(ring_w[nr][j] > ring_w[nr][j - 1]))
      throw std::invalid_argument("fan_mesh: outer ring collapsed while snapping to samples");

  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(n0) * nr * nr);
  for (int i = 1; i <= nr; ++i) {
    const auto& A = ring_ids[i - 1];
    const auto& B = ring_ids[i];
    const auto& wa = ring_w[i - 1];
    const auto& wb = ring_w[i];
    const int p = static_cast<int>(A.size()) - 1, q = static_cast<int>(B.size()) - 1;
    int ia = 0, ib = 0;
    while (ia < p || ib < q) {
      const bool step_b = (ia == p) || (ib < q && wb[ib + 1] <= wa[ia + 1]);
      if (step_b) {
        tris.push_back({A[ia], B[ib], B[ib + 1]});
        ++ib;
      } else {
        tris.push_back({A[ia], B[ib], A[ia + 1]});
        ++ia;
      }
    }
  }

  // Boundary loop: +c corner, arc vertices, -c corner, chord back to +c.
  const auto& outer = ring_ids[nr];
  for (int id : outer) out.boundary_loop.push_back(id);
  for (int i = nr - 1; i >= 1; --i) out.boundary_loop.push_back(ring_ids[i].back());
  out.boundary_loop.push_back(ring_ids[0][0]);
  for (int i = 1; i < nr; ++i) out.boundary_loop.push_back(ring_ids[i].front());

  double area = 0.0;
  const auto& bl = out.boundary_loop;
  for (std::size_t j = 0; j < bl.size(); ++j) {
    const cplx a = verts[bl[j]], b = verts[bl[(j + 1) % bl.size()]];
    area += 0.5 * (a.real() * b.imag() - b.real() * a.imag());
  }
  out.polygon_area = area;
  out.boundary_param = std::move(param);
  out.arc_sample = std::move(sample);
  out.tri = Triangulation(std::move(verts), std::move(tris), std::move(kinds), "chord-fan");
  return out;
}

namespace {

cplx concentric(double a, double b) {
  if (a == 0.0 && b == 0.0) return 0.0;
  double r, phi;
  if (std::abs(a) > std::abs(b)) {
    r = a;
    phi = (kPi / 4.0) * (b / a);
  } else {
    r = b;
    phi = kPi / 2.0 - (kPi / 4.0) * (a / b);
  }
  return std::polar(r, phi);
}

double min_angle(cplx a, cplx b, cplx c) {
  auto ang = [](cplx p, cplx q, cplx r) { return std::abs(std::arg((q - p) / (r - p))); };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

}  // namespace

Triangulation disk_mesh(const Disk& disk, int target_triangles) {
  if (target_triangles < 2) throw std::invalid_argument("disk_mesh: target too small");
  const int n = std::max(1, static_cast<int>(std::lround(std::sqrt(target_triangles / 2.0))));
  std::vector<cplx> v;
  std::vector<VertexKind> kinds;
  v.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double a = -1.0 + 2.0 * i / n, b = -1.0 + 2.0 * j / n;
      v.push_back(disk.center + disk.radius * concentric(a, b));
      kinds.push_back((i == 0 || j == 0 || i == n || j == n) ? VertexKind::Boundary
                                                             : VertexKind::Interior);
    }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> t;
  t.reserve(2 * static_cast<std::size_t>(n) * n);
  auto push = [&](int p, int q, int r) {
    if (signed_area(v[p], v[q], v[r]) < 0) std::swap(q, r);
    t.push_back({p, q, r});
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int p00 = id(i, j), p10 = id(i + 1, j), p01 = id(i, j + 1), p11 = id(i + 1, j + 1);
      const double q1 = std::min(min_angle(v[p00], v[p10], v[p11]), min_angle(v[p00], v[p11], v[p01]));
      const double q2 = std::min(min_angle(v[p00], v[p10], v[p01]), min_angle(v[p10], v[p11], v[p01]));
      if (q1 >= q2) {
        push(p00, p10, p11);
        push(p00, p11, p01);
      } else {
        push(p00, p10, p01);
        push(p10, p11, p01);
      }
    }
  return Triangulation(std::move(v), std::move(t), std::move(kinds), "concentric-grid");
}

}  // namespace arcrte::geometry
