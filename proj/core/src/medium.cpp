#include "arcrte/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arcrte::transforms {

namespace {

bool rect_contains(const Rect& r, cplx z) {
  const cplx w = std::polar(1.0, -r.angle) * (z - r.center);
  return std::abs(w.real()) < r.hx && std::abs(w.imag()) < r.hy;
}

double clip(double a, double b, double t0, double t1) {
  return std::max(0.0, std::min(b, t1) - std::max(a, t0));
}

}  // namespace

bool contains(const Region& r, cplx z) {
  if (const auto* c = std::get_if<Circle>(&r)) return std::abs(z - c->center) < c->radius;
  return rect_contains(std::get<Rect>(r), z);
}

double chord_length(const Region& r, cplx z0, cplx d, double t0, double t1) {
  if (const auto* c = std::get_if<Circle>(&r)) {
    const cplx w = z0 - c->center;
    const cplx wd = std::conj(d) * w;
    const double b = wd.real();
    // Distance of the line from the centre; avoids cancellation near tangency.
    const double p = std::abs(wd.imag());
    const double disc = (c->radius - p) * (c->radius + p);
    if (disc <= 0.0) return 0.0;
    const double s = std::sqrt(disc);
    return clip(-b - s, -b + s, t0, t1);
  }
  const Rect& q = std::get<Rect>(r);
  const cplx rot = std::polar(1.0, -q.angle);
  const cplx w = rot * (z0 - q.center);
  const cplx e = rot * d;
  double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
  const double p[2] = {w.real(), w.imag()}, v[2] = {e.real(), e.imag()}, h[2] = {q.hx, q.hy};
  for (int a = 0; a < 2; ++a) {
    if (std::abs(v[a]) < 1e-300) {
      if (std::abs(p[a]) >= h[a]) return 0.0;
      continue;
    }
    double ta = (-h[a] - p[a]) / v[a], tb = (h[a] - p[a]) / v[a];
    if (ta > tb) std::swap(ta, tb);
    lo = std::max(lo, ta);
    hi = std::min(hi, tb);
  }
  if (!(hi > lo)) return 0.0;
  return clip(lo, hi, t0, t1);
}

Region transformed(const Region& r, const geometry::RigidMotion& m) {
  if (const auto* c = std::get_if<Circle>(&r)) return Circle{m.apply(c->center), c->radius};
  Rect q = std::get<Rect>(r);
  q.center = m.apply(q.center);
  q.angle -= m.angle;
  return q;
}

double coverage(const Region& r, cplx a, cplx b, cplx c, int level) {
  int hit = 0, total = 0;
  // Centroids of the level^2 congruent sub-triangles.
  for (int i = 0; i < level; ++i)
    for (int j = 0; j < level - i; ++j) {
      const double u = (i + 1.0 / 3.0) / level, v = (j + 1.0 / 3.0) / level;
      hit += contains(r, a + u * (b - a) + v * (c - a));
      ++total;
      if (i + j < level - 1) {
        const double u2 = (i + 2.0 / 3.0) / level, v2 = (j + 2.0 / 3.0) / level;
        hit += contains(r, a + u2 * (b - a) + v2 * (c - a));
        ++total;
      }
    }
  return double(hit) / total;
}

PiecewiseConstantField::PiecewiseConstantField(geometry::Disk domain, double background,
                                               std::vector<Piece> pieces)
    : domain_(domain), background_(background), pieces_(std::move(pieces)) {}

double PiecewiseConstantField::operator()(cplx z) const {
  if (!domain_.contains(z)) return 0.0;
  for (const auto& p : pieces_)
    if (contains(p.region, z)) return p.value;
  return background_;
}

double PiecewiseConstantField::line_integral(cplx z0, cplx d, double t0, double t1) const {
  double s = background_ * chord_length(Circle{domain_.center, domain_.radius}, z0, d, t0, t1);
  for (const auto& p : pieces_) {
    const double delta = p.value - background_;
    if (delta != 0.0) s += delta * chord_length(p.region, z0, d, t0, t1);
  }
  return s;
}

double PiecewiseConstantField::radon_integral(double s, double theta) const {
  const cplx xi = std::polar(1.0, theta);
  const double inf = std::numeric_limits<double>::infinity();
  // Circles use their offset from the line directly, so tangency is exact.
  auto circle_len = [&](cplx center, double r) {
    const double p = std::abs(s - (std::conj(xi) * center).real());
    return p < r ? 2.0 * std::sqrt((r - p) * (r + p)) : 0.0;
  };
  double v = background_ * circle_len(domain_.center, domain_.radius);
  for (const auto& p : pieces_) {
    const double delta = p.value - background_;
    if (delta == 0.0) continue;
    if (const auto* c = std::get_if<Circle>(&p.region))
      v += delta * circle_len(c->center, c->radius);
    else
      v += delta * chord_length(p.region, s * xi, kI * xi, -inf, inf);
  }
  return v;
}

double PiecewiseConstantField::triangle_average(cplx a, cplx b, cplx c, int level) const {
  double s = background_;
  for (const auto& p : pieces_) {
    const double delta = p.value - background_;
    if (delta != 0.0) s += delta * coverage(p.region, a, b, c, level);
  }
  return s;
}

bool PiecewiseConstantField::is_zero() const {
  if (background_ != 0.0) return false;
  for (const auto& p : pieces_)
    if (p.value != 0.0) return false;
  return true;
}

PiecewiseConstantField PiecewiseConstantField::transformed(const geometry::RigidMotion& m) const {
  std::vector<Piece> pcs;
  for (const auto& p : pieces_) pcs.push_back({arcrte::transforms::transformed(p.region, m), p.value});
  return PiecewiseConstantField(domain_.transformed(m), background_, std::move(pcs));
}

PiecewiseConstantField PiecewiseConstantField::scaled(double s) const {
  std::vector<Piece> pcs = pieces_;
  for (auto& p : pcs) p.value *= s;
  return PiecewiseConstantField(domain_, background_ * s, std::move(pcs));
}

double MediumModel::p_mode(int m) const {
  return std::pow(g, std::abs(m)) / (2.0 * kPi);
}

double MediumModel::phase_function(double cos_angle) const {
  return (1.0 - g * g) / (2.0 * kPi * (1.0 - 2.0 * g * cos_angle + g * g));
}

MediumModel MediumModel::transformed(const geometry::RigidMotion& m) const {
  return {domain.transformed(m), mu_a.transformed(m), mu_s.transformed(m), g};
}

}  // namespace arcrte::transforms
