#include "arcrte/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace arcrte::harness {

using transforms::Circle;
using transforms::PiecewiseConstantField;
using transforms::Rect;
using transforms::Region;

const Region& Phantom::region(const std::string& n) const {
  for (const auto& inc : inclusions)
    if (inc.name == n) return inc.region;
  throw std::out_of_range("phantom has no region '" + n + "'");
}

namespace {

Region rotated(const Region& r, double angle) {
  // RigidMotion maps z -> e^{-i a} z, so pass -angle to rotate by +angle.
  return transforms::transformed(r, geometry::RigidMotion{-angle, 0.0});
}

}  // namespace

Phantom standard_phantom(double rotation) {
  const geometry::Disk dom{0.0, 1.0};
  const Region B1 = rotated(Circle{cplx(0.5, 0.0), 0.3}, rotation);
  const Region B2 = rotated(Circle{cplx(-0.25, std::sqrt(3.0) / 4.0), 0.2}, rotation);
  const Region B3 = rotated(Circle{cplx(0.0, -0.6), 0.3}, rotation);
  const Region R = rotated(Rect::from_bounds(-0.25, 0.5, -0.15, 0.15), rotation);

  Phantom p;
  p.name = "standard";
  p.inclusions = {{"B1", B1}, {"B2", B2}, {"B3", B3}, {"R", R}};
  p.medium.domain = dom;
  p.medium.mu_a = PiecewiseConstantField(dom, 0.1, {{B1, 2.0}, {B2, 1.0}});
  p.medium.mu_s = PiecewiseConstantField(dom, 3.0);
  p.medium.g = 0.5;
  p.source = PiecewiseConstantField(dom, 0.0, {{R, 2.0}, {B2, 1.0}, {B3, 1.0}});
  p.phase = rotation;
  return p;
}

Phantom zero_phantom(double rotation) {
  Phantom p = standard_phantom(rotation);
  p.name = "zero";
  p.source = PiecewiseConstantField(p.medium.domain, 0.0);
  return p;
}

Phantom make_phantom(const std::string& name, double rotation) {
  if (name == "standard") return standard_phantom(rotation);
  if (name == "zero") return zero_phantom(rotation);
  throw ConfigError("unknown phantom '" + name + "'");
}

Section standard_section(double rotation) {
  return {0.0, std::polar(1.0, 2.0 * kPi / 3.0 + rotation)};
}

std::vector<SectionWindow> standard_windows() {
  // Along t e^{2 pi i/3}: R holds while t sin(120 deg) < 0.15, B2 spans t in
  // [0.3, 0.7] (centre at t = 0.5, radius 0.2).
  const double tR = 0.15 / std::sin(2.0 * kPi / 3.0);
  return {{"R", 0.25 * tR, 0.75 * tR, 2.0}, {"B2", 0.4, 0.6, 1.0}};
}

}  // namespace arcrte::harness
