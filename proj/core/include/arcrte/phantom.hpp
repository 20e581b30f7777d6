#pragma once

#include <string>
#include <vector>

#include "arcrte/geometry.hpp"
#include "arcrte/medium.hpp"

namespace arcrte::harness {

/// Named region with the values it carries in each field.
struct Inclusion {
  std::string name;
  transforms::Region region;
};

struct Phantom {
  std::string name;
  transforms::MediumModel medium;
  transforms::PiecewiseConstantField source;
  std::vector<Inclusion> inclusions;
  /// Measurement arc parameters on the domain circle.
  double omega_minus = 0.0, omega_plus = kPi, phase = 0.0;

  geometry::Arc arc(int K) const {
    return geometry::Arc(medium.domain, omega_minus, omega_plus, K, phase);
  }
  const transforms::Region& region(const std::string& name) const;
};

/// Unit-disk phantom with three disks B1..B3 and a rectangle R, measured on
/// the upper half circle. `rotation` turns the whole setup about the origin.
Phantom standard_phantom(double rotation = 0.0);
/// Same medium with q = 0.
Phantom zero_phantom(double rotation = 0.0);
/// "standard" or "zero".
Phantom make_phantom(const std::string& name, double rotation = 0.0);

/// Segment from the origin at 120 degrees through R and B2, in the frame of
/// the unrotated phantom: z(t) = t e^{2 pi i / 3}, t in [0, 1].
struct Section {
  cplx a, b;
  cplx at(double t) const { return a + t * (b - a); }
};
Section standard_section(double rotation = 0.0);

/// Parameter windows on the section covering the middle half of its overlap
/// with R and with B2.
struct SectionWindow {
  std::string name;
  double t0, t1;
  double expected;
};
std::vector<SectionWindow> standard_windows();

}  // namespace arcrte::harness
