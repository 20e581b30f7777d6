#pragma once

#include <variant>
#include <vector>

#include "arcrte/geometry.hpp"

namespace arcrte::transforms {

struct Circle {
  cplx center{0.0, 0.0};
  double radius = 0.0;
};

/// Rectangle with half-widths (hx, hy) in its own frame, rotated by `angle`.
struct Rect {
  cplx center{0.0, 0.0};
  double hx = 0.0, hy = 0.0;
  double angle = 0.0;

  static Rect from_bounds(double x0, double x1, double y0, double y1) {
    return {cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1)), 0.5 * (x1 - x0), 0.5 * (y1 - y0), 0.0};
  }
};

using Region = std::variant<Circle, Rect>;

bool contains(const Region& r, cplx z);
/// Length of {z0 + t d : t0 <= t <= t1} inside the region; |d| = 1.
double chord_length(const Region& r, cplx z0, cplx d, double t0, double t1);
/// Region carried by a rigid motion.
Region transformed(const Region& r, const geometry::RigidMotion& m);
/// Fraction of the triangle (a, b, c) covered by the region, estimated on a
/// fixed barycentric lattice of `level`^2 sub-triangles.
double coverage(const Region& r, cplx a, cplx b, cplx c, int level = 8);

/// Background value on the domain, replaced by a constant value on each of
/// a set of disjoint regions inside it. Vanishes outside the domain.
class PiecewiseConstantField {
 public:
  struct Piece {
    Region region;
    double value;
  };

  PiecewiseConstantField() = default;
  PiecewiseConstantField(geometry::Disk domain, double background, std::vector<Piece> pieces = {});

  double operator()(cplx z) const;
  /// Integral along z0 + t d for t in [t0, t1], exact for the primitives.
  double line_integral(cplx z0, cplx d, double t0, double t1) const;
  /// Integral over the full line {z : z . xi(theta) = s}.
  double radon_integral(double s, double theta) const;
  /// Cell average over a triangle (lattice quadrature).
  double triangle_average(cplx a, cplx b, cplx c, int level = 8) const;

  double background() const { return background_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const geometry::Disk& domain() const { return domain_; }
  bool is_zero() const;
  PiecewiseConstantField transformed(const geometry::RigidMotion& m) const;
  PiecewiseConstantField scaled(double s) const;

 private:
  geometry::Disk domain_;
  double background_ = 0.0;
  std::vector<Piece> pieces_;
};

/// Known medium: absorption, scattering, and a Henyey-Greenstein (Poisson)
/// kernel with p_m = g^|m| / (2 pi).
struct MediumModel {
  geometry::Disk domain;
  PiecewiseConstantField mu_a;
  PiecewiseConstantField mu_s;
  double g = 0.0;

  double mu_t(cplx z) const { return mu_a(z) + mu_s(z); }
  double mu_t_line(cplx z0, cplx d, double t0, double t1) const {
    return mu_a.line_integral(z0, d, t0, t1) + mu_s.line_integral(z0, d, t0, t1);
  }
  double mu_t_radon(double s, double theta) const {
    return mu_a.radon_integral(s, theta) + mu_s.radon_integral(s, theta);
  }
  /// Fourier coefficient p_m of the phase function in the angle difference.
  double p_mode(int m) const;
  /// Phase function p(cos) as a density on the circle.
  double phase_function(double cos_angle) const;
  MediumModel transformed(const geometry::RigidMotion& m) const;
};

}  // namespace arcrte::transforms
