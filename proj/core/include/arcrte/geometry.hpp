#pragma once

#include <vector>

#include "arcrte/common.hpp"

namespace arcrte::geometry {

/// z -> e^{-i angle} (z - origin).
struct RigidMotion {
  double angle = 0.0;
  cplx origin{0.0, 0.0};

  cplx apply(cplx z) const { return std::polar(1.0, -angle) * (z - origin); }
  cplx inverse(cplx w) const { return std::polar(1.0, angle) * w + origin; }
  cplx rotate(cplx d) const { return std::polar(1.0, -angle) * d; }
};

struct Disk {
  cplx center{0.0, 0.0};
  double radius = 1.0;

  bool contains(cplx z, double tol = 0.0) const {
    return std::abs(z - center) <= radius + tol;
  }
  Disk transformed(const RigidMotion& m) const { return {m.apply(center), radius}; }
};

/// Circular arc zeta(w) = center + R e^{i(w + phase)}, w in [w_minus, w_plus],
/// traversed counter-clockwise. Samples are midpoints of K equal cells.
class Arc {
 public:
  Arc(Disk disk, double omega_minus, double omega_plus, int samples, double phase = 0.0);

  cplx point(double w) const;
  cplx derivative(double w) const;
  /// Outward unit normal of the disk at zeta(w).
  cplx normal(double w) const;

  int size() const { return static_cast<int>(params_.size()); }
  const Disk& disk() const { return disk_; }
  double omega_minus() const { return wm_; }
  double omega_plus() const { return wp_; }
  double phase() const { return phase_; }
  double cell_width() const { return (wp_ - wm_) / size(); }

  const std::vector<double>& params() const { return params_; }
  const std::vector<cplx>& points() const { return points_; }
  const std::vector<cplx>& derivatives() const { return derivs_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Cell boundaries w_0 = w_minus < w_1 < ... < w_K = w_plus.
  std::vector<double> cell_edges() const;

  double length() const { return disk_.radius * (wp_ - wm_); }

  Arc transformed(const RigidMotion& m) const;

 private:
  Disk disk_;
  double wm_, wp_, phase_;
  std::vector<double> params_, weights_;
  std::vector<cplx> points_, derivs_;
};

/// Nodes x_n = -c + (n + 1/2) dx, n = 0..N-1.
struct Chord {
  double c = 1.0;
  int N = 1;

  Chord() = default;
  Chord(double half_length, int nodes);

  double dx() const { return 2.0 * c / N; }
  double node(int n) const { return -c + (n + 0.5) * dx(); }
  std::vector<double> nodes() const;
};

/// Geometry mapped so that the chord of the arc is (-c, c) and the arc lies
/// in the upper half-plane. `motion` maps original to normalized coordinates.
struct NormalizedGeometry {
  RigidMotion motion;
  Disk disk;
  Arc arc;
  Chord chord;
};

NormalizedGeometry normalize(const Disk& disk, const Arc& arc, int chord_nodes);

}  // namespace arcrte::geometry
