#include "arcrte/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace arcrte::geometry {

Arc::Arc(Disk disk, double omega_minus, double omega_plus, int samples, double phase)
    : disk_(disk), wm_(omega_minus), wp_(omega_plus), phase_(phase) {
  if (!(disk.radius > 0.0)) throw std::invalid_argument("arc: disk radius must be positive");
  if (samples < 1) throw std::invalid_argument("arc: need at least one sample");
  const double span = wp_ - wm_;
  if (!(span > 1e-12)) throw std::invalid_argument("arc: degenerate parameter range");
  if (span >= 2.0 * kPi - 1e-12)
    throw std::invalid_argument("arc: must be a strict sub-arc of the boundary");
  const double h = span / samples;
  params_.resize(samples);
  weights_.assign(samples, h);
  points_.resize(samples);
  derivs_.resize(samples);
  for (int k = 0; k < samples; ++k) {
    params_[k] = wm_ + (k + 0.5) * h;
    points_[k] = point(params_[k]);
    derivs_[k] = derivative(params_[k]);
  }
}

cplx Arc::point(double w) const {
  return disk_.center + disk_.radius * std::polar(1.0, w + phase_);
}

cplx Arc::derivative(double w) const {
  return kI * disk_.radius * std::polar(1.0, w + phase_);
}

cplx Arc::normal(double w) const { return std::polar(1.0, w + phase_); }

std::vector<double> Arc::cell_edges() const {
  const int K = size();
  std::vector<double> e(K + 1);
  for (int k = 0; k <= K; ++k) e[k] = wm_ + k * (wp_ - wm_) / K;
  e[K] = wp_;
  return e;
}

Arc Arc::transformed(const RigidMotion& m) const {
  return Arc(disk_.transformed(m), wm_, wp_, size(), phase_ - m.angle);
}

Chord::Chord(double half_length, int nodes) : c(half_length), N(nodes) {
  if (!(half_length > 0.0)) throw std::invalid_argument("chord: half-length must be positive");
  if (nodes < 1) throw std::invalid_argument("chord: need at least one node");
}

std::vector<double> Chord::nodes() const {
  std::vector<double> x(N);
  for (int n = 0; n < N; ++n) x[n] = node(n);
  return x;
}

NormalizedGeometry normalize(const Disk& disk, const Arc& arc, int chord_nodes) {
  const cplx pm = arc.point(arc.omega_minus());
  const cplx pp = arc.point(arc.omega_plus());
  if (std::abs(pm - pp) <= 1e-12 * disk.radius)
    throw std::invalid_argument("normalize: arc endpoints coincide");
  RigidMotion motion;
  motion.origin = 0.5 * (pm + pp);
  motion.angle = std::arg(pm - motion.origin);
  const double c = std::abs(pm - motion.origin);
  return {motion, disk.transformed(motion), arc.transformed(motion), Chord(c, chord_nodes)};
}

}  // namespace arcrte::geometry
