#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "arcrte/medium.hpp"

namespace arcrte::transforms {

/// Unit direction xi(theta).
inline cplx direction(double theta) { return std::polar(1.0, theta); }

/// Integral of mu_t from z along xi(theta) to infinity.
double divergent_beam(const MediumModel& medium, cplx z, double theta);

/// Integral of mu_t over the line {s xi(theta) + t xi_perp(theta)}.
double radon(const MediumModel& medium, double s, double theta);

/// Radon profile s -> R(s, theta) sampled on midpoint nodes of [-L, L], with
/// L = |domain center| + radius, for Hilbert evaluation by log extraction.
class RadonProfile {
 public:
  RadonProfile(const MediumModel& medium, double theta, int nodes);

  double radon_at(double s) const;
  /// (1/pi) pv int R(t) / (s - t) dt.
  double hilbert(double s) const;
  double half_width() const { return L_; }

 private:
  const MediumModel* medium_;
  double theta_, L_, dt_;
  std::vector<double> t_, f_;
};

/// Hilbert transform in s of the Radon data at direction theta.
double hilbert_of_radon(const MediumModel& medium, double s, double theta, int quad_nodes);

/// h(z, theta) = D(z, xi) - (1/2)(I - iH) R(z . xi_perp, xi_perp).
cplx h_factor(const MediumModel& medium, cplx z, double theta, int quad_nodes);

/// Row p, column m: coefficient of e^{i m theta} of exp(sign * h(z_p, .)),
/// from T equispaced angles, m = 0..max_mode.
Eigen::MatrixXcd integrating_factor_modes(const MediumModel& medium, const std::vector<cplx>& pts,
                                          int T, int max_mode, int sign, int quad_nodes);

/// alpha at arc samples (modes 0..S), beta at mesh vertices and chord nodes
/// (modes 0..S-M-2).
struct IntegratingFactorTable {
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd beta;
  Eigen::MatrixXcd beta_chord;
};

/// Requires T >= 2S and S >= M + 3.
IntegratingFactorTable alpha_beta_tables(const MediumModel& medium, const std::vector<cplx>& arc_pts,
                                         const std::vector<cplx>& vertices,
                                         const std::vector<cplx>& chord_pts, int T, int S, int M,
                                         int quad_nodes = 100);

/// Max over rows of |table(:, m)| for each column m.
std::vector<double> column_max_abs(const Eigen::MatrixXcd& table);

/// CSV rows "point,mode,re,im".
void write_table_csv(std::ostream& os, const Eigen::MatrixXcd& table);

}  // namespace arcrte::transforms
