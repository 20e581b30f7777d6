#include "arcrte/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace arcrte::transforms {

double divergent_beam(const MediumModel& medium, cplx z, double theta) {
  return medium.mu_t_line(z, direction(theta), 0.0, std::numeric_limits<double>::infinity());
}

double radon(const MediumModel& medium, double s, double theta) {
  return medium.mu_t_radon(s, theta);
}

RadonProfile::RadonProfile(const MediumModel& medium, double theta, int nodes)
    : medium_(&medium), theta_(theta) {
  if (nodes < 16) throw std::invalid_argument("hilbert: need at least 16 nodes");
  L_ = std::abs(medium.domain.center) + medium.domain.radius;
  dt_ = 2.0 * L_ / nodes;
  t_.resize(nodes);
  f_.resize(nodes);
  for (int j = 0; j < nodes; ++j) {
    t_[j] = -L_ + (j + 0.5) * dt_;
    f_[j] = radon(medium, t_[j], theta);
  }
}

double RadonProfile::radon_at(double s) const { return radon(*medium_, s, theta_); }

double RadonProfile::hilbert(double s) const {
  const double fs = radon_at(s);
  const double tiny = 1e-9 * dt_;
  double sum = 0.0;
  int hit = -1;
  for (std::size_t j = 0; j < t_.size(); ++j) {
    const double d = s - t_[j];
    if (std::abs(d) < tiny) {
      hit = static_cast<int>(j);
      continue;
    }
    sum += (f_[j] - fs) / d;
  }
  if (hit >= 0) {
    const double h = 0.25 * dt_;
    sum -= (radon_at(s + h) - radon_at(s - h)) / (2.0 * h);
  }
  sum *= dt_;
  if (fs != 0.0 && std::abs(s) < L_) sum += fs * std::log((L_ + s) / (L_ - s));
  return sum / kPi;
}

double hilbert_of_radon(const MediumModel& medium, double s, double theta, int quad_nodes) {
  return RadonProfile(medium, theta, quad_nodes).hilbert(s);
}

namespace {

cplx h_with_profile(const MediumModel& medium, const RadonProfile& prof, cplx z, double theta) {
  const cplx perp = kI * direction(theta);
  const double s = (std::conj(perp) * z).real();
  const double D = divergent_beam(medium, z, theta);
  return D - 0.5 * cplx(prof.radon_at(s), -prof.hilbert(s));
}

}  // namespace

cplx h_factor(const MediumModel& medium, cplx z, double theta, int quad_nodes) {
  RadonProfile prof(medium, theta + kPi / 2.0, quad_nodes);
  return h_with_profile(medium, prof, z, theta);
}

Eigen::MatrixXcd integrating_factor_modes(const MediumModel& medium, const std::vector<cplx>& pts,
                                          int T, int max_mode, int sign, int quad_nodes) {
  if (T < 1) throw std::invalid_argument("integrating factor: T must be positive");
  if (max_mode >= T) throw std::invalid_argument("integrating factor: max_mode must be < T");
  const int P = static_cast<int>(pts.size());
  Eigen::MatrixXcd out(P, max_mode + 1);
  if (P == 0) return out;
  // buf(t, p): column per point so each FFT is contiguous.
  Eigen::MatrixXcd buf(T, P);
  const double sg = sign >= 0 ? 1.0 : -1.0;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < T; ++t) {
    const double theta = 2.0 * kPi * t / T;
    RadonProfile prof(medium, theta + kPi / 2.0, quad_nodes);
    for (int p = 0; p < P; ++p) buf(t, p) = std::exp(sg * h_with_profile(medium, prof, pts[p], theta));
  }
  Eigen::MatrixXcd spec(T, P);
  int n = T;
  fftw_plan plan;
#pragma omp critical(arcrte_fftw_plan)
  plan = fftw_plan_many_dft(1, &n, P, reinterpret_cast<fftw_complex*>(buf.data()), nullptr, 1, T,
                            reinterpret_cast<fftw_complex*>(spec.data()), nullptr, 1, T,
                            FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
#pragma omp critical(arcrte_fftw_plan)
  fftw_destroy_plan(plan);
  for (int p = 0; p < P; ++p)
    for (int m = 0; m <= max_mode; ++m) out(p, m) = spec(m, p) / double(T);
  return out;
}

IntegratingFactorTable alpha_beta_tables(const MediumModel& medium, const std::vector<cplx>& arc_pts,
                                         const std::vector<cplx>& vertices,
                                         const std::vector<cplx>& chord_pts, int T, int S, int M,
                                         int quad_nodes) {
  if (T < 2 * S) throw std::invalid_argument("tables: T < 2S aliases mode S");
  if (S < M + 3) throw std::invalid_argument("tables: need S >= M + 3");
  IntegratingFactorTable tab;
  tab.alpha = integrating_factor_modes(medium, arc_pts, T, S, -1, quad_nodes);
  const int nb = S - M - 2;
  tab.beta = integrating_factor_modes(medium, vertices, T, nb, +1, quad_nodes);
  tab.beta_chord = integrating_factor_modes(medium, chord_pts, T, nb, +1, quad_nodes);
  return tab;
}

std::vector<double> column_max_abs(const Eigen::MatrixXcd& table) {
  std::vector<double> out(table.cols(), 0.0);
  for (Eigen::Index m = 0; m < table.cols(); ++m)
    out[m] = table.rows() ? table.col(m).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

void write_table_csv(std::ostream& os, const Eigen::MatrixXcd& table) {
  os << "point,mode,re,im\n" << std::setprecision(17);
  for (Eigen::Index p = 0; p < table.rows(); ++p)
    for (Eigen::Index m = 0; m < table.cols(); ++m)
      os << p << ',' << m << ',' << table(p, m).real() << ',' << table(p, m).imag() << '\n';
}

}  // namespace arcrte::transforms
