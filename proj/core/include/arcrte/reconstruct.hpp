#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcrte/csie.hpp"
#include "arcrte/forward.hpp"
#include "arcrte/geometry.hpp"
#include "arcrte/medium.hpp"
#include "arcrte/mesh.hpp"
#include "arcrte/transforms.hpp"

namespace arcrte::reconstruct {

enum class Location { Arc, Chord, Interior };

/// Complex modes of a field at a set of nodes: values(node, j) is mode
/// -(m_lo + j). Positive modes follow from I_m = conj(I_{-m}).
struct ModeTrace {
  Location location = Location::Arc;
  int m_lo = 0;
  int m_hi = -1;
  Eigen::MatrixXcd values;

  ModeTrace() = default;
  ModeTrace(Location loc, int lo, int hi, Eigen::Index nodes)
      : location(loc), m_lo(lo), m_hi(hi), values(Eigen::MatrixXcd::Zero(nodes, hi - lo + 1)) {}

  int modes() const { return m_hi - m_lo + 1; }
  Eigen::Index nodes() const { return values.rows(); }
  bool has(int m) const { return m >= m_lo && m <= m_hi; }
  auto mode(int m) { return values.col(m - m_lo); }
  auto mode(int m) const { return values.col(m - m_lo); }
};

/// Continuous piecewise-linear complex field; per triangle
/// f = a x1 + b x2 + c.
class P1Field {
 public:
  P1Field() = default;
  P1Field(const geometry::Triangulation& tri, Eigen::VectorXcd vertex_values);

  const Eigen::VectorXcd& values() const { return v_; }
  const Eigen::VectorXcd& a() const { return a_; }
  const Eigen::VectorXcd& b() const { return b_; }
  const Eigen::VectorXcd& c() const { return c_; }
  /// Value at the centroid of triangle l.
  cplx at_centroid(int l) const { return centroid_(l); }
  /// (a - i b) / 2 on triangle l.
  cplx del(int l) const { return 0.5 * (a_(l) - kI * b_(l)); }

 private:
  Eigen::VectorXcd v_, a_, b_, c_, centroid_;
};

struct SourceField {
  Eigen::VectorXd re;
  Eigen::VectorXd im;
  // Area-weighted L2 norms over the triangles not excluded as near-contour.
  double re_norm = 0.0;
  double im_norm = 0.0;
  // Same norms over every triangle.
  double re_norm_all = 0.0;
  double im_norm_all = 0.0;
  int negative = 0;  // triangles with q < 0, flagged not clamped
};

/// Per-sample DFT of the measurement, modes 0..S. Rotates mode -m by
/// e^{-i m phi} into the normalized frame.
ModeTrace boundary_modes(const forward::BoundaryMeasurement& meas, int S, double rotation = 0.0);

/// J_{-m,k} = sum_{s=0}^{S-m} alpha_{s,k} I_{-m-s,k}, m = M..S.
ModeTrace alpha_convolve(const ModeTrace& I, const Eigen::MatrixXcd& alpha, int M, int S);

/// Discrete P^- for modes m_lo..m_hi at arbitrary points (rows) from the arc
/// trace J (modes up to S available).
Eigen::MatrixXcd p_minus(const ModeTrace& J, const geometry::Arc& arc,
                         const std::vector<cplx>& pts, int m_lo, int m_hi, int S);

/// Right-hand sides 2 P^-(x_n) (or their cell averages) for m = M..S-2.
Eigen::MatrixXcd chord_rhs(const ModeTrace& J, const geometry::Arc& arc, const geometry::Chord& chord,
                           int M, int S, csie::RhsMode rhs = csie::RhsMode::Midpoint);

/// Solves (E - iH) J^C = 2 P^-(x_n) for m = M..S-2 against one factorization.
ModeTrace solve_chord_modes(const ModeTrace& J, const geometry::Arc& arc,
                            const csie::CsieSystem& sys, int M, int S,
                            csie::RhsMode rhs = csie::RhsMode::Midpoint);

/// Interior values of the L2-analytic sequence from its traces on the arc
/// and the chord, m = M..S-2.
ModeTrace interior_J(const ModeTrace& J_arc, const ModeTrace& J_chord, const geometry::Arc& arc,
                     const geometry::Chord& chord, const std::vector<cplx>& pts, int M, int S);

/// I_{-order} = sum_s beta_s J_{-order-s}, s <= S - order - 2.
Eigen::VectorXcd beta_deconvolve(const ModeTrace& J, const Eigen::MatrixXcd& beta, int order,
                                 int M, int S);

/// Data-aligned quantities for the least-squares boundary fit.
class BoundaryFit {
 public:
  BoundaryFit(const geometry::FanMesh& mesh, const geometry::Arc& arc, const geometry::Chord& chord);
  /// Hat-basis coefficients over mesh.boundary_loop minimizing the L2 misfit
  /// against piecewise-constant arc-cell and chord-cell data.
  Eigen::VectorXcd fit(const Eigen::VectorXcd& arc_data, const Eigen::VectorXcd& chord_data) const;
  /// Squared L2 misfit of given loop coefficients.
  double misfit(const Eigen::VectorXcd& coef, const Eigen::VectorXcd& arc_data,
                const Eigen::VectorXcd& chord_data) const;
  const std::vector<int>& loop() const { return loop_; }

 private:
  struct Seg {
    int a, b;       // positions in the loop
    double pa, pb;  // parameter (w or x) at the ends
    double scale;   // ds / dparam
    bool arc;
  };
  void loads(const Eigen::VectorXcd& arc_data, const Eigen::VectorXcd& chord_data,
             Eigen::VectorXcd& rhs, double* dd) const;

  std::vector<int> loop_;
  std::vector<Seg> segs_;
  std::vector<double> arc_edges_, chord_edges_;
  Eigen::MatrixXd G_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

/// Kernel matrices of the discrete Cauchy-Pompeiu formula at fixed points:
/// area(p, l) = -|tau_l| / (pi (r_l - z_p)),
/// arc(p, k) = zeta'_k dw_k / (2 pi i (zeta_k - z_p)),
/// chord(p, n) = dx / (2 pi i (x_n - z_p)).
struct PompeiuKernels {
  Eigen::MatrixXcd area, arc, chord;

  PompeiuKernels() = default;
  PompeiuKernels(const geometry::Triangulation& tri, const geometry::Arc& arc,
                 const geometry::Chord& chord, const std::vector<cplx>& pts, bool with_chord = true);
  /// Area plus boundary terms; omits the chord term when it was not built.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& f, const Eigen::VectorXcd& arc_data,
                         const Eigen::VectorXcd& chord_data) const;
};

/// Discrete Cauchy-Pompeiu evaluation at points: area term over triangles
/// with density f at centroids, plus arc and chord boundary terms.
Eigen::VectorXcd cauchy_pompeiu(const geometry::Triangulation& tri, const Eigen::VectorXcd& f,
                                const geometry::Arc& arc, const Eigen::VectorXcd& arc_data,
                                const geometry::Chord& chord, const Eigen::VectorXcd& chord_data,
                                const std::vector<cplx>& pts);

/// q = Re a + Im b + (mu_t - 2 pi mu_s p_0) Re I_0 at centroids; the
/// imaginary residual is Im a - Re b + (mu_t - 2 pi mu_s p_0) Im I_0, the
/// imaginary part of 2 dI_{-1} + (mu_t - 2 pi mu_s p_0) I_0.
/// `exclude` (per triangle, optional) drops triangles from re_norm / im_norm.
SourceField assemble_source(const P1Field& I0, const P1Field& Im1, const transforms::MediumModel& medium,
                            const geometry::Triangulation& tri, const std::vector<bool>* exclude = nullptr);

/// Smallest S with max |alpha_m|, max |beta_m| below threshold for every
/// tabulated m >= S, clamped to >= M + 3.
int select_S(const Eigen::MatrixXcd& alpha, const Eigen::MatrixXcd& beta, double threshold, int M);

/// Argmin of values, ties to the first (smallest M).
int argmin_first(const std::vector<double>& values);

}  // namespace arcrte::reconstruct
