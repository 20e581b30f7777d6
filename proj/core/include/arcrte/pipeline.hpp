#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "arcrte/csie.hpp"
#include "arcrte/forward.hpp"
#include "arcrte/geometry.hpp"
#include "arcrte/medium.hpp"
#include "arcrte/mesh.hpp"
#include "arcrte/reconstruct.hpp"
#include "arcrte/transforms.hpp"

namespace arcrte::pipeline {

struct ReconstructOptions {
  int N = 500;
  /// Truncation mode; <= 0 selects it from the table decay.
  int S = 175;
  int mesh_target = 8000;
  int hilbert_nodes = 100;
  csie::Variant variant = csie::Variant::CutOff;
  double epsilon = 0.0;
  csie::RhsMode rhs = csie::RhsMode::Midpoint;
  double s_threshold = 0.01;
  /// Smallest M the tables must support.
  int M_min = 1;
};

/// Wall-clock seconds per named stage, in execution order.
struct StageTimes {
  std::vector<std::pair<std::string, double>> entries;

  void add(const std::string& name, double seconds);
  double get(const std::string& name) const;
  /// Name of the most expensive stage, excluding one-off table setup.
  std::string largest(bool include_tables = false) const;
};

struct Reconstruction {
  int M = 0;
  int S = 0;
  reconstruct::SourceField q;
  reconstruct::P1Field I0, Im1;
  /// Chord traces I^C_{-m}, column m, for m = 0..M+1.
  Eigen::MatrixXcd chord_I;
  /// Shared chord traces J^C for modes m_lo..S-2.
  std::shared_ptr<const reconstruct::ModeTrace> chord_J;
  /// Interior vertices closer than two local mesh widths to the contour.
  int flagged = 0;
  StageTimes times;
};

class Reconstructor {
 public:
  /// `medium` and `arc` in physical coordinates; `arc.size()` must match the
  /// measurement's K and `T` its angle count.
  Reconstructor(const transforms::MediumModel& medium, const geometry::Arc& arc, int T,
                ReconstructOptions opts = {});

  Reconstruction run(const forward::BoundaryMeasurement& meas, int M);
  /// One reconstruction per M in [M_lo, M_hi], sharing the M-independent stages.
  std::vector<Reconstruction> run(const forward::BoundaryMeasurement& meas, int M_lo, int M_hi);

  int S() const { return S_; }
  int T() const { return T_; }
  const ReconstructOptions& options() const { return opts_; }
  const geometry::NormalizedGeometry& geometry() const { return geo_; }
  const geometry::FanMesh& mesh() const { return mesh_; }
  const transforms::MediumModel& medium() const { return medium_n_; }
  const transforms::IntegratingFactorTable& tables() const { return tab_; }
  const csie::CsieSystem& system() const { return sys_; }
  const std::vector<int>& interior_vertices() const { return interior_; }
  const std::vector<bool>& flagged_vertices() const { return flag_; }
  /// Triangles with a flagged vertex; excluded from the source norms.
  const std::vector<bool>& excluded_triangles() const { return exclude_; }
  double table_seconds() const { return table_seconds_; }
  /// Table decay curve max(|alpha_m|, |beta_m|) used for automatic S.
  const std::vector<double>& decay() const { return decay_; }

  /// Centroids in physical coordinates.
  std::vector<cplx> physical_centroids() const;
  /// Per-triangle value at a physical point, or NaN outside the mesh.
  double sample(const Eigen::VectorXd& per_triangle, cplx z_physical) const;

 private:
  void ensure_kernels();

  transforms::MediumModel medium_n_;
  geometry::NormalizedGeometry geo_;
  int T_;
  ReconstructOptions opts_;
  int S_ = 0;
  geometry::FanMesh mesh_;
  csie::CsieSystem sys_;
  transforms::IntegratingFactorTable tab_;
  Eigen::MatrixXcd beta_int_;
  std::vector<int> interior_;
  std::vector<bool> flag_, exclude_;
  std::vector<double> decay_;
  double table_seconds_ = 0.0;
  std::unique_ptr<reconstruct::BoundaryFit> fit_;
  std::unique_ptr<reconstruct::PompeiuKernels> k_chord_, k_int_;
  Eigen::VectorXd mu_s_c_, mu_t_c_;
};

}  // namespace arcrte::pipeline
