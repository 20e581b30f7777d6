#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcrte/geometry.hpp"
#include "arcrte/medium.hpp"
#include "arcrte/mesh.hpp"

namespace arcrte::forward {

enum class Scheme { SourceIteration, Gmres };

struct ForwardOptions {
  int mesh_triangles = 100000;
  int directions = 360;
  double tol = 1e-8;
  int max_iter = 500;
  Scheme scheme = Scheme::Gmres;
  int gmres_restart = 12;
  /// Scattering moments |m| <= L are kept, L smallest with g^L < moment_tol.
  double moment_tol = 1e-11;
  /// Barycentric lattice level for coefficient cell averages.
  int coefficient_level = 8;
};

/// Piecewise-constant angular flux per forward-mesh cell and direction.
struct TransportSolution {
  int directions = 0;
  /// values[cell * directions + t], theta_t = 2 pi t / directions.
  std::vector<double> values;
  int iterations = 0;
  /// Residual (GMRES) or iterate difference (source iteration) per step.
  std::vector<double> history;
  int moments = 0;

  double at(int cell, int t) const { return values[static_cast<std::size_t>(cell) * directions + t]; }
};

/// Upwind P0 discontinuous Galerkin transport solver on a fixed mesh. Sweep
/// orderings per direction are built once and cached.
class ForwardSolver {
 public:
  ForwardSolver(const transforms::MediumModel& medium, geometry::Triangulation mesh,
                ForwardOptions opts = {});

  TransportSolution solve(const transforms::PiecewiseConstantField& source) const;

  const geometry::Triangulation& mesh() const { return mesh_; }
  const ForwardOptions& options() const { return opts_; }
  int directions() const { return opts_.directions; }
  const std::vector<double>& mu_t_cells() const { return mu_t_; }

  /// Outflow through the mesh boundary, sum over edges and directions of
  /// (xi . n) I with angular weight 2 pi / T.
  double total_outflow(const TransportSolution& sol) const;
  /// Boundary value at a boundary point for direction t, with a
  /// one-cell characteristic correction of the upwind cell value.
  double boundary_value(const TransportSolution& sol, cplx z, int t, bool correct = true) const;
  /// Cell averages of a field on this mesh.
  std::vector<double> cell_average(const transforms::PiecewiseConstantField& f) const;

 private:
  void sweep(std::vector<double>& buf) const;
  void moments_of(const std::vector<double>& buf, Eigen::VectorXd& out) const;
  void scatter_into(const Eigen::VectorXd& mom, std::vector<double>& buf) const;
  int boundary_edge_at(cplx z) const;

  transforms::MediumModel medium_;
  geometry::Triangulation mesh_;
  ForwardOptions opts_;
  int L_ = 0;
  std::vector<std::array<int, 3>> nbr_;
  std::vector<std::array<cplx, 3>> nl_;  // outward normal times edge length
  std::vector<std::vector<int>> order_;  // per direction
  std::vector<double> mu_t_, mu_s_, area_;
  // Boundary edges sorted by starting angle: (angle0, angle1, cell, local edge).
  struct BEdge {
    double a0, a1;
    int cell, edge;
  };
  std::vector<BEdge> bedges_;
};

/// Sampled outflow on the arc. values(k, t) at zeta_k and theta_t = 2 pi t / T;
/// inflow and grazing slots are exactly zero.
struct BoundaryMeasurement {
  int K = 0;
  int T = 0;
  double c = 0.0;
  std::string arc_id;
  Eigen::MatrixXd values;
};

/// Arc identifier "circle:cx:cy:r:wminus:wplus:phase" round-tripped through files.
std::string arc_id(const geometry::Arc& arc);
geometry::Arc arc_from_id(const std::string& id, int samples);

BoundaryMeasurement extract_measurement(const ForwardSolver& solver, const TransportSolution& sol,
                                        const geometry::Arc& arc, int T, bool correct = true);

/// Mesh + solve in one call.
TransportSolution solve_transport(const transforms::MediumModel& medium,
                                  const transforms::PiecewiseConstantField& source,
                                  const ForwardOptions& opts);

}  // namespace arcrte::forward
