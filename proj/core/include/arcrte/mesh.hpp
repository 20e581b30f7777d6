#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arcrte/geometry.hpp"

namespace arcrte::geometry {

enum class VertexKind : unsigned char { Interior = 0, Arc = 1, Chord = 2, Boundary = 3 };

/// Triangle mesh with counter-clockwise triangles.
class Triangulation {
 public:
  Triangulation() = default;
  /// Validates orientation and nondegeneracy; throws std::invalid_argument.
  Triangulation(std::vector<cplx> vertices, std::vector<std::array<int, 3>> triangles,
                std::vector<VertexKind> kinds = {}, std::string strategy = "generic");

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  const std::vector<cplx>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<VertexKind>& kinds() const { return kinds_; }
  const std::vector<cplx>& centroids() const { return centroids_; }
  const std::vector<double>& areas() const { return areas_; }
  const std::string& strategy() const { return strategy_; }

  double total_area() const;
  /// Longest edge of each triangle.
  std::vector<double> diameters() const;

  /// Containing triangle, boundary-inclusive; ties go to the lowest index.
  std::optional<int> locate(cplx z, double tol = 1e-12) const;

  void write(std::ostream& os) const;
  static Triangulation read(std::istream& is);

 private:
  std::vector<cplx> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<VertexKind> kinds_;
  std::vector<cplx> centroids_;
  std::vector<double> areas_;
  std::vector<std::array<double, 4>> bbox_;
  std::string strategy_;
};

double signed_area(cplx a, cplx b, cplx c);

/// Reconstruction mesh of the inscribed polygon over a normalized arc.
/// Rings rho * zeta(w) around the chord midpoint; ring i carries i * n0
/// intervals. Outer ring vertices are arc samples, ring ends sit on chord
/// nodes (the two corners stay at -c and +c).
struct FanMesh {
  Triangulation tri;
  int n0 = 0;
  int rings = 0;
  /// Arc vertices: parameter w. Chord vertices: abscissa x. Interior: unused.
  std::vector<double> boundary_param;
  /// Boundary vertices counter-clockwise, starting at the +c corner.
  std::vector<int> boundary_loop;
  /// Arc sample index for each arc vertex, -1 otherwise.
  std::vector<int> arc_sample;
  /// Polygon area computed from the boundary loop.
  double polygon_area = 0.0;
};

/// `arc` and `chord` must be normalized. Throws if the arc has too few
/// samples to host the outer ring.
FanMesh fan_mesh(const Arc& arc, const Chord& chord, int target_triangles);

/// Forward-solver mesh of a disk: concentric square-to-disk map of an
/// n x n grid, 2 n^2 triangles, diagonals picked by best minimum angle.
Triangulation disk_mesh(const Disk& disk, int target_triangles);

}  // namespace arcrte::geometry
