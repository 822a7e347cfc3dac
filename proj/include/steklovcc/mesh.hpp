#ifndef STEKLOVCC_MESH_HPP
#define STEKLOVCC_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace steklov {

/// Conforming tetrahedral mesh of a bounded domain. Immutable after
/// construction; all tets are stored with positive signed volume.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> tets;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int tet_count() const { return static_cast<int>(tets.size()); }

  double tet_volume(int t) const;
  double total_volume() const;

  /// Checks the Mesh invariants: positive volumes, in-range indices,
  /// conforming facet intersections. Throws GeometryError/TopologyError.
  void validate() const;
};

/// The boundary skeleton of a tet mesh: outward-oriented facets, facet
/// areas/normals, and area-weighted unit vertex normals.
struct BoundarySkeleton {
  std::vector<std::array<int, 3>> facets;      // outward orientation
  std::vector<double> facet_areas;
  std::vector<Eigen::Vector3d> facet_normals;  // unit, outward
  std::vector<int> boundary_vertices;          // global vertex ids, ascending
  std::vector<int> boundary_index;             // global id -> local id or -1
  std::vector<Eigen::Vector3d> vertex_normals; // unit, per boundary vertex

  int facet_count() const { return static_cast<int>(facets.size()); }
  int boundary_vertex_count() const { return static_cast<int>(boundary_vertices.size()); }
  double total_area() const;
};

struct MeshStats {
  int vertex_count = 0;
  int tet_count = 0;
  double min_tet_volume = 0.0;
  double max_tet_volume = 0.0;
  double min_dihedral_quality = 0.0; // min over tets of min sine of dihedral angle
};

/// Structured mesh of the cube (0,side)^3 with n subdivisions per axis.
/// Each cell is split into 6 tets sharing the cell's main diagonal.
Mesh generate_cube_mesh(int n, double side);

/// Mesh of the unit ball, built from a cube mesh of (-1,1)^3 with
/// 2^(refinement+1) subdivisions per axis whose vertices are mapped so that
/// max-norm level sets become spheres. Boundary vertices land exactly on the
/// unit sphere.
Mesh generate_ball_mesh(int refinement);

/// Extracts the facets that belong to exactly one tet, oriented outward.
BoundarySkeleton extract_boundary(const Mesh& mesh);

MeshStats mesh_stats(const Mesh& mesh);

} // namespace steklov

#endif
