#ifndef STEKLOVCC_IO_HPP
#define STEKLOVCC_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "steklovcc/mesh.hpp"

namespace steklov {

/// Reads a Gmsh MSH 2.2 ASCII file containing 4-node tetrahedra.
/// Point/line/triangle elements are skipped; any other element type is an
/// error. Tets are reordered to positive volume where needed.
Mesh load_gmsh(const std::string& path);

/// Writes a mesh in Gmsh MSH 2.2 ASCII format (element type 4).
void write_gmsh(const Mesh& mesh, const std::string& path);

/// VTK legacy ASCII unstructured grid (cell type 10), optionally with
/// per-vertex vector fields attached as POINT_DATA.
void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::MatrixX3d>>& point_fields = {});

/// Matrix-market coordinate dump (symmetric, lower triangle) for the
/// assembly debug flag.
void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path);

/// Fixed-format float used by every CSV/JSON writer so re-runs are
/// byte-identical.
std::string fmt_double(double x);

} // namespace steklov

#endif
