#ifndef STEKLOVCC_ASSEMBLY_HPP
#define STEKLOVCC_ASSEMBLY_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "steklovcc/mesh.hpp"

namespace steklov {

using SpMat = Eigen::SparseMatrix<double>;

/// Coefficients of the penalized curl-curl form: alpha (any sign), the
/// divergence penalty theta > 0, and the boundary shift eta >= 0.
struct ProblemParams {
  double alpha = 0.0;
  double theta = 1.0;
  double eta = 0.0;
};

/// The four bilinear forms over vector P1 fields, in ambient coordinates
/// (3 dofs per vertex, vertex-major: dof = 3*v + component).
///
///   K: volume curl-curl, D: volume div-div, M: volume mass,
///   B: boundary mass (zero on rows/columns of interior vertices).
struct AssembledForms {
  SpMat K, D, M, B;
  int vertex_count = 0;
};

AssembledForms assemble_forms(const Mesh& mesh, const BoundarySkeleton& boundary);

/// Tangential field on the boundary: one 2-vector per boundary vertex,
/// expressed in that vertex's orthonormal tangent frame.
struct TraceField {
  Eigen::VectorXd coeffs; // size 2 * boundary_vertex_count

  int boundary_vertex_count() const { return static_cast<int>(coeffs.size() / 2); }
  double norm_inf() const { return coeffs.size() ? coeffs.lpNorm<Eigen::Infinity>() : 0.0; }
};

/// Null-space realization of the constraint u.n = 0 at boundary vertices.
///
/// The constrained coordinates are ordered [interior | boundary-tangential]:
/// 3 dofs per interior vertex followed by 2 tangent-frame dofs per boundary
/// vertex. N maps constrained coordinates to ambient vector-P1 coordinates
/// and has orthonormal columns.
struct FemSpace {
  SpMat N; // (3V) x (3*V_int + 2*V_bnd)
  int n_interior = 0;
  int n_boundary = 0;
  std::vector<int> interior_vertices;
  std::vector<int> boundary_vertices;
  std::vector<int> boundary_index; // global vertex -> boundary slot or -1
  std::vector<std::array<Eigen::Vector3d, 2>> frames; // (t1, t2) per boundary vertex
  std::vector<Eigen::Vector3d> normals;               // unit, per boundary vertex

  int dim() const { return n_interior + n_boundary; }

  /// Restriction N^T A N of an ambient form to constrained coordinates.
  SpMat reduce(const SpMat& ambient_form) const;

  /// Boundary-tangential block of N^T B N (the discrete TL2 Gram matrix).
  SpMat boundary_mass(const AssembledForms& forms) const;

  /// Ambient 3-vector of a trace field at each boundary vertex.
  Eigen::MatrixX3d trace_to_ambient(const TraceField& f) const;

  /// Frame coordinates of an ambient boundary field (tangential part only).
  TraceField trace_from_ambient(const Eigen::MatrixX3d& ambient) const;

  /// Per-boundary-vertex cross product n x f, expressed again in frames.
  TraceField cross_with_normal(const TraceField& f) const;

  /// Vertex-wise field (V x 3) of constrained coordinates, for exports.
  Eigen::MatrixX3d to_vertex_field(const Eigen::VectorXd& coeffs) const;
};

FemSpace build_constraint_basis(const Mesh& mesh, const BoundarySkeleton& boundary);

/// S_eta = N^T (K - alpha*M + theta*D + eta*B) N.
SpMat form_matrix(const FemSpace& space, const AssembledForms& forms,
                  const ProblemParams& params);

/// u^T S_eta v for constrained coordinate vectors.
double form_product(const FemSpace& space, const AssembledForms& forms,
                    const ProblemParams& params, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v);

/// Boundary-tangential block of a constrained coordinate vector, as a
/// TraceField. For discrete X_T fields this is the full boundary trace.
TraceField tangential_trace(const FemSpace& space, const Eigen::VectorXd& coeffs);

struct SurfaceRotatedGradient {
  TraceField field;
  double div_defect = 0.0; // max weak surface-divergence residual of the projection
};

/// f = n x grad_Gamma(psi) for a P1 boundary scalar psi (one value per
/// boundary vertex), L2-projected onto the vertex trace space.
SurfaceRotatedGradient surface_rotated_gradient(const Mesh& mesh,
                                                const BoundarySkeleton& boundary,
                                                const FemSpace& space,
                                                const AssembledForms& forms,
                                                const Eigen::VectorXd& psi);

} // namespace steklov

#endif
