#include "steklovcc/assembly.hpp"

#include <cmath>

#include "steklovcc/errors.hpp"

namespace steklov {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// P1 gradients on a tet: grad(lambda_a) is constant; rows 1..3 come from the
// inverse edge matrix, row 0 closes the partition of unity.
std::array<Eigen::Vector3d, 4> tet_gradients(const Mesh& mesh,
                                             const std::array<int, 4>& tet,
                                             double& volume) {
  Eigen::Matrix3d edges;
  for (int a = 0; a < 3; ++a)
    edges.col(a) = mesh.vertices[tet[a + 1]] - mesh.vertices[tet[0]];
  const double det = edges.determinant();
  volume = det / 6.0;
  if (!(volume > 0.0))
    throw GeometryError("inverted_tet", "non-positive tet volume during assembly");
  const Eigen::Matrix3d inv = edges.inverse();
  std::array<Eigen::Vector3d, 4> g;
  g[0].setZero();
  for (int a = 0; a < 3; ++a) {
    g[a + 1] = inv.row(a);
    g[0] -= g[a + 1];
  }
  return g;
}

void add_block(Triplets& out, int row_vertex, int col_vertex, const Eigen::Matrix3d& blk) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const double v = blk(r, c);
      if (v != 0.0) out.emplace_back(3 * row_vertex + r, 3 * col_vertex + c, v);
    }
}

} // namespace

AssembledForms assemble_forms(const Mesh& mesh, const BoundarySkeleton& boundary) {
  const int n = 3 * mesh.vertex_count();
  Triplets tk, td, tm, tb;
  tk.reserve(mesh.tet_count() * 16 * 9);
  td.reserve(mesh.tet_count() * 16 * 9);
  tm.reserve(mesh.tet_count() * 16 * 3);

  for (const auto& tet : mesh.tets) {
    double vol = 0.0;
    const auto g = tet_gradients(mesh, tet, vol);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        // curl-curl block: (g_a x u).(g_b x v) = u^T [(g_a.g_b) I - g_b g_a^T] v
        const Eigen::Matrix3d kblk =
            vol * (g[a].dot(g[b]) * Eigen::Matrix3d::Identity() - g[b] * g[a].transpose());
        add_block(tk, tet[a], tet[b], kblk);
        add_block(td, tet[a], tet[b], vol * (g[a] * g[b].transpose()));
        // consistent P1 mass per component, exact: V/10 diagonal, V/20 off
        const double mab = (a == b) ? vol / 10.0 : vol / 20.0;
        for (int c = 0; c < 3; ++c)
          tm.emplace_back(3 * tet[a] + c, 3 * tet[b] + c, mab);
      }
  }

  for (int fi = 0; fi < boundary.facet_count(); ++fi) {
    const auto& f = boundary.facets[fi];
    const double area = boundary.facet_areas[fi];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double mab = (a == b) ? area / 6.0 : area / 12.0;
        for (int c = 0; c < 3; ++c)
          tb.emplace_back(3 * f[a] + c, 3 * f[b] + c, mab);
      }
  }

  AssembledForms forms;
  forms.vertex_count = mesh.vertex_count();
  forms.K.resize(n, n);
  forms.D.resize(n, n);
  forms.M.resize(n, n);
  forms.B.resize(n, n);
  forms.K.setFromTriplets(tk.begin(), tk.end());
  forms.D.setFromTriplets(td.begin(), td.end());
  forms.M.setFromTriplets(tm.begin(), tm.end());
  forms.B.setFromTriplets(tb.begin(), tb.end());
  return forms;
}

FemSpace build_constraint_basis(const Mesh& mesh, const BoundarySkeleton& boundary) {
  FemSpace space;
  space.boundary_index = boundary.boundary_index;
  space.boundary_vertices = boundary.boundary_vertices;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (boundary.boundary_index[v] < 0) space.interior_vertices.push_back(v);

  space.n_interior = 3 * static_cast<int>(space.interior_vertices.size());
  space.n_boundary = 2 * boundary.boundary_vertex_count();

  space.frames.resize(boundary.boundary_vertex_count());
  space.normals = boundary.vertex_normals;
  for (int bi = 0; bi < boundary.boundary_vertex_count(); ++bi) {
    const Eigen::Vector3d& nrm = boundary.vertex_normals[bi];
    if (!(nrm.norm() > 0.5))
      throw GeometryError("zero_vertex_normal", "missing normal at boundary vertex");
    // Deterministic frame: axis with the smallest normal component, crossed
    // with n, then completed to a right-handed triad (t1, t2, n).
    int axis = 0;
    for (int c = 1; c < 3; ++c)
      if (std::abs(nrm[c]) < std::abs(nrm[axis])) axis = c;
    Eigen::Vector3d t1 = Eigen::Vector3d::Unit(axis).cross(nrm).normalized();
    Eigen::Vector3d t2 = nrm.cross(t1);
    space.frames[bi] = {t1, t2};
  }

  Triplets tn;
  tn.reserve(space.n_interior + 3 * space.n_boundary);
  int col = 0;
  for (int v : space.interior_vertices)
    for (int c = 0; c < 3; ++c) tn.emplace_back(3 * v + c, col++, 1.0);
  for (int bi = 0; bi < boundary.boundary_vertex_count(); ++bi) {
    const int v = boundary.boundary_vertices[bi];
    for (int t = 0; t < 2; ++t) {
      const Eigen::Vector3d& dir = space.frames[bi][t];
      for (int c = 0; c < 3; ++c) tn.emplace_back(3 * v + c, col, dir[c]);
      ++col;
    }
  }
  space.N.resize(3 * mesh.vertex_count(), space.dim());
  space.N.setFromTriplets(tn.begin(), tn.end());
  return space;
}

SpMat FemSpace::reduce(const SpMat& ambient_form) const {
  SpMat r = N.transpose() * ambient_form * N;
  r.prune(0.0);
  return r;
}

SpMat FemSpace::boundary_mass(const AssembledForms& forms) const {
  const SpMat full = reduce(forms.B);
  return full.block(n_interior, n_interior, n_boundary, n_boundary);
}

Eigen::MatrixX3d FemSpace::trace_to_ambient(const TraceField& f) const {
  const int nb = static_cast<int>(frames.size());
  if (f.coeffs.size() != 2 * nb)
    throw PreconditionError("trace_size", "trace field does not match this space");
  Eigen::MatrixX3d out(nb, 3);
  for (int bi = 0; bi < nb; ++bi)
    out.row(bi) =
        (f.coeffs[2 * bi] * frames[bi][0] + f.coeffs[2 * bi + 1] * frames[bi][1]).transpose();
  return out;
}

TraceField FemSpace::trace_from_ambient(const Eigen::MatrixX3d& ambient) const {
  const int nb = static_cast<int>(frames.size());
  if (ambient.rows() != nb)
    throw PreconditionError("trace_size", "ambient field does not match this space");
  TraceField f;
  f.coeffs.resize(2 * nb);
  for (int bi = 0; bi < nb; ++bi) {
    const Eigen::Vector3d v = ambient.row(bi).transpose();
    f.coeffs[2 * bi] = frames[bi][0].dot(v);
    f.coeffs[2 * bi + 1] = frames[bi][1].dot(v);
  }
  return f;
}

TraceField FemSpace::cross_with_normal(const TraceField& f) const {
  // With (t1, t2, n) right-handed: n x t1 = t2, n x t2 = -t1.
  const int nb = static_cast<int>(frames.size());
  if (f.coeffs.size() != 2 * nb)
    throw PreconditionError("trace_size", "trace field does not match this space");
  TraceField out;
  out.coeffs.resize(2 * nb);
  for (int bi = 0; bi < nb; ++bi) {
    out.coeffs[2 * bi] = -f.coeffs[2 * bi + 1];
    out.coeffs[2 * bi + 1] = f.coeffs[2 * bi];
  }
  return out;
}

Eigen::MatrixX3d FemSpace::to_vertex_field(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != dim())
    throw PreconditionError("coeff_size", "constrained vector does not match this space");
  const Eigen::VectorXd ambient = N * coeffs;
  const int nv = static_cast<int>(ambient.size() / 3);
  Eigen::MatrixX3d out(nv, 3);
  for (int v = 0; v < nv; ++v) out.row(v) = ambient.segment<3>(3 * v).transpose();
  return out;
}

SpMat form_matrix(const FemSpace& space, const AssembledForms& forms,
                  const ProblemParams& params) {
  if (!(params.theta > 0.0))
    throw PreconditionError("bad_theta", "theta must be positive");
  if (params.eta < 0.0)
    throw PreconditionError("bad_eta", "eta must be nonnegative");
  SpMat ambient = forms.K - params.alpha * forms.M + params.theta * forms.D;
  if (params.eta != 0.0) ambient += params.eta * forms.B;
  return space.reduce(ambient);
}

double form_product(const FemSpace& space, const AssembledForms& forms,
                    const ProblemParams& params, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw PreconditionError("coeff_size", "constrained vector does not match this space");
  const Eigen::VectorXd au = space.N * u;
  const Eigen::VectorXd av = space.N * v;
  double r = au.dot(forms.K * av) - params.alpha * au.dot(forms.M * av) +
             params.theta * au.dot(forms.D * av);
  if (params.eta != 0.0) r += params.eta * au.dot(forms.B * av);
  return r;
}

TraceField tangential_trace(const FemSpace& space, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != space.dim())
    throw PreconditionError("coeff_size", "constrained vector does not match this space");
  TraceField f;
  f.coeffs = coeffs.tail(space.n_boundary);
  return f;
}

SurfaceRotatedGradient surface_rotated_gradient(const Mesh& mesh,
                                                const BoundarySkeleton& boundary,
                                                const FemSpace& space,
                                                const AssembledForms& forms,
                                                const Eigen::VectorXd& psi) {
  const int nb = boundary.boundary_vertex_count();
  if (psi.size() != nb)
    throw PreconditionError("psi_size", "psi must have one value per boundary vertex");

  // Per facet: grad_Gamma(psi) is constant; rotate by the facet normal and
  // accumulate the L2 load against the tangential vertex basis.
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.n_boundary);
  struct FacetField {
    Eigen::Vector3d value;
    double area;
  };
  std::vector<FacetField> facet_fields(boundary.facet_count());

  for (int fi = 0; fi < boundary.facet_count(); ++fi) {
    const auto& f = boundary.facets[fi];
    const double area = boundary.facet_areas[fi];
    const Eigen::Vector3d& nrm = boundary.facet_normals[fi];
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector3d opposite =
          mesh.vertices[f[(a + 2) % 3]] - mesh.vertices[f[(a + 1) % 3]];
      const Eigen::Vector3d grad_phi = nrm.cross(opposite) / (2.0 * area);
      grad += psi[boundary.boundary_index[f[a]]] * grad_phi;
    }
    const Eigen::Vector3d rot = nrm.cross(grad);
    facet_fields[fi] = {rot, area};
    for (int a = 0; a < 3; ++a) {
      const int bi = boundary.boundary_index[f[a]];
      // int_F rot . (t phi_a) = (rot . t) * area/3 for constant rot
      load[2 * bi] += rot.dot(space.frames[bi][0]) * area / 3.0;
      load[2 * bi + 1] += rot.dot(space.frames[bi][1]) * area / 3.0;
    }
  }

  const SpMat bbb = space.boundary_mass(forms);
  Eigen::SimplicialLLT<SpMat> llt(bbb);
  if (llt.info() != Eigen::Success)
    throw NumericalError("boundary_mass_factorization", "boundary mass not SPD");
  SurfaceRotatedGradient out;
  out.field.coeffs = llt.solve(load);

  // Weak surface-divergence defect of the projected vertex field:
  // max_chi |int_Gamma f_h . grad_Gamma(chi)| over P1 vertex hats chi,
  // relative to the TL2 norm of f_h.
  const Eigen::MatrixX3d ambient = space.trace_to_ambient(out.field);
  Eigen::VectorXd defect = Eigen::VectorXd::Zero(nb);
  for (int fi = 0; fi < boundary.facet_count(); ++fi) {
    const auto& f = boundary.facets[fi];
    const double area = boundary.facet_areas[fi];
    const Eigen::Vector3d& nrm = boundary.facet_normals[fi];
    // nodal-average representative of f_h on the facet
    Eigen::Vector3d favg = Eigen::Vector3d::Zero();
    for (int a = 0; a < 3; ++a)
      favg += ambient.row(boundary.boundary_index[f[a]]).transpose();
    favg /= 3.0;
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector3d opposite =
          mesh.vertices[f[(a + 2) % 3]] - mesh.vertices[f[(a + 1) % 3]];
      const Eigen::Vector3d grad_phi = nrm.cross(opposite) / (2.0 * area);
      defect[boundary.boundary_index[f[a]]] += favg.dot(grad_phi) * area;
    }
  }
  const double fnorm = std::sqrt(out.field.coeffs.dot(bbb * out.field.coeffs));
  out.div_defect = fnorm > 0.0 ? defect.lpNorm<Eigen::Infinity>() / fnorm
                               : defect.lpNorm<Eigen::Infinity>();
  return out;
}

} // namespace steklov
