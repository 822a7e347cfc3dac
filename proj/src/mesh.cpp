#include "steklovcc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "steklovcc/errors.hpp"

namespace steklov {

namespace {

double signed_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c, const Eigen::Vector3d& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

// Facets of tet (v0,v1,v2,v3), oriented outward when the tet volume is positive.
constexpr std::array<std::array<int, 3>, 4> kOutwardFacets = {{
    {1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};

std::array<int, 3> sorted_key(const std::array<int, 3>& f) {
  std::array<int, 3> k = f;
  std::sort(k.begin(), k.end());
  return k;
}

} // namespace

double Mesh::tet_volume(int t) const {
  const auto& tet = tets[t];
  return signed_volume(vertices[tet[0]], vertices[tet[1]], vertices[tet[2]],
                       vertices[tet[3]]);
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (int t = 0; t < tet_count(); ++t) v += tet_volume(t);
  return v;
}

void Mesh::validate() const {
  const int nv = vertex_count();
  for (int t = 0; t < tet_count(); ++t) {
    for (int idx : tets[t]) {
      if (idx < 0 || idx >= nv)
        throw TopologyError("dangling_index",
                            "tet " + std::to_string(t) + " references vertex " +
                                std::to_string(idx) + " out of range");
    }
    if (tet_volume(t) <= 0.0)
      throw GeometryError("inverted_tet",
                          "tet " + std::to_string(t) + " has non-positive volume");
  }

  // Conformity: a facet shared by two tets must appear as a full facet of
  // both, i.e. no sorted facet key may occur more than twice.
  std::map<std::array<int, 3>, int> counts;
  for (const auto& tet : tets) {
    for (const auto& lf : kOutwardFacets) {
      std::array<int, 3> key = sorted_key({tet[lf[0]], tet[lf[1]], tet[lf[2]]});
      if (++counts[key] > 2)
        throw TopologyError("non_manifold_facet",
                            "facet shared by more than two tets");
    }
  }
}

Mesh generate_cube_mesh(int n, double side) {
  if (n < 1) throw PreconditionError("bad_subdivision", "n must be >= 1");
  if (!(side > 0.0)) throw PreconditionError("bad_side", "side must be > 0");

  Mesh mesh;
  const int m = n + 1;
  mesh.vertices.reserve(static_cast<size_t>(m) * m * m);
  const double h = side / n;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        mesh.vertices.emplace_back(i * h, j * h, k * h);

  auto vid = [m](int i, int j, int k) { return (k * m + j) * m + i; };

  // Kuhn split: the 6 tets of a cell trace the paths from the low corner to
  // the high corner along axis permutations, all sharing the main diagonal.
  constexpr std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  mesh.tets.reserve(static_cast<size_t>(n) * n * n * 6);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::array<int, 3> base = {i, j, k};
        for (const auto& p : perms) {
          std::array<std::array<int, 3>, 4> corner;
          corner[0] = base;
          for (int s = 0; s < 3; ++s) {
            corner[s + 1] = corner[s];
            corner[s + 1][p[s]] += 1;
          }
          std::array<int, 4> tet;
          for (int s = 0; s < 4; ++s)
            tet[s] = vid(corner[s][0], corner[s][1], corner[s][2]);
          if (signed_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                            mesh.vertices[tet[2]], mesh.vertices[tet[3]]) < 0.0)
            std::swap(tet[1], tet[2]);
          mesh.tets.push_back(tet);
        }
      }
  return mesh;
}

Mesh generate_ball_mesh(int refinement) {
  if (refinement < 0)
    throw PreconditionError("bad_refinement", "refinement must be >= 0");

  const int n = 2 << refinement; // 2^(refinement+1) subdivisions per axis
  Mesh mesh = generate_cube_mesh(n, 2.0);

  // Recenter to (-1,1)^3, then map max-norm shells to spheres. Boundary
  // vertices (max-norm 1) land exactly on the unit sphere; interior shells
  // grade toward the center.
  for (auto& p : mesh.vertices) {
    p -= Eigen::Vector3d::Constant(1.0);
    const double linf = p.lpNorm<Eigen::Infinity>();
    const double l2 = p.norm();
    if (l2 > 0.0) p *= linf / l2;
  }

  for (int t = 0; t < mesh.tet_count(); ++t) {
    if (mesh.tet_volume(t) <= 0.0)
      throw GeometryError("degenerate_tet",
                          "ball projection produced a degenerate tet at refinement " +
                              std::to_string(refinement));
  }
  return mesh;
}

BoundarySkeleton extract_boundary(const Mesh& mesh) {
  std::map<std::array<int, 3>, std::pair<int, std::array<int, 3>>> facet_map;
  for (const auto& tet : mesh.tets) {
    for (const auto& lf : kOutwardFacets) {
      const std::array<int, 3> oriented = {tet[lf[0]], tet[lf[1]], tet[lf[2]]};
      auto [it, inserted] = facet_map.try_emplace(sorted_key(oriented), 0, oriented);
      it->second.first += 1;
      if (inserted) it->second.second = oriented;
      if (it->second.first > 2)
        throw TopologyError("non_manifold_facet", "facet occurs in more than two tets");
    }
  }

  BoundarySkeleton bnd;
  bnd.boundary_index.assign(mesh.vertex_count(), -1);
  for (const auto& [key, entry] : facet_map) {
    if (entry.first != 1) continue;
    const auto& f = entry.second;
    const Eigen::Vector3d e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Eigen::Vector3d e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    const Eigen::Vector3d cross = e1.cross(e2);
    const double area = 0.5 * cross.norm();
    if (area <= 0.0) throw GeometryError("degenerate_facet", "zero-area boundary facet");
    bnd.facets.push_back(f);
    bnd.facet_areas.push_back(area);
    bnd.facet_normals.push_back(cross.normalized());
    for (int v : f) bnd.boundary_index[v] = -2; // marked, index assigned below
  }

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (bnd.boundary_index[v] == -2) {
      bnd.boundary_index[v] = bnd.boundary_vertex_count();
      bnd.boundary_vertices.push_back(v);
    }
  }

  bnd.vertex_normals.assign(bnd.boundary_vertex_count(), Eigen::Vector3d::Zero());
  for (int fi = 0; fi < bnd.facet_count(); ++fi) {
    for (int v : bnd.facets[fi])
      bnd.vertex_normals[bnd.boundary_index[v]] +=
          bnd.facet_areas[fi] * bnd.facet_normals[fi];
  }
  for (auto& nrm : bnd.vertex_normals) {
    const double len = nrm.norm();
    if (len <= 0.0)
      throw GeometryError("zero_vertex_normal", "area-weighted vertex normal vanished");
    nrm /= len;
  }
  return bnd;
}

double BoundarySkeleton::total_area() const {
  double a = 0.0;
  for (double fa : facet_areas) a += fa;
  return a;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats st;
  st.vertex_count = mesh.vertex_count();
  st.tet_count = mesh.tet_count();
  if (mesh.tet_count() == 0) return st;

  st.min_tet_volume = std::numeric_limits<double>::infinity();
  st.max_tet_volume = -std::numeric_limits<double>::infinity();
  st.min_dihedral_quality = std::numeric_limits<double>::infinity();

  for (int t = 0; t < mesh.tet_count(); ++t) {
    const double vol = mesh.tet_volume(t);
    st.min_tet_volume = std::min(st.min_tet_volume, vol);
    st.max_tet_volume = std::max(st.max_tet_volume, vol);

    const auto& tet = mesh.tets[t];
    std::array<Eigen::Vector3d, 4> inward; // unit inward facet normals
    for (int f = 0; f < 4; ++f) {
      const auto& lf = kOutwardFacets[f];
      const Eigen::Vector3d e1 = mesh.vertices[tet[lf[1]]] - mesh.vertices[tet[lf[0]]];
      const Eigen::Vector3d e2 = mesh.vertices[tet[lf[2]]] - mesh.vertices[tet[lf[0]]];
      inward[f] = -e1.cross(e2).normalized();
    }
    // Each facet pair shares an edge; sin of the dihedral angle along it.
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const double s = inward[a].cross(inward[b]).norm();
        st.min_dihedral_quality = std::min(st.min_dihedral_quality, s);
      }
  }
  return st;
}

} // namespace steklov
