#include "steklovcc/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "steklovcc/errors.hpp"

namespace steklov {

namespace {

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  return {};
}

} // namespace

Mesh load_gmsh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("file_open", "cannot open " + path);

  std::string line = next_content_line(in);
  if (line != "$MeshFormat")
    throw ParseError("gmsh_missing_header", "expected $MeshFormat in " + path);
  line = next_content_line(in);
  {
    std::istringstream fmt(line);
    double version = 0.0;
    int file_type = -1, data_size = 0;
    fmt >> version >> file_type >> data_size;
    if (!fmt || version < 2.0 || version >= 3.0 || file_type != 0)
      throw ParseError("gmsh_unsupported_version",
                       "only MSH 2.x ASCII is supported, got '" + line + "'");
  }
  if (next_content_line(in) != "$EndMeshFormat")
    throw ParseError("gmsh_missing_header", "expected $EndMeshFormat");

  bool seen_nodes = false, seen_elements = false;
  std::map<long, int> node_id_map;
  Mesh mesh;

  while (!(line = next_content_line(in)).empty()) {
    if (line == "$Nodes") {
      seen_nodes = true;
      const std::string count_line = next_content_line(in);
      long count = -1;
      if (std::sscanf(count_line.c_str(), "%ld", &count) != 1 || count < 0)
        throw ParseError("gmsh_bad_node_count", "bad node count '" + count_line + "'");
      mesh.vertices.reserve(static_cast<size_t>(count));
      for (long i = 0; i < count; ++i) {
        const std::string node_line = next_content_line(in);
        long id;
        double x, y, z;
        if (std::sscanf(node_line.c_str(), "%ld %lf %lf %lf", &id, &x, &y, &z) != 4)
          throw ParseError("gmsh_bad_node", "bad node line '" + node_line + "'");
        node_id_map[id] = mesh.vertex_count();
        mesh.vertices.emplace_back(x, y, z);
      }
      if (next_content_line(in) != "$EndNodes")
        throw ParseError("gmsh_missing_section_end", "expected $EndNodes");
    } else if (line == "$Elements") {
      seen_elements = true;
      const std::string count_line = next_content_line(in);
      long count = -1;
      if (std::sscanf(count_line.c_str(), "%ld", &count) != 1 || count < 0)
        throw ParseError("gmsh_bad_element_count",
                         "bad element count '" + count_line + "'");
      for (long i = 0; i < count; ++i) {
        std::istringstream el(next_content_line(in));
        long id = 0;
        int type = -1, ntags = 0;
        el >> id >> type >> ntags;
        if (!el) throw ParseError("gmsh_bad_element", "malformed element record");
        for (int t = 0; t < ntags; ++t) {
          long tag;
          el >> tag;
        }
        if (type == 4) {
          std::array<long, 4> ids{};
          for (long& v : ids) el >> v;
          if (!el) throw ParseError("gmsh_bad_element", "truncated tetrahedron record");
          std::array<int, 4> tet{};
          for (int v = 0; v < 4; ++v) {
            auto it = node_id_map.find(ids[v]);
            if (it == node_id_map.end())
              throw ParseError("gmsh_dangling_index",
                               "element references unknown node " + std::to_string(ids[v]));
            tet[v] = it->second;
          }
          mesh.tets.push_back(tet);
        } else if (type == 1 || type == 2 || type == 15) {
          // lines, triangles, points: boundary decoration, skipped
        } else {
          throw ParseError("gmsh_unsupported_element",
                           "unsupported element type " + std::to_string(type));
        }
      }
      if (next_content_line(in) != "$EndElements")
        throw ParseError("gmsh_missing_section_end", "expected $EndElements");
    } else {
      // skip unknown section
      const std::string end = "$End" + line.substr(1);
      std::string skipped;
      do {
        skipped = next_content_line(in);
        if (skipped.empty())
          throw ParseError("gmsh_missing_section_end", "unterminated section " + line);
      } while (skipped != end);
    }
  }

  if (!seen_nodes) throw ParseError("gmsh_missing_nodes", "no $Nodes section");
  if (!seen_elements) throw ParseError("gmsh_missing_elements", "no $Elements section");

  for (auto& tet : mesh.tets) {
    const double vol = (mesh.vertices[tet[1]] - mesh.vertices[tet[0]])
                           .cross(mesh.vertices[tet[2]] - mesh.vertices[tet[0]])
                           .dot(mesh.vertices[tet[3]] - mesh.vertices[tet[0]]);
    if (vol < 0.0) std::swap(tet[1], tet[2]);
  }
  mesh.validate();
  return mesh;
}

void write_gmsh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("file_open", "cannot open " + path + " for writing");
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.vertex_count() << "\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto& p = mesh.vertices[v];
    out << (v + 1) << ' ' << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' '
        << fmt_double(p.z()) << "\n";
  }
  out << "$EndNodes\n$Elements\n" << mesh.tet_count() << "\n";
  for (int t = 0; t < mesh.tet_count(); ++t) {
    const auto& tet = mesh.tets[t];
    out << (t + 1) << " 4 2 0 1";
    for (int v : tet) out << ' ' << (v + 1);
    out << "\n";
  }
  out << "$EndElements\n";
  if (!out) throw IoError("file_write", "failed writing " + path);
}

void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::MatrixX3d>>& point_fields) {
  std::ofstream out(path);
  if (!out) throw IoError("file_open", "cannot open " + path + " for writing");
  out << "# vtk DataFile Version 3.0\nsteklovcc mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& p : mesh.vertices)
    out << fmt_double(p.x()) << ' ' << fmt_double(p.y()) << ' ' << fmt_double(p.z())
        << "\n";
  out << "CELLS " << mesh.tet_count() << ' ' << 5 * mesh.tet_count() << "\n";
  for (const auto& tet : mesh.tets)
    out << "4 " << tet[0] << ' ' << tet[1] << ' ' << tet[2] << ' ' << tet[3] << "\n";
  out << "CELL_TYPES " << mesh.tet_count() << "\n";
  for (int t = 0; t < mesh.tet_count(); ++t) out << "10\n";
  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.vertex_count() << "\n";
    for (const auto& [name, field] : point_fields) {
      if (field.rows() != mesh.vertex_count())
        throw PreconditionError("field_size", "vector field size mismatch for " + name);
      out << "VECTORS " << name << " double\n";
      for (Eigen::Index r = 0; r < field.rows(); ++r)
        out << fmt_double(field(r, 0)) << ' ' << fmt_double(field(r, 1)) << ' '
            << fmt_double(field(r, 2)) << "\n";
    }
  }
  if (!out) throw IoError("file_write", "failed writing " + path);
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("file_open", "cannot open " + path + " for writing");
  long nnz_lower = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      if (it.row() >= it.col()) ++nnz_lower;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.rows() << ' ' << m.cols() << ' ' << nnz_lower << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      if (it.row() >= it.col())
        out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << fmt_double(it.value())
            << "\n";
  if (!out) throw IoError("file_write", "failed writing " + path);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace steklov
