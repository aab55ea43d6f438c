#pragma once

#include "dgtm/refelem.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace dgtm {

/// Straight-sided, face-conforming triangle mesh.
///
/// Local face f of element k joins vertices EToV[k][f] and EToV[k][(f+1)%3],
/// so face 0 maps to the reference bottom face, 1 to the hypotenuse, 2 to
/// the left face.
struct Mesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> EToV;
  std::vector<std::array<int, 3>> EToE;  ///< self-index on boundary faces
  std::vector<std::array<int, 3>> EToF;  ///< own face index on boundary faces

  int num_elements() const { return static_cast<int>(EToV.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  bool is_boundary(int k, int f) const { return EToE[k][f] == k && EToF[k][f] == f; }
  int num_boundary_faces() const;
  double signed_area(int k) const;
  double total_area() const;
  /// Axis-aligned bounding box as {xmin, ymin, xmax, ymax}.
  std::array<double, 4> bounding_box() const;
};

struct Extent {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// Structured mesh of nx*ny rectangles, each split along its lower-left to
/// upper-right diagonal.
Mesh generate_rect_mesh(int nx, int ny, const Extent& extent = {});

/// Reads the whitespace-delimited ASCII format:
///   NV NT
///   x y            (NV lines)
///   v0 v1 v2       (NT lines, 0-based)
///   ...            (trailing boundary-marker lines are ignored)
/// Clockwise elements are reoriented and a warning goes to `warnings`
/// (if non-null).
Mesh read_mesh(const std::filesystem::path& path, std::ostream* warnings = nullptr);
Mesh parse_mesh(std::istream& in, std::ostream* warnings = nullptr);

/// Face adjacency by sorted vertex pairs.
void connect(Mesh& mesh);

/// Per-element affine map data and per-face normals.
struct GeomFactors {
  std::vector<double> rx, ry, sx, sy, detA;       // per element
  std::vector<std::array<double, 3>> nx, ny, Fsc;  // per element face
  std::vector<std::array<double, 3>> face_length;
};

GeomFactors build_geometry(const Mesh& mesh);

/// One record per (element, face, face point), element-major.
///
/// idM/idP are unpadded volume DOF indices k*Np + n; the kernels translate
/// them to storage offsets.
struct SurfInfo {
  int Nfp = 0;
  std::vector<int> idM, idP;
  std::vector<double> nx, ny, Fsc, Bsc;

  std::size_t size() const { return idM.size(); }
};

SurfInfo build_surfinfo(const Mesh& mesh, const GeomFactors& geom, const ReferenceElement& ref);

/// Physical coordinates of every volume node, indexed k*Np + n.
std::vector<std::array<double, 2>> node_coordinates(const Mesh& mesh, const ReferenceElement& ref);

}  // namespace dgtm
