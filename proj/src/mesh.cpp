#include "dgtm/mesh.hpp"

#include "dgtm/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace dgtm {

namespace {

double cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
             const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Whitespace tokenizer that remembers where each token came from.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  struct Token {
    std::string text;
    int line = 0;
    int column = 0;
  };

  // Next token on a fresh logical line; blank lines are skipped.
  bool next_line() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      if (raw.find_first_not_of(" \t\r") != std::string::npos) {
        line_ = raw;
        pos_ = 0;
        return true;
      }
    }
    return false;
  }

  bool next_token(Token& tok) {
    pos_ = line_.find_first_not_of(" \t\r", pos_);
    if (pos_ == std::string::npos) return false;
    const std::size_t end = line_.find_first_of(" \t\r", pos_);
    tok.text = line_.substr(pos_, end == std::string::npos ? std::string::npos : end - pos_);
    tok.line = line_no_;
    tok.column = static_cast<int>(pos_) + 1;
    pos_ = end == std::string::npos ? line_.size() : end;
    return true;
  }

  int line() const { return line_no_; }
  int end_column() const { return static_cast<int>(line_.size()) + 1; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

template <class T>
T parse_number(const TokenReader::Token& tok, const char* what) {
  std::istringstream ss(tok.text);
  T value{};
  ss >> value;
  if (ss.fail() || !ss.eof()) {
    throw ParseError("mesh: line " + std::to_string(tok.line) + ", column " +
                         std::to_string(tok.column) + ": expected " + what + ", got '" + tok.text +
                         "'",
                     tok.line, tok.column);
  }
  return value;
}

template <class T, std::size_t Count>
std::array<T, Count> read_record(TokenReader& reader, const char* what, const char* section) {
  if (!reader.next_line()) {
    throw ParseError(std::string("mesh: unexpected end of file after line ") +
                         std::to_string(reader.line()) + " while reading " + section,
                     reader.line() + 1, 1);
  }
  std::array<T, Count> out{};
  for (std::size_t i = 0; i < Count; ++i) {
    TokenReader::Token tok;
    if (!reader.next_token(tok)) {
      throw ParseError("mesh: line " + std::to_string(reader.line()) + ", column " +
                           std::to_string(reader.end_column()) + ": expected " + what + " (" +
                           section + " record has too few values)",
                       reader.line(), reader.end_column());
    }
    out[i] = parse_number<T>(tok, what);
  }
  return out;
}

// A vertex in the open interior of a boundary face means a hanging node.
void check_conformity(const Mesh& mesh) {
  for (int k = 0; k < mesh.num_elements(); ++k) {
    for (int f = 0; f < 3; ++f) {
      if (!mesh.is_boundary(k, f)) continue;
      const int va = mesh.EToV[k][f];
      const int vb = mesh.EToV[k][(f + 1) % 3];
      const auto& a = mesh.vertices[va];
      const auto& b = mesh.vertices[vb];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      for (int v = 0; v < mesh.num_vertices(); ++v) {
        if (v == va || v == vb) continue;
        const auto& p = mesh.vertices[v];
        const double dist = std::abs(cross(a, b, p)) / len;
        const double t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len);
        if (dist < 1e-10 * len && t > 1e-10 && t < 1.0 - 1e-10) {
          throw MeshError("mesh: non-conforming face (element " + std::to_string(k) + ", face " +
                          std::to_string(f) + ") has vertex " + std::to_string(v) +
                          " in its interior");
        }
      }
    }
  }
}

}  // namespace

int Mesh::num_boundary_faces() const {
  int count = 0;
  for (int k = 0; k < num_elements(); ++k) {
    for (int f = 0; f < 3; ++f) count += is_boundary(k, f) ? 1 : 0;
  }
  return count;
}

double Mesh::signed_area(int k) const {
  const auto& e = EToV[k];
  return 0.5 * cross(vertices[e[0]], vertices[e[1]], vertices[e[2]]);
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int k = 0; k < num_elements(); ++k) area += signed_area(k);
  return area;
}

std::array<double, 4> Mesh::bounding_box() const {
  std::array<double, 4> box = {std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};
  for (const auto& v : vertices) {
    box[0] = std::min(box[0], v[0]);
    box[1] = std::min(box[1], v[1]);
    box[2] = std::max(box[2], v[0]);
    box[3] = std::max(box[3], v[1]);
  }
  return box;
}

Mesh generate_rect_mesh(int nx, int ny, const Extent& extent) {
  if (nx < 1 || ny < 1) throw MeshError("generate_rect_mesh: need at least one cell per side");
  if (!(extent.x1 > extent.x0) || !(extent.y1 > extent.y0)) {
    throw MeshError("generate_rect_mesh: degenerate extent");
  }
  Mesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.push_back({extent.x0 + (extent.x1 - extent.x0) * i / nx,
                               extent.y0 + (extent.y1 - extent.y0) * j / ny});
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.EToV.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.EToV.push_back({v00, v10, v11});
      mesh.EToV.push_back({v00, v11, v01});
    }
  }
  connect(mesh);
  return mesh;
}

Mesh parse_mesh(std::istream& in, std::ostream* warnings) {
  TokenReader reader(in);
  const auto header = read_record<long, 2>(reader, "integer", "header");
  if (header[0] < 3 || header[1] < 1) {
    throw ParseError("mesh: line " + std::to_string(reader.line()) +
                         ": need at least 3 vertices and 1 triangle",
                     reader.line(), 1);
  }
  const int nv = static_cast<int>(header[0]);
  const int nt = static_cast<int>(header[1]);

  Mesh mesh;
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    mesh.vertices.push_back(read_record<double, 2>(reader, "coordinate", "vertex"));
  }
  mesh.EToV.reserve(nt);
  for (int k = 0; k < nt; ++k) {
    const auto tri = read_record<long, 3>(reader, "vertex index", "triangle");
    std::array<int, 3> e{};
    for (int i = 0; i < 3; ++i) {
      if (tri[i] < 0 || tri[i] >= nv) {
        throw ParseError("mesh: line " + std::to_string(reader.line()) + ": vertex index " +
                             std::to_string(tri[i]) + " out of range [0, " + std::to_string(nv) +
                             ")",
                         reader.line(), 1);
      }
      e[i] = static_cast<int>(tri[i]);
    }
    mesh.EToV.push_back(e);
  }

  for (int k = 0; k < nt; ++k) {
    const double area = mesh.signed_area(k);
    auto& e = mesh.EToV[k];
    const auto& a = mesh.vertices[e[0]];
    const auto& b = mesh.vertices[e[1]];
    const auto& c = mesh.vertices[e[2]];
    const double scale = std::max({std::hypot(b[0] - a[0], b[1] - a[1]),
                                   std::hypot(c[0] - b[0], c[1] - b[1]),
                                   std::hypot(a[0] - c[0], a[1] - c[1])});
    if (std::abs(area) <= 1e-14 * scale * scale) {
      throw MeshError("mesh: element " + std::to_string(k) + " is degenerate (zero area)");
    }
    if (area < 0.0) {
      std::swap(e[1], e[2]);
      if (warnings) *warnings << "warning: element " << k << " was clockwise; reoriented\n";
    }
  }

  connect(mesh);
  check_conformity(mesh);
  return mesh;
}

Mesh read_mesh(const std::filesystem::path& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("mesh: cannot open '" + path.string() + "'");
  try {
    return parse_mesh(in, warnings);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

void connect(Mesh& mesh) {
  const int K = mesh.num_elements();
  mesh.EToE.assign(K, {0, 0, 0});
  mesh.EToF.assign(K, {0, 1, 2});
  for (int k = 0; k < K; ++k) mesh.EToE[k] = {k, k, k};

  std::map<std::pair<int, int>, std::pair<int, int>> open_faces;
  std::map<std::pair<int, int>, int> uses;
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < 3; ++f) {
      int a = mesh.EToV[k][f];
      int b = mesh.EToV[k][(f + 1) % 3];
      if (a > b) std::swap(a, b);
      const auto key = std::make_pair(a, b);
      if (++uses[key] > 2) {
        throw MeshError("connect: face (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") is shared by more than two elements");
      }
      const auto it = open_faces.find(key);
      if (it == open_faces.end()) {
        open_faces.emplace(key, std::make_pair(k, f));
      } else {
        const auto [k2, f2] = it->second;
        mesh.EToE[k][f] = k2;
        mesh.EToF[k][f] = f2;
        mesh.EToE[k2][f2] = k;
        mesh.EToF[k2][f2] = f;
        open_faces.erase(it);
      }
    }
  }
}

GeomFactors build_geometry(const Mesh& mesh) {
  const int K = mesh.num_elements();
  GeomFactors g;
  g.rx.resize(K);
  g.ry.resize(K);
  g.sx.resize(K);
  g.sy.resize(K);
  g.detA.resize(K);
  g.nx.resize(K);
  g.ny.resize(K);
  g.Fsc.resize(K);
  g.face_length.resize(K);

  for (int k = 0; k < K; ++k) {
    const auto& v1 = mesh.vertices[mesh.EToV[k][0]];
    const auto& v2 = mesh.vertices[mesh.EToV[k][1]];
    const auto& v3 = mesh.vertices[mesh.EToV[k][2]];
    // x(r, s) = -(r+s)/2 v1 + (1+r)/2 v2 + (1+s)/2 v3
    const double xr = 0.5 * (v2[0] - v1[0]);
    const double xs = 0.5 * (v3[0] - v1[0]);
    const double yr = 0.5 * (v2[1] - v1[1]);
    const double ys = 0.5 * (v3[1] - v1[1]);
    const double det = xr * ys - xs * yr;
    if (!(det > 0.0)) {
      throw MeshError("build_geometry: element " + std::to_string(k) +
                      (det == 0.0 ? " is degenerate" : " is clockwise"));
    }
    g.detA[k] = det;
    g.rx[k] = ys / det;
    g.ry[k] = -xs / det;
    g.sx[k] = -yr / det;
    g.sy[k] = xr / det;

    const std::array<const std::array<double, 2>*, 3> v = {&v1, &v2, &v3};
    for (int f = 0; f < 3; ++f) {
      const auto& a = *v[f];
      const auto& b = *v[(f + 1) % 3];
      const double dx = b[0] - a[0];
      const double dy = b[1] - a[1];
      const double len = std::hypot(dx, dy);
      g.nx[k][f] = dy / len;
      g.ny[k][f] = -dx / len;
      g.face_length[k][f] = len;
      // Face operators live on a parameter interval of length 2.
      g.Fsc[k][f] = 0.5 * len / det;
    }
  }
  return g;
}

std::vector<std::array<double, 2>> node_coordinates(const Mesh& mesh, const ReferenceElement& ref) {
  const int K = mesh.num_elements();
  std::vector<std::array<double, 2>> xy(static_cast<std::size_t>(K) * ref.Np);
  for (int k = 0; k < K; ++k) {
    const auto& v1 = mesh.vertices[mesh.EToV[k][0]];
    const auto& v2 = mesh.vertices[mesh.EToV[k][1]];
    const auto& v3 = mesh.vertices[mesh.EToV[k][2]];
    for (int n = 0; n < ref.Np; ++n) {
      const double r = ref.r(n);
      const double s = ref.s(n);
      const double l1 = -0.5 * (r + s), l2 = 0.5 * (1.0 + r), l3 = 0.5 * (1.0 + s);
      xy[static_cast<std::size_t>(k) * ref.Np + n] = {l1 * v1[0] + l2 * v2[0] + l3 * v3[0],
                                                      l1 * v1[1] + l2 * v2[1] + l3 * v3[1]};
    }
  }
  return xy;
}

SurfInfo build_surfinfo(const Mesh& mesh, const GeomFactors& geom, const ReferenceElement& ref) {
  const int K = mesh.num_elements();
  const int Np = ref.Np;
  const int Nfp = ref.Nfp;
  const auto xy = node_coordinates(mesh, ref);

  SurfInfo surf;
  surf.Nfp = Nfp;
  const std::size_t count = static_cast<std::size_t>(K) * 3 * Nfp;
  surf.idM.resize(count);
  surf.idP.resize(count);
  surf.nx.resize(count);
  surf.ny.resize(count);
  surf.Fsc.resize(count);
  surf.Bsc.resize(count);

  std::size_t rec = 0;
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < 3; ++f) {
      const int k2 = mesh.EToE[k][f];
      const int f2 = mesh.EToF[k][f];
      const bool boundary = mesh.is_boundary(k, f);
      const double tol = 1e-8 * std::max(1.0, geom.face_length[k][f]);
      for (int i = 0; i < Nfp; ++i, ++rec) {
        const int idM = k * Np + ref.face_mask[f][i];
        int idP = idM;
        if (!boundary) {
          const auto& p = xy[idM];
          idP = -1;
          for (int j = 0; j < Nfp; ++j) {
            const int cand = k2 * Np + ref.face_mask[f2][j];
            const auto& q = xy[cand];
            if (std::hypot(p[0] - q[0], p[1] - q[1]) < tol) {
              idP = cand;
              break;
            }
          }
          if (idP < 0) {
            throw MeshError("build_surfinfo: trace point " + std::to_string(i) + " of element " +
                            std::to_string(k) + " face " + std::to_string(f) +
                            " has no partner on element " + std::to_string(k2));
          }
        }
        surf.idM[rec] = idM;
        surf.idP[rec] = idP;
        surf.nx[rec] = geom.nx[k][f];
        surf.ny[rec] = geom.ny[k][f];
        surf.Fsc[rec] = geom.Fsc[k][f];
        surf.Bsc[rec] = boundary ? -1.0 : 1.0;
      }
    }
  }
  return surf;
}

}  // namespace dgtm
