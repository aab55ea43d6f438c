#include "dgtm/driver.hpp"

#include <fstream>
#include <iomanip>

namespace dgtm {

std::vector<std::array<int, 3>> lattice_triangles(int N) {
  // Node (row i, column j) sits at offset(i) + j, rows running along s.
  std::vector<int> row_start(N + 2, 0);
  for (int i = 0; i <= N; ++i) row_start[i + 1] = row_start[i] + (N + 1 - i);
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N - i; ++j) {
      const int a = row_start[i] + j;
      const int b = a + 1;
      const int c = row_start[i + 1] + j;
      tris.push_back({a, b, c});
      if (j < N - i - 1) tris.push_back({b, c + 1, c});
    }
  }
  return tris;
}

void write_vtk(const NodalFields& state, const Mesh& mesh, const ReferenceElement& ref,
               const std::filesystem::path& path, double time) {
  std::ofstream out(path);
  if (!out) throw Error("write_vtk: cannot open '" + path.string() + "'");

  const int K = mesh.num_elements();
  const int Np = ref.Np;
  const std::size_t npts = static_cast<std::size_t>(K) * Np;
  const auto xy = node_coordinates(mesh, ref);
  const auto tris = lattice_triangles(ref.N);
  const std::size_t ncells = static_cast<std::size_t>(K) * tris.size();

  out << "# vtk DataFile Version 3.0\n";
  out << "dgtm TM Maxwell N=" << ref.N << " t=" << std::setprecision(10) << time << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npts << " double\n";
  out << std::setprecision(12);
  for (const auto& p : xy) out << p[0] << ' ' << p[1] << " 0\n";

  out << "CELLS " << ncells << ' ' << 4 * ncells << '\n';
  for (int k = 0; k < K; ++k) {
    const int base = k * Np;
    for (const auto& t : tris) out << "3 " << base + t[0] << ' ' << base + t[1] << ' ' << base + t[2] << '\n';
  }
  out << "CELL_TYPES " << ncells << '\n';
  for (std::size_t c = 0; c < ncells; ++c) out << "5\n";

  out << "POINT_DATA " << npts << '\n' << std::setprecision(6);
  for (int f = 0; f < 3; ++f) {
    out << "SCALARS " << kFieldNames[f] << " double 1\nLOOKUP_TABLE default\n";
    for (double v : state.data[f]) out << v << '\n';
  }
  if (!out) throw Error("write_vtk: write failed for '" + path.string() + "'");
}

}  // namespace dgtm
