// Times the serial reference RHS against the OpenMP variants.
//
//   bench_kernels [cells-per-side] [max-degree] [reps]

#include "dgtm/kernels.hpp"
#include "dgtm/layout.hpp"
#include "dgtm/mesh.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

template <class Real>
double median_ms(dgtm::MaxwellOperator<Real>& op, const dgtm::FieldSet<Real>& q,
                 dgtm::FieldSet<Real>& out, int reps) {
  op(q, out);
  std::vector<double> ms(reps);
  for (auto& m : ms) {
    const auto t0 = std::chrono::steady_clock::now();
    op(q, out);
    m = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  std::nth_element(ms.begin(), ms.begin() + reps / 2, ms.end());
  return ms[reps / 2];
}

int main(int argc, char** argv) {
  const int cells = argc > 1 ? std::atoi(argv[1]) : 64;
  const int max_degree = argc > 2 ? std::atoi(argv[2]) : 6;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 20;
  if (argc > 4 || cells < 1 || max_degree < 1 || max_degree > dgtm::kMaxDegree || reps < 1) {
    std::fprintf(stderr, "usage: %s [cells-per-side >= 1] [max-degree 1..%d] [reps >= 1]\n",
                 argv[0], dgtm::kMaxDegree);
    return 2;
  }
  using Real = dgtm::real_t;

  const dgtm::Mesh mesh = dgtm::generate_rect_mesh(cells, cells);
  const auto geom = dgtm::build_geometry(mesh);
  std::printf("K=%d  threads=%d  precision=%s\n", mesh.num_elements(), omp_get_max_threads(),
              sizeof(Real) == 8 ? "double" : "single");
  std::printf("%3s %4s %-16s %4s %10s %8s %10s\n", "N", "Np", "variant", "mb", "ms/rhs",
              "speedup", "GFlop/s");

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int N = 1; N <= max_degree; ++N) {
    const auto ref = dgtm::build_reference_element(N);
    const auto surf = dgtm::build_surfinfo(mesh, geom, ref);
    const auto layout = dgtm::make_layout(ref.Np, mesh.num_elements());
    dgtm::NodalFields state(mesh.num_elements(), ref.Np);
    for (auto& d : state.data) {
      for (auto& v : d) v = dist(rng);
    }
    dgtm::FieldSet<Real> q(layout), out(layout);
    dgtm::scatter(state, q);

    double serial_ms = 0.0;
    for (auto variant : dgtm::kAllVariants) {
      dgtm::MaxwellOperator<Real> op(
          dgtm::make_context<Real>(ref, geom, surf, layout, 1.0, variant));
      const double ms = median_ms(op, q, out, reps);
      if (variant == dgtm::KernelVariant::Serial) serial_ms = ms;
      const double gflops = dgtm::rhs_flops(N, mesh.num_elements()) / (ms * 1e-3) * 1e-9;
      std::printf("%3d %4d %-16s %4d %10.4f %8.2f %10.2f\n", N, ref.Np,
                  std::string(dgtm::to_string(variant)).c_str(), layout.mb_elems, ms,
                  serial_ms / ms, gflops);
    }
  }
  return 0;
}
