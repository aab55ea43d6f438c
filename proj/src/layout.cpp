#include "dgtm/layout.hpp"

#include <string>

namespace dgtm {

double waste_fraction(int Np, int align, int mb) {
  const std::size_t used = static_cast<std::size_t>(Np) * mb;
  const std::size_t size = padded_size(used, align);
  return static_cast<double>(size - used) / static_cast<double>(size);
}

int choose_microblock(int Np, int align, double waste_threshold, int mb_max) {
  if (Np < 1 || align < 1 || mb_max < 1) {
    throw LayoutError("choose_microblock: Np, align and mb_max must be positive");
  }
  int best = 1;
  double best_waste = waste_fraction(Np, align, 1);
  for (int mb = 1; mb <= mb_max; mb *= 2) {
    const double w = waste_fraction(Np, align, mb);
    if (w <= waste_threshold) return mb;
    if (w < best_waste) {
      best = mb;
      best_waste = w;
    }
  }
  return best;
}

std::size_t LayoutSpec::dof_index(int k, int n) const {
  if (k < 0 || k >= K || n < 0 || n >= Np) {
    throw LayoutError("dof_index: (" + std::to_string(k) + ", " + std::to_string(n) +
                      ") outside K=" + std::to_string(K) + ", Np=" + std::to_string(Np));
  }
  return offset(k, n);
}

LayoutSpec make_layout(int Np, int K, int align, std::optional<int> mb_elems,
                       double waste_threshold) {
  if (Np < 1 || K < 0 || align < 1) throw LayoutError("make_layout: invalid sizes");
  if (mb_elems && *mb_elems < 1) throw LayoutError("make_layout: mb_elems must be >= 1");
  LayoutSpec L;
  L.Np = Np;
  L.K = K;
  L.align = align;
  L.mb_elems = mb_elems ? *mb_elems : choose_microblock(Np, align, waste_threshold);
  L.mb_size = static_cast<int>(padded_size(static_cast<std::size_t>(Np) * L.mb_elems, align));
  L.K_pad = static_cast<int>(padded_size(K, L.mb_elems));
  return L;
}

}  // namespace dgtm
