#include "dgtm/timeint.hpp"

#include <algorithm>

namespace dgtm {

const RKScheme& lsrk45() {
  static const RKScheme scheme{
      5,
      {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
       -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
      {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
       1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
       2277821191437.0 / 14882151754819.0},
      {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
       2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0}};
  return scheme;
}

double estimate_dt(const GeomFactors& geom, const ReferenceElement& ref, double cfl) {
  if (!(cfl > 0.0)) throw std::invalid_argument("estimate_dt: cfl must be positive");
  double max_fsc = 0.0;
  for (const auto& face : geom.Fsc) {
    for (double f : face) max_fsc = std::max(max_fsc, f);
  }
  if (max_fsc == 0.0) throw std::invalid_argument("estimate_dt: empty geometry");
  const double np1 = ref.N + 1.0;
  return cfl * (2.0 / 3.0) / (max_fsc * np1 * np1);
}

}  // namespace dgtm
