#include "dgtm/driver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgtm {

FieldValues analytic_cavity(int m, int n, double t,
                            const std::vector<std::array<double, 2>>& points) {
  if (m < 1 || n < 1) throw std::invalid_argument("analytic_cavity: mode indices must be >= 1");
  const double pi = std::numbers::pi;
  const double omega = cavity_omega(m, n);
  const double ct = std::cos(omega * t);
  const double st = std::sin(omega * t);

  FieldValues v;
  v.hx.resize(points.size());
  v.hy.resize(points.size());
  v.ez.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i][0];
    const double y = points[i][1];
    const double sx = std::sin(m * pi * x), cx = std::cos(m * pi * x);
    const double sy = std::sin(n * pi * y), cy = std::cos(n * pi * y);
    v.ez[i] = sx * sy * ct;
    v.hx[i] = -(n * pi / omega) * sx * cy * st;
    v.hy[i] = (m * pi / omega) * cx * sy * st;
  }
  return v;
}

bool is_unit_square(const Mesh& mesh) {
  const auto box = mesh.bounding_box();
  constexpr double tol = 1e-12;
  return std::abs(box[0]) < tol && std::abs(box[1]) < tol && std::abs(box[2] - 1.0) < tol &&
         std::abs(box[3] - 1.0) < tol && std::abs(mesh.total_area() - 1.0) < 1e-10;
}

}  // namespace dgtm
