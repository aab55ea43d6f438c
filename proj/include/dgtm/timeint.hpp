#pragma once

#include "dgtm/error.hpp"
#include "dgtm/layout.hpp"
#include "dgtm/mesh.hpp"
#include "dgtm/refelem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgtm {

/// Williamson-form low-storage Runge-Kutta coefficients:
///   res <- a_i res + dt f(q, t + c_i dt);  q <- q + b_i res
struct RKScheme {
  int stages = 0;
  std::vector<double> a, b, c;
};

/// Five-stage, fourth-order scheme of Carpenter and Kennedy.
const RKScheme& lsrk45();

/// Stable step heuristic: cfl * (2/3) / ((N+1)^2 * max Fsc).
double estimate_dt(const GeomFactors& geom, const ReferenceElement& ref, double cfl = 1.0);

// State kernels used by rk_step. Overloads exist for FieldSet and for plain
// vectors (scalar ODE tests).

template <class Real>
void lsrk_update(FieldSet<Real>& res, FieldSet<Real>& q, const FieldSet<Real>& k, double a,
                 double dt, double b) {
  const Real ra = static_cast<Real>(a), rdt = static_cast<Real>(dt), rb = static_cast<Real>(b);
  const bool first = a == 0.0;
  for (int f = 0; f < 3; ++f) {
    Real* r = res.data[f].data();
    Real* y = q.data[f].data();
    const Real* kk = k.data[f].data();
    const long n = static_cast<long>(q.data[f].size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      r[i] = first ? rdt * kk[i] : ra * r[i] + rdt * kk[i];
      y[i] += rb * r[i];
    }
  }
}

inline void lsrk_update(std::vector<double>& res, std::vector<double>& q,
                        const std::vector<double>& k, double a, double dt, double b) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    res[i] = a == 0.0 ? dt * k[i] : a * res[i] + dt * k[i];
    q[i] += b * res[i];
  }
}

template <class Real>
bool all_finite(const FieldSet<Real>& q) {
  for (const auto& d : q.data) {
    for (Real v : d) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

inline bool all_finite(const std::vector<double>& q) {
  for (double v : q) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Advances q by one step of `scheme`. `rhs(q, t, out)` writes dq/dt into
/// out. `res` and `k` are scratch states shaped like q; res need not be
/// initialized. Throws DivergenceError naming `step` on non-finite output.
template <class State, class Rhs>
void rk_step(State& q, State& res, State& k, Rhs&& rhs, double t, double dt,
             const RKScheme& scheme, long step = 0) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk_step: dt must be positive");
  for (int i = 0; i < scheme.stages; ++i) {
    rhs(q, t + scheme.c[i] * dt, k);
    lsrk_update(res, q, k, scheme.a[i], dt, scheme.b[i]);
  }
  if (!all_finite(q)) {
    throw DivergenceError("time integration diverged at step " + std::to_string(step), step);
  }
}

/// Owns the two scratch registers of a low-storage integrator.
template <class State>
class LowStorageRK {
 public:
  explicit LowStorageRK(const State& shape, const RKScheme& scheme = lsrk45())
      : scheme_(scheme), res_(shape), k_(shape) {}

  template <class Rhs>
  void step(State& q, Rhs&& rhs, double t, double dt, long step_index = 0) {
    rk_step(q, res_, k_, std::forward<Rhs>(rhs), t, dt, scheme_, step_index);
  }
  const RKScheme& scheme() const { return scheme_; }

 private:
  RKScheme scheme_;
  State res_;
  State k_;
};

}  // namespace dgtm
