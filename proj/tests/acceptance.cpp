// Acceptance run: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include "dgtm/driver.hpp"
#include "dgtm/oracle.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

using namespace dgtm;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Config base_config() {
  Config c;
  c.write_files = false;
  c.precision = Precision::Double;
  return c;
}

Mesh jittered(int n, unsigned seed) {
  Mesh m = generate_rect_mesh(n, n);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> j(-0.15 / n, 0.15 / n);
  for (auto& v : m.vertices) {
    if (v[0] > 0 && v[0] < 1 && v[1] > 0 && v[1] < 1) {
      v[0] += j(rng);
      v[1] += j(rng);
    }
  }
  connect(m);
  return m;
}

void operator_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int N = 1; N <= 8; ++N) {
    const ReferenceElement ref = build_reference_element(N);
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; i + j <= N; ++j) {
        for (int n = 0; n < ref.Np; ++n) {
          const double r = ref.r(n), s = ref.s(n);
          double dr = 0.0, ds = 0.0;
          for (int m = 0; m < ref.Np; ++m) {
            const double u = std::pow(ref.r(m), i) * std::pow(ref.s(m), j);
            dr += ref.Dr(n, m) * u;
            ds += ref.Ds(n, m) * u;
          }
          const double er = i > 0 ? i * std::pow(r, i - 1) * std::pow(s, j) : 0.0;
          const double es = j > 0 ? j * std::pow(r, i) * std::pow(s, j - 1) : 0.0;
          worst = std::max({worst, std::abs(dr - er), std::abs(ds - es)});
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(worst < 1e-9 && secs < 5.0, "operator exactness",
         fmt("N=1..8 max err %.2e (< 1e-9), %.2f s (< 5 s)", worst, secs));
}

void basis_orthonormality() {
  double worst = 0.0;
  const int N = 5;
  for (int i1 = 0; i1 <= N; ++i1) {
    for (int j1 = 0; i1 + j1 <= N; ++j1) {
      for (int i2 = 0; i2 <= N; ++i2) {
        for (int j2 = 0; i2 + j2 <= N; ++j2) {
          const double g = testing::integrate_triangle([&](double r, double s) {
            return eval_orthonormal_basis(i1, j1, r, s) * eval_orthonormal_basis(i2, j2, r, s);
          });
          const double expect = (i1 == i2 && j1 == j2) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs(g - expect));
        }
      }
    }
  }
  report(worst < 1e-11, "basis orthonormality", fmt("Gram - I max %.2e (< 1e-11)", worst));
}

template <class Real>
double oracle_equivalence_worst() {
  std::vector<Mesh> meshes;
  {
    Mesh one;
    one.vertices = {{0.1, -0.2}, {1.3, 0.1}, {0.4, 0.9}};
    one.EToV = {{0, 1, 2}};
    connect(one);
    meshes.push_back(one);
  }
  meshes.push_back(generate_rect_mesh(1, 1));
  meshes.push_back(jittered(2, 8));
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  for (const Mesh& m : meshes) {
    for (int N = 1; N <= 4; ++N) {
      const ReferenceElement ref = build_reference_element(N);
      const GeomFactors geom = build_geometry(m);
      const SurfInfo surf = build_surfinfo(m, geom, ref);
      const LayoutSpec layout = make_layout(ref.Np, m.num_elements());
      for (double alpha : {0.0, 1.0}) {
        const auto ctx = make_context<Real>(ref, geom, surf, layout, alpha);
        for (int trial = 0; trial < 20; ++trial) {
          NodalFields q(m.num_elements(), ref.Np);
          for (auto& d : q.data) {
            for (auto& v : d) v = static_cast<double>(static_cast<Real>(u(rng)));
          }
          FieldSet<Real> fq(layout);
          scatter(q, fq);
          const NodalFields got = gather(compute_rhs(fq, ctx));
          worst = std::max(worst, relative_error(got, dense_oracle_rhs(q, m, ref, alpha)));
        }
      }
    }
  }
  return worst;
}

void oracle_equivalence() {
  const double wd = oracle_equivalence_worst<double>();
  report(wd < 1e-10, "oracle equivalence (double)",
         fmt("K={1,2,8} N=1..4 alpha={0,1} x20: max rel %.2e (< 1e-10)", wd));
  const double wf = oracle_equivalence_worst<float>();
  report(wf < 1e-4, "oracle equivalence (float)",
         fmt("K={1,2,8} N=1..4 alpha={0,1} x20: max rel %.2e (< 1e-4)", wf));
}

void spatial_convergence() {
  const auto t0 = Clock::now();
  for (int N = 1; N <= 3; ++N) {
    Config c = base_config();
    c.degree = N;
    c.alpha = 1.0;
    c.final_time = 0.5;
    c.cfl = 0.5;
    const auto rows = convergence_study(c, {4, 8, 16});
    const double order = std::min(rows[1].order, rows[2].order);
    std::ostringstream detail;
    detail << "N=" << N << " errors";
    for (const auto& r : rows) detail << ' ' << fmt("%.3e", r.error);
    detail << fmt(" orders %.2f %.2f (>= %.1f)", rows[1].order, rows[2].order, N + 0.5);
    report(order >= N + 0.5, "spatial convergence N=" + std::to_string(N), detail.str());
  }
  const double secs = seconds_since(t0);
  report(secs < 180.0, "spatial convergence runtime", fmt("%.1f s (< 180 s)", secs));
}

void energy_behaviour() {
  for (double alpha : {0.0, 1.0}) {
    Config c = base_config();
    c.alpha = alpha;
    c.degree = 4;
    Simulation<double> sim(c);
    sim.initialize();
    const double dt = sim.plan_steps().second;
    const double e0 = sim.energy();
    double prev = e0, max_drift = 0.0, max_rise = -1.0;
    const int steps = alpha == 0.0 ? 1000 : 2000;
    for (int s = 1; s <= steps; ++s) {
      sim.step(dt, s);
      const double e = sim.energy();
      max_drift = std::max(max_drift, std::abs(e - e0) / e0);
      max_rise = std::max(max_rise, (e - prev) / e0);
      prev = e;
    }
    if (alpha == 0.0) {
      report(max_drift < 1e-6, "energy conservation alpha=0",
             fmt("1000 steps: max |E-E0|/E0 %.2e (< 1e-6)", max_drift));
    } else {
      report(max_rise <= 1e-8, "energy decay alpha=1",
             fmt("2000 steps: max per-step rise %.2e E0 (<= 1e-8)", max_rise));
      report(prev <= e0 * (1 + 1e-6), "long-run stability alpha=1",
             fmt("2000 steps: E/E0 = %.9f (<= 1 + 1e-6)", prev / e0));
    }
  }
}

NodalFields integrate(const Config& c, long steps) {
  Simulation<double> sim(c);
  sim.initialize();
  const double dt = c.final_time / static_cast<double>(steps);
  for (long s = 1; s <= steps; ++s) sim.step(dt, s);
  return sim.physical_state();
}

void temporal_order() {
  // Reference: 32x smaller step, same discretization.
  Config c = base_config();
  c.degree = 6;
  c.rect_nx = c.rect_ny = 4;
  c.mode_m = c.mode_n = 3;
  c.final_time = 1.0;
  Simulation<double> probe(c);
  const long n0 = probe.plan_steps().first;
  const NodalFields ref = integrate(c, 32 * n0);
  double errs[3];
  for (int i = 0; i < 3; ++i) {
    const NodalFields q = integrate(c, n0 << i);
    Simulation<double> tmp(c);
    scatter(q, tmp.state());
    const auto e = tmp.l2_error(ref);
    errs[i] = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  report(std::min(o1, o2) >= 3.7, "temporal order",
         fmt("errors %.3e %.3e %.3e", errs[0], errs[1], errs[2]) + fmt(", orders %.2f %.2f (>= 3.7)", o1, o2));
}

void layout_properties() {
  bool ok = padded_size(10, 16) == 16 && padded_size(16, 16) == 16 && padded_size(21, 16) == 32 &&
            choose_microblock(6, 16, 0.10, 16) == 8 && choose_microblock(16, 16, 0.10, 16) == 1 &&
            choose_microblock(10, 16, 0.10, 16) == 8;
  const LayoutSpec a = make_layout(10, 4, 16, 1), b = make_layout(6, 8, 16, 8);
  ok = ok && a.dof_index(0, 0) == 0 && a.dof_index(1, 0) == 16 && b.dof_index(7, 5) == 47;
  report(ok, "layout examples", "padded_size, choose_microblock, dof_index");

  double worst_waste = 0.0;
  for (int N = 1; N <= kMaxDegree; ++N) {
    const int Np = num_nodes(N);
    const LayoutSpec L = make_layout(Np, 100);
    worst_waste = std::max(worst_waste, waste_fraction(Np, L.align, L.mb_elems));
  }
  report(worst_waste <= 0.10, "auto microblock waste", fmt("N=1..15 worst %.3f (<= 0.10)", worst_waste));

  long checked = 0;
  bool padding_ok = true;
  auto check_runs = [&](auto tag, KernelVariant v, std::optional<int> mb) {
    using Real = decltype(tag);
    Config c = base_config();
    c.rect_nx = 3;
    c.rect_ny = 2;
    c.degree = 3;
    c.variant = v;
    c.mb_elems = mb;
    Simulation<Real> sim(c);
    sim.initialize();
    FieldSet<Real> out(sim.layout());
    for (int s = 0; s < 20; ++s) {
      sim.rhs(sim.state(), out);
      padding_ok = padding_ok && padding_is_zero(out);
      ++checked;
      sim.step(1e-3, s + 1);
      padding_ok = padding_ok && padding_is_zero(sim.state());
    }
  };
  for (auto v : kAllVariants) {
    for (std::optional<int> mb : {std::optional<int>{}, std::optional<int>{1}, std::optional<int>{4}}) {
      check_runs(0.0f, v, mb);
      check_runs(0.0, v, mb);
    }
  }
  report(padding_ok, "padding stays zero", fmt("%.0f RHS evaluations plus steps", double(checked)));
}

void tuner_soundness() {
  Config c = base_config();
  c.degree = 4;
  c.rect_nx = c.rect_ny = 4;
  c.tune_reps = 5;
  c.tune_warmup = 1;
  const TuneResult r = benchmark_and_tune(c, default_tune_candidates());
  bool gate = r.rejected.empty() && !r.rows.empty();
  double worst = 0.0;
  for (const auto& row : r.rows) {
    gate = gate && row.qualified && row.max_rel_err < 1e-10;
    worst = std::max(worst, row.max_rel_err);
  }
  report(gate, "tuner oracle gate",
         fmt("%.0f of %.0f timed, max rel err %.2e (< 1e-10)", double(r.rows.size()),
             double(default_tune_candidates().size()), worst));

  Config chosen = c, def = c;
  chosen.variant = r.best().candidate.variant;
  chosen.mb_elems = r.best().candidate.mb_elems;
  Simulation<double> a(chosen), b(def);
  a.initialize();
  b.initialize();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  NodalFields q(a.mesh().num_elements(), a.ref().Np);
  for (auto& d : q.data) {
    for (auto& v : d) v = u(rng);
  }
  scatter(q, a.state());
  scatter(q, b.state());
  FieldSet<double> oa(a.layout()), ob(b.layout());
  a.rhs(a.state(), oa);
  b.rhs(b.state(), ob);
  const bool same = gather(oa).data == gather(ob).data;
  report(same, "tuner selection bit-identical",
         std::string("chosen ") + std::string(to_string(chosen.variant)) + " mb=" +
             std::to_string(r.best().mb_elems) + " vs default " + std::string(to_string(def.variant)));
}

}  // namespace

int main() {
  operator_exactness();
  basis_orthonormality();
  oracle_equivalence();
  spatial_convergence();
  energy_behaviour();
  temporal_order();
  layout_properties();
  tuner_soundness();
  std::printf("%s: %d failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures;
}
