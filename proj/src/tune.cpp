#include "dgtm/driver.hpp"
#include "dgtm/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

namespace dgtm {

double oracle_tolerance(Precision p) { return p == Precision::Double ? 1e-10 : 1e-4; }

double relative_error(const NodalFields& a, const NodalFields& b) {
  double diff = 0.0, scale = 0.0;
  for (int f = 0; f < 3; ++f) {
    for (std::size_t i = 0; i < b.data[f].size(); ++i) {
      diff = std::max(diff, std::abs(a.data[f][i] - b.data[f][i]));
      scale = std::max(scale, std::abs(b.data[f][i]));
    }
  }
  return scale > 0.0 ? diff / scale : diff;
}

std::vector<TuneCandidate> default_tune_candidates() {
  std::vector<TuneCandidate> out;
  const std::optional<int> mbs[] = {std::nullopt, 1, 2, 4, 8};
  for (const auto& mb : mbs) {
    for (auto v : kAllVariants) out.push_back({mb, v});
  }
  return out;
}

void TuneResult::write_csv(std::ostream& out) const {
  out << "variant,mb,mb_elems,qualified,max_rel_err,median_ms,dof_per_s,gflops,chosen\n";
  auto emit = [&](const TuneRow& r, bool chosen_row) {
    out << to_string(r.candidate.variant) << ','
        << (r.candidate.mb_elems ? std::to_string(*r.candidate.mb_elems) : std::string("auto"))
        << ',' << r.mb_elems << ',' << (r.qualified ? 1 : 0) << ',' << std::setprecision(6)
        << r.max_rel_err << ',' << r.median_ms << ',' << r.dof_throughput << ',' << r.gflops
        << ',' << (chosen_row ? 1 : 0) << '\n';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) emit(rows[i], static_cast<int>(i) == chosen);
  for (const auto& r : rejected) emit(r, false);
}

namespace {

template <class Real>
TuneResult tune_impl(const Config& cfg, const std::vector<TuneCandidate>& candidates) {
  const Mesh mesh = make_mesh(cfg, &std::cerr);
  const ReferenceElement ref = build_reference_element(cfg.degree);
  const GeomFactors geom = build_geometry(mesh);
  const SurfInfo surf = build_surfinfo(mesh, geom, ref);
  const int K = mesh.num_elements();

  NodalFields state(K, ref.Np);
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& d : state.data) {
    for (auto& v : d) v = static_cast<double>(static_cast<Real>(dist(rng)));
  }
  const NodalFields expected = dense_oracle_rhs(state, mesh, ref, cfg.alpha);
  const double tol = oracle_tolerance(cfg.precision);

  TuneResult result;
  for (const auto& cand : candidates) {
    const LayoutSpec layout =
        make_layout(ref.Np, K, cfg.align, cand.mb_elems, cfg.waste_threshold);
    MaxwellOperator<Real> op(make_context<Real>(ref, geom, surf, layout, cfg.alpha, cand.variant));
    FieldSet<Real> q(layout);
    FieldSet<Real> out(layout);
    scatter(state, q);

    TuneRow row;
    row.candidate = cand;
    row.mb_elems = layout.mb_elems;
    op(q, out);
    row.max_rel_err = relative_error(gather(out), expected);
    row.qualified = row.max_rel_err < tol && padding_is_zero(out);
    if (!row.qualified) {
      result.rejected.push_back(row);
      continue;
    }

    using Clock = std::chrono::steady_clock;
    for (int i = 0; i < cfg.tune_warmup; ++i) op(q, out);
    std::vector<double> ms(cfg.tune_reps);
    for (auto& m : ms) {
      const auto t0 = Clock::now();
      op(q, out);
      m = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
    row.median_ms = ms[ms.size() / 2];
    if (row.median_ms > 0.0) {
      row.dof_throughput = static_cast<double>(K) * ref.Np / (row.median_ms * 1e-3);
      row.gflops = rhs_flops(cfg.degree, K) / (row.median_ms * 1e-3) * 1e-9;
    }
    result.rows.push_back(row);
  }

  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.chosen < 0 || result.rows[i].median_ms < result.best().median_ms) {
      result.chosen = static_cast<int>(i);
    }
  }
  if (result.chosen < 0) throw Error("benchmark_and_tune: no candidate passed the oracle gate");
  return result;
}

}  // namespace

TuneResult benchmark_and_tune(const Config& cfg, const std::vector<TuneCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("benchmark_and_tune: no candidates");
  cfg.validate(&std::cerr);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  TuneResult result = cfg.precision == Precision::Double ? tune_impl<double>(cfg, candidates)
                                                         : tune_impl<float>(cfg, candidates);
  if (cfg.write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir / "tune.csv");
    if (!csv) throw Error("cannot write '" + (cfg.out_dir / "tune.csv").string() + "'");
    result.write_csv(csv);
  }
  return result;
}

}  // namespace dgtm
