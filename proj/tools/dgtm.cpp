// Command-line driver: run, converge, tune, mesh-info.

#include "dgtm/driver.hpp"

#include <CLI11.hpp>

#include <omp.h>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct Flags {
  std::string config_file;
  std::map<std::string, std::string> scalars;
  std::vector<std::string> rect, mode;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key = value configuration file");
  cmd->add_option("--rect", f.rect, "structured unit-square mesh with NX x NY cells")
      ->expected(2);
  cmd->add_option("--mode", f.mode, "cavity mode indices M N")->expected(2);
  const char* keys[][2] = {
      {"mesh", "mesh file (NV NT / vertices / triangles)"},
      {"degree", "polynomial degree N"},
      {"alpha", "flux penalty: 1 upwind, 0 central"},
      {"cfl", "time-step safety factor"},
      {"final-time", "end time"},
      {"align", "padding granularity in values"},
      {"mb", "elements per microblock: auto or a count"},
      {"snap-every", "write a snapshot every S steps (0: first and last only)"},
      {"out", "output directory"},
      {"epsilon", "permittivity"},
      {"mu", "permeability"},
      {"waste-threshold", "padding waste allowed when mb is auto"},
      {"initial", "cavity | constant | pulse"},
      {"variant", "serial | field-in-local | matrix-in-local"},
      {"precision", "single | double"},
      {"threads", "OpenMP threads (0: default)"},
  };
  for (const auto& k : keys) {
    const std::string name = k[0];
    cmd->add_option_function<std::string>(
        "--" + name, [&f, name](const std::string& v) { f.scalars[name] = v; }, k[1]);
  }
}

dgtm::Config make_config(const Flags& f) {
  dgtm::Config cfg;
  if (!f.config_file.empty()) dgtm::load_config(f.config_file, cfg);
  for (const auto& [k, v] : f.scalars) cfg.set(k, v);
  if (!f.rect.empty()) cfg.set("rect", f.rect[0] + " " + f.rect[1]);
  if (!f.mode.empty()) cfg.set("mode", f.mode[0] + " " + f.mode[1]);
  cfg.validate(&std::cerr);
  return cfg;
}

int cmd_run(const dgtm::Config& cfg) {
  const auto report = dgtm::run_simulation(cfg);
  std::printf("K=%d Np=%d steps=%ld dt=%.6e\n", report.K, report.Np, report.steps, report.dt);
  const auto& last = report.rows.back();
  if (report.has_reference) {
    std::printf("t=%.6f  L2 err Hx=%.3e Hy=%.3e Ez=%.3e  energy=%.10e\n", last.time, last.err[0],
                last.err[1], last.err[2], last.energy);
  } else {
    std::printf("t=%.6f  energy=%.10e\n", last.time, last.energy);
  }
  std::printf("rhs %.4f ms  %.3e DOF/s  ~%.2f GFlop/s\n", report.mean_rhs_ms,
              report.dof_throughput, report.gflops);
  std::printf("wrote %s\n", (cfg.out_dir / "report.csv").c_str());
  return 0;
}

int cmd_converge(const dgtm::Config& cfg, const std::vector<int>& levels) {
  const auto rows = dgtm::convergence_study(cfg, levels);
  std::printf("%8s %12s %14s %8s\n", "cells", "h", "L2 error", "order");
  for (const auto& r : rows) {
    std::printf("%8d %12.5e %14.6e %8.3f\n", r.cells, r.h, r.error, r.order);
  }
  return 0;
}

int cmd_tune(const dgtm::Config& cfg) {
  const auto result = dgtm::benchmark_and_tune(cfg, dgtm::default_tune_candidates());
  std::printf("%-16s %6s %12s %12s %12s\n", "variant", "mb", "median ms", "DOF/s", "rel err");
  for (const auto& r : result.rows) {
    std::printf("%-16s %6d %12.4f %12.3e %12.3e\n", std::string(dgtm::to_string(r.candidate.variant)).c_str(),
                r.mb_elems, r.median_ms, r.dof_throughput, r.max_rel_err);
  }
  for (const auto& r : result.rejected) {
    std::printf("rejected: %s mb=%d rel err %.3e\n",
                std::string(dgtm::to_string(r.candidate.variant)).c_str(), r.mb_elems,
                r.max_rel_err);
  }
  const auto& best = result.best();
  std::printf("chosen: %s mb=%d\n", std::string(dgtm::to_string(best.candidate.variant)).c_str(),
              best.mb_elems);
  if (cfg.write_files) std::printf("wrote %s\n", (cfg.out_dir / "tune.csv").c_str());
  return 0;
}

int cmd_mesh_info(const dgtm::Config& cfg) {
  const dgtm::Mesh mesh = dgtm::make_mesh(cfg, &std::cerr);
  const auto ref = dgtm::build_reference_element(cfg.degree);
  const auto geom = dgtm::build_geometry(mesh);
  const auto surf = dgtm::build_surfinfo(mesh, geom, ref);
  const auto layout =
      dgtm::make_layout(ref.Np, mesh.num_elements(), cfg.align, cfg.mb_elems, cfg.waste_threshold);
  const auto box = mesh.bounding_box();
  std::printf("vertices        %d\n", mesh.num_vertices());
  std::printf("elements        %d\n", mesh.num_elements());
  std::printf("boundary faces  %d\n", mesh.num_boundary_faces());
  std::printf("area            %.12g\n", mesh.total_area());
  std::printf("bbox            [%g, %g] x [%g, %g]\n", box[0], box[2], box[1], box[3]);
  std::printf("unit square     %s\n", dgtm::is_unit_square(mesh) ? "yes" : "no");
  std::printf("degree N        %d (Np=%d, Nfp=%d)\n", ref.N, ref.Np, ref.Nfp);
  std::printf("surface records %zu\n", surf.size());
  std::printf("layout          align=%d mb_elems=%d mb_size=%d K_pad=%d storage=%zu waste=%.4f\n",
              layout.align, layout.mb_elems, layout.mb_size, layout.K_pad, layout.storage_size(),
              dgtm::waste_fraction(ref.Np, layout.align, layout.mb_elems));
  std::printf("dt estimate     %.6e (cfl=%g)\n", dgtm::estimate_dt(geom, ref, cfg.cfl), cfg.cfl);
  std::printf("omp threads     %d\n", omp_get_max_threads());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nodal DG time-domain solver for 2D TM Maxwell on triangle meshes"};
  app.require_subcommand(1);

  Flags run_flags, conv_flags, tune_flags, info_flags;
  std::vector<int> levels = {4, 8, 16};

  auto* run = app.add_subcommand("run", "integrate in time, write snapshots and report.csv");
  add_common(run, run_flags);
  auto* conv = app.add_subcommand("converge", "L2 convergence study on refined unit squares");
  add_common(conv, conv_flags);
  conv->add_option("--levels", levels, "cells per side for each level")->expected(3, 32);
  auto* tune = app.add_subcommand("tune", "time layout/kernel variants, write tune.csv");
  add_common(tune, tune_flags);
  tune->add_option_function<std::string>(
      "--reps", [&](const std::string& v) { tune_flags.scalars["reps"] = v; }, "timed repetitions");
  tune->add_option_function<std::string>(
      "--warmup", [&](const std::string& v) { tune_flags.scalars["warmup"] = v; },
      "discarded warmup calls");
  auto* info = app.add_subcommand("mesh-info", "print mesh, layout and time-step summary");
  add_common(info, info_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(make_config(run_flags));
    if (*conv) return cmd_converge(make_config(conv_flags), levels);
    if (*tune) return cmd_tune(make_config(tune_flags));
    if (*info) return cmd_mesh_info(make_config(info_flags));
  } catch (const dgtm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
