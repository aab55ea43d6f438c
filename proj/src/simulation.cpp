#include "dgtm/driver.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

namespace dgtm {

namespace {

using Clock = std::chrono::steady_clock;

LayoutSpec layout_for(const Config& cfg, const ReferenceElement& ref, const Mesh& mesh) {
  return make_layout(ref.Np, mesh.num_elements(), cfg.align, cfg.mb_elems, cfg.waste_threshold);
}

std::string snapshot_name(long step) {
  std::ostringstream ss;
  ss << "snap_" << std::setw(6) << std::setfill('0') << step << ".vtk";
  return ss.str();
}

}  // namespace

Mesh make_mesh(const Config& cfg, std::ostream* warnings) {
  if (cfg.mesh_path) return read_mesh(*cfg.mesh_path, warnings);
  return generate_rect_mesh(cfg.rect_nx, cfg.rect_ny);
}

template <class Real>
Simulation<Real>::Simulation(const Config& cfg) : Simulation(cfg, make_mesh(cfg, &std::cerr)) {}

template <class Real>
Simulation<Real>::Simulation(const Config& cfg, Mesh mesh)
    : cfg_(cfg),
      mesh_(std::move(mesh)),
      ref_(build_reference_element(cfg.degree)),
      geom_(build_geometry(mesh_)),
      surf_(build_surfinfo(mesh_, geom_, ref_)),
      layout_(layout_for(cfg, ref_, mesh_)),
      op_(make_context<Real>(ref_, geom_, surf_, layout_, cfg.alpha, cfg.variant)),
      mass_(ref_.mass()),
      xy_(node_coordinates(mesh_, ref_)),
      q_(layout_) {
  cfg_.validate();
  if (cfg_.initial == InitialCondition::Cavity && !is_unit_square(mesh_)) {
    std::cerr << "warning: cavity reference needs the unit square; using a Gaussian pulse\n";
    cfg_.initial = InitialCondition::Pulse;
  }
  rk_ = std::make_unique<LowStorageRK<FieldSet<Real>>>(q_);
}

template <class Real>
bool Simulation<Real>::has_reference() const {
  return cfg_.initial != InitialCondition::Pulse;
}

template <class Real>
NodalFields Simulation<Real>::reference(double t) const {
  const int K = mesh_.num_elements();
  NodalFields ref(K, ref_.Np);
  switch (cfg_.initial) {
    case InitialCondition::Cavity: {
      // Material-scaled fields obey the unit system at time c t.
      const auto v = analytic_cavity(cfg_.mode_m, cfg_.mode_n, cfg_.wave_speed() * t, xy_);
      const double sh = 1.0 / std::sqrt(cfg_.mu);
      const double se = 1.0 / std::sqrt(cfg_.epsilon);
      for (std::size_t i = 0; i < xy_.size(); ++i) {
        ref[Field::Hx][i] = sh * v.hx[i];
        ref[Field::Hy][i] = sh * v.hy[i];
        ref[Field::Ez][i] = se * v.ez[i];
      }
      break;
    }
    case InitialCondition::ConstantH:
      std::fill(ref[Field::Hx].begin(), ref[Field::Hx].end(), cfg_.constant_h[0]);
      std::fill(ref[Field::Hy].begin(), ref[Field::Hy].end(), cfg_.constant_h[1]);
      break;
    case InitialCondition::Pulse:
      throw UnsupportedReference("no analytic reference for the pulse initial condition");
  }
  return ref;
}

template <class Real>
void Simulation<Real>::initialize() {
  t_ = 0.0;
  NodalFields init(mesh_.num_elements(), ref_.Np);
  if (cfg_.initial == InitialCondition::Pulse) {
    const auto box = mesh_.bounding_box();
    const double xc = 0.5 * (box[0] + box[2]);
    const double yc = 0.5 * (box[1] + box[3]);
    const double width = 0.1 * std::hypot(box[2] - box[0], box[3] - box[1]);
    for (std::size_t i = 0; i < xy_.size(); ++i) {
      const double dx = xy_[i][0] - xc, dy = xy_[i][1] - yc;
      init[Field::Ez][i] = std::exp(-(dx * dx + dy * dy) / (width * width));
    }
  } else {
    init = reference(0.0);
  }
  const double sh = std::sqrt(cfg_.mu), se = std::sqrt(cfg_.epsilon);
  for (auto& v : init[Field::Hx]) v *= sh;
  for (auto& v : init[Field::Hy]) v *= sh;
  for (auto& v : init[Field::Ez]) v *= se;
  q_.set_zero();
  scatter(init, q_);
}

template <class Real>
NodalFields Simulation<Real>::physical_state() const {
  NodalFields out = gather(q_);
  const double sh = 1.0 / std::sqrt(cfg_.mu), se = 1.0 / std::sqrt(cfg_.epsilon);
  for (auto& v : out[Field::Hx]) v *= sh;
  for (auto& v : out[Field::Hy]) v *= sh;
  for (auto& v : out[Field::Ez]) v *= se;
  return out;
}

template <class Real>
void Simulation<Real>::rhs(const FieldSet<Real>& q, FieldSet<Real>& out) {
  op_(q, out);
  const double c = cfg_.wave_speed();
  if (c != 1.0) {
    const Real rc = static_cast<Real>(c);
    for (auto& d : out.data) {
      for (auto& v : d) v *= rc;
    }
  }
}

template <class Real>
void Simulation<Real>::step(double dt, long step_index) {
  rk_->step(
      q_, [this](const FieldSet<Real>& q, double, FieldSet<Real>& out) { rhs(q, out); }, t_, dt,
      step_index);
  t_ += dt;
}

template <class Real>
double Simulation<Real>::energy() const {
  const int Np = ref_.Np;
  double e = 0.0;
  Eigen::VectorXd u(Np);
  for (int k = 0; k < mesh_.num_elements(); ++k) {
    double ek = 0.0;
    for (int f = 0; f < 3; ++f) {
      for (int n = 0; n < Np; ++n) u(n) = static_cast<double>(q_.at(static_cast<Field>(f), k, n));
      ek += u.dot(mass_ * u);
    }
    e += geom_.detA[k] * ek;
  }
  return 0.5 * e;
}

template <class Real>
std::array<double, 3> Simulation<Real>::l2_error(const NodalFields& reference) const {
  const NodalFields now = physical_state();
  const int Np = ref_.Np;
  std::array<double, 3> err = {0.0, 0.0, 0.0};
  Eigen::VectorXd e(Np);
  for (int f = 0; f < 3; ++f) {
    for (int k = 0; k < mesh_.num_elements(); ++k) {
      for (int n = 0; n < Np; ++n) {
        const std::size_t id = static_cast<std::size_t>(k) * Np + n;
        e(n) = now.data[f][id] - reference.data[f][id];
      }
      err[f] += geom_.detA[k] * e.dot(mass_ * e);
    }
    err[f] = std::sqrt(err[f]);
  }
  return err;
}

template <class Real>
std::array<double, 3> Simulation<Real>::l2_error(double t) const {
  return l2_error(reference(t));
}

template <class Real>
std::pair<long, double> Simulation<Real>::plan_steps() const {
  const double dt = estimate_dt(geom_, ref_, cfg_.cfl) / cfg_.wave_speed();
  if (cfg_.final_time == 0.0) return {0, dt};
  const long n = static_cast<long>(std::ceil(cfg_.final_time / dt - 1e-9));
  return {n, cfg_.final_time / static_cast<double>(n)};
}

template class Simulation<float>;
template class Simulation<double>;

void RunReport::write_csv(std::ostream& out) const {
  out << "time,err_Hx,err_Hy,err_Ez,energy,rhs_ms\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.time << ',' << r.err[0] << ',' << r.err[1] << ',' << r.err[2] << ',' << r.energy
        << ',' << r.rhs_ms << '\n';
  }
}

namespace {

template <class Real>
RunReport run_impl(const Config& cfg, const StepObserver& observer) {
  Simulation<Real> sim(cfg);
  sim.initialize();
  const auto [nsteps, dt] = sim.plan_steps();

  RunReport report;
  report.K = sim.mesh().num_elements();
  report.Np = sim.ref().Np;
  report.steps = nsteps;
  report.dt = dt;
  report.has_reference = sim.has_reference();

  if (cfg.write_files) std::filesystem::create_directories(cfg.out_dir);

  const int stages = lsrk45().stages;
  double total_seconds = 0.0;
  double window_seconds = 0.0;
  long window_steps = 0;

  auto record = [&](long step) {
    Snapshot row;
    row.step = step;
    row.time = sim.time();
    if (report.has_reference) {
      row.err = sim.l2_error(sim.time());
    } else {
      row.err.fill(std::numeric_limits<double>::quiet_NaN());
    }
    row.energy = sim.energy();
    row.rhs_ms = window_steps > 0 ? 1e3 * window_seconds / (window_steps * stages) : 0.0;
    report.rows.push_back(row);
    window_seconds = 0.0;
    window_steps = 0;
    if (cfg.write_files) {
      write_vtk(sim.physical_state(), sim.mesh(), sim.ref(), cfg.out_dir / snapshot_name(step),
                sim.time());
    }
  };

  record(0);
  for (long s = 1; s <= nsteps; ++s) {
    const auto t0 = Clock::now();
    sim.step(dt, s);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    total_seconds += secs;
    window_seconds += secs;
    ++window_steps;
    if (observer) observer(s, sim.time(), sim.energy());
    if (s == nsteps || (cfg.snap_every > 0 && s % cfg.snap_every == 0)) record(s);
  }

  const double calls = static_cast<double>(nsteps) * stages;
  if (calls > 0 && total_seconds > 0.0) {
    report.mean_rhs_ms = 1e3 * total_seconds / calls;
    report.dof_throughput = static_cast<double>(report.K) * report.Np * calls / total_seconds;
    report.gflops = rhs_flops(cfg.degree, report.K) * calls / total_seconds * 1e-9;
  }

  if (cfg.write_files) {
    std::ofstream csv(cfg.out_dir / "report.csv");
    if (!csv) throw Error("cannot write '" + (cfg.out_dir / "report.csv").string() + "'");
    report.write_csv(csv);
  }
  return report;
}

}  // namespace

RunReport run_simulation(const Config& cfg, const StepObserver& observer) {
  cfg.validate(&std::cerr);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  if (cfg.precision == Precision::Double) return run_impl<double>(cfg, observer);
  return run_impl<float>(cfg, observer);
}

std::vector<ConvergenceRow> convergence_study(const Config& cfg,
                                              const std::vector<int>& refinements) {
  if (refinements.size() < 3) {
    throw std::invalid_argument("convergence_study: need at least three refinement levels");
  }
  if (cfg.initial == InitialCondition::Pulse) {
    throw UnsupportedReference("convergence_study: the pulse has no analytic reference");
  }
  std::vector<ConvergenceRow> rows;
  for (int cells : refinements) {
    Config c = cfg;
    c.mesh_path.reset();
    c.rect_nx = cells;
    c.rect_ny = cells;
    c.write_files = false;
    c.snap_every = 0;
    const RunReport report = run_simulation(c);

    ConvergenceRow row;
    row.cells = cells;
    row.h = 1.0 / cells;
    row.err = report.rows.back().err;
    row.error = std::sqrt(row.err[0] * row.err[0] + row.err[1] * row.err[1] +
                          row.err[2] * row.err[2]);
    row.order = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : std::log(rows.back().error / row.error) / std::log(rows.back().h / row.h);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dgtm
