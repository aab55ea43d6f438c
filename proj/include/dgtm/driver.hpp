#pragma once

#include "dgtm/kernels.hpp"
#include "dgtm/layout.hpp"
#include "dgtm/mesh.hpp"
#include "dgtm/refelem.hpp"
#include "dgtm/timeint.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dgtm {

/// Raised when an analytic reference is requested on a domain it does not
/// describe.
class UnsupportedReference : public Error {
 public:
  using Error::Error;
};

enum class InitialCondition {
  Cavity,     ///< resonant PEC mode (m, n) of the unit square
  ConstantH,  ///< Hx, Hy constant, Ez = 0; a steady state under PEC
  Pulse,      ///< Gaussian Ez bump at the domain centroid, H = 0
};

enum class Precision { Single, Double };

struct Config {
  std::optional<std::filesystem::path> mesh_path;  ///< otherwise a rect mesh
  int rect_nx = 8;
  int rect_ny = 8;
  int degree = 4;
  double alpha = 1.0;
  double epsilon = 1.0;
  double mu = 1.0;
  double cfl = 1.0;
  double final_time = 1.0;
  int align = kDefaultAlign;
  double waste_threshold = kDefaultWasteThreshold;
  std::optional<int> mb_elems;  ///< nullopt = auto
  int snap_every = 0;           ///< 0 disables intermediate snapshots
  std::filesystem::path out_dir = "out";
  bool write_files = true;
  int mode_m = 1;
  int mode_n = 1;
  InitialCondition initial = InitialCondition::Cavity;
  std::array<double, 2> constant_h = {0.3, -0.7};
  KernelVariant variant = KernelVariant::FieldInLocal;
#ifdef DGTM_WIDE_PRECISION
  Precision precision = Precision::Double;
#else
  Precision precision = Precision::Single;
#endif
  int threads = 0;  ///< 0 keeps the OpenMP default
  int tune_warmup = 3;
  int tune_reps = 20;

  /// Applies one `key = value` setting; keys match the CLI flag names
  /// (mesh, rect, degree, alpha, cfl, final-time, align, mb, snap-every,
  /// out, mode, epsilon, mu, waste-threshold, initial, variant, precision,
  /// threads, reps, warmup).
  void set(const std::string& key, const std::string& value);

  /// Checks ranges; soft problems are written to `warnings`.
  void validate(std::ostream* warnings = nullptr) const;

  double wave_speed() const;
};

/// Reads a flat `key = value` file; '#' starts a comment.
void load_config(const std::filesystem::path& path, Config& cfg);
void parse_config(std::istream& in, Config& cfg, const std::string& source = "<config>");

struct FieldValues {
  std::vector<double> hx, hy, ez;
};

/// Resonant TM mode of the PEC unit square, unit material constants.
FieldValues analytic_cavity(int m, int n, double t, const std::vector<std::array<double, 2>>& points);

inline double cavity_omega(int m, int n) {
  return 3.14159265358979323846 * std::sqrt(static_cast<double>(m * m + n * n));
}

bool is_unit_square(const Mesh& mesh);

struct Snapshot {
  long step = 0;
  double time = 0.0;
  std::array<double, 3> err = {0.0, 0.0, 0.0};  ///< NaN without a reference
  double energy = 0.0;
  double rhs_ms = 0.0;  ///< mean wall-clock per RHS since the previous row
};

struct RunReport {
  std::vector<Snapshot> rows;
  int K = 0;
  int Np = 0;
  long steps = 0;
  double dt = 0.0;
  bool has_reference = false;
  double mean_rhs_ms = 0.0;
  double dof_throughput = 0.0;  ///< DOF * RHS evaluations per second
  double gflops = 0.0;          ///< estimate from rhs_flops()

  void write_csv(std::ostream& out) const;
};

/// Mesh, operators and state of one discretized problem.
template <class Real>
class Simulation {
 public:
  explicit Simulation(const Config& cfg);
  Simulation(const Config& cfg, Mesh mesh);

  const Config& config() const { return cfg_; }
  const Mesh& mesh() const { return mesh_; }
  const ReferenceElement& ref() const { return ref_; }
  const GeomFactors& geom() const { return geom_; }
  const SurfInfo& surf() const { return surf_; }
  const LayoutSpec& layout() const { return layout_; }
  const DgContext<Real>& context() const { return op_.context(); }
  bool has_reference() const;

  FieldSet<Real>& state() { return q_; }
  const FieldSet<Real>& state() const { return q_; }
  double time() const { return t_; }

  /// Initial condition from the config at t = 0.
  void initialize();
  /// Reference solution (physical fields) at time t; requires has_reference().
  NodalFields reference(double t) const;

  /// dq/dt for the physical (material-scaled) system.
  void rhs(const FieldSet<Real>& q, FieldSet<Real>& out);
  void step(double dt, long step_index);

  /// Current fields in physical units (state is kept material-scaled).
  NodalFields physical_state() const;

  double energy() const;
  std::array<double, 3> l2_error(double t) const;
  std::array<double, 3> l2_error(const NodalFields& reference) const;

  /// Timestep from estimate_dt, shrunk so that final_time is hit exactly.
  std::pair<long, double> plan_steps() const;

 private:
  Config cfg_;
  Mesh mesh_;
  ReferenceElement ref_;
  GeomFactors geom_;
  SurfInfo surf_;
  LayoutSpec layout_;
  MaxwellOperator<Real> op_;
  Eigen::MatrixXd mass_;
  std::vector<std::array<double, 2>> xy_;
  FieldSet<Real> q_;
  std::unique_ptr<LowStorageRK<FieldSet<Real>>> rk_;
  double t_ = 0.0;
};

Mesh make_mesh(const Config& cfg, std::ostream* warnings = nullptr);

/// Optional per-step observer: (step, time, energy).
using StepObserver = std::function<void(long, double, double)>;

RunReport run_simulation(const Config& cfg, const StepObserver& observer = {});

struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  std::array<double, 3> err = {0.0, 0.0, 0.0};
  double error = 0.0;  ///< combined L2 error of all three fields
  double order = 0.0;  ///< NaN on the first row
};

/// Runs the configured problem on cells x cells unit-square meshes.
std::vector<ConvergenceRow> convergence_study(const Config& cfg, const std::vector<int>& refinements);

struct TuneCandidate {
  std::optional<int> mb_elems;  ///< nullopt = auto
  KernelVariant variant = KernelVariant::FieldInLocal;
};

struct TuneRow {
  TuneCandidate candidate;
  int mb_elems = 0;
  bool qualified = false;
  double max_rel_err = 0.0;
  double median_ms = 0.0;
  double dof_throughput = 0.0;
  double gflops = 0.0;
};

struct TuneResult {
  std::vector<TuneRow> rows;      ///< qualified candidates, timed
  std::vector<TuneRow> rejected;  ///< failed the oracle gate, never timed
  int chosen = -1;                ///< index into rows
  const TuneRow& best() const { return rows.at(static_cast<std::size_t>(chosen)); }
  void write_csv(std::ostream& out) const;
};

std::vector<TuneCandidate> default_tune_candidates();

/// Oracle-gates then times every candidate; picks the fastest qualified.
TuneResult benchmark_and_tune(const Config& cfg, const std::vector<TuneCandidate>& candidates);

/// Oracle gate tolerance for the given precision.
double oracle_tolerance(Precision p);

/// Max-norm relative difference max|a - b| / max|b| over all fields.
double relative_error(const NodalFields& a, const NodalFields& b);

/// Legacy ASCII VTK unstructured grid with Hx, Hy, Ez point data.
void write_vtk(const NodalFields& state, const Mesh& mesh, const ReferenceElement& ref,
               const std::filesystem::path& path, double time = 0.0);

template <class Real>
void write_vtk(const FieldSet<Real>& state, const Mesh& mesh, const ReferenceElement& ref,
               const std::filesystem::path& path, double time = 0.0) {
  write_vtk(gather(state), mesh, ref, path, time);
}

/// Sub-triangles of the nodal lattice, as local node triples.
std::vector<std::array<int, 3>> lattice_triangles(int N);

}  // namespace dgtm
