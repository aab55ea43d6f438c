#pragma once

#include "dgtm/layout.hpp"
#include "dgtm/mesh.hpp"
#include "dgtm/refelem.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace dgtm {

/// How the element-local matrix products are organized.
///
/// Serial      one thread, element by element; the reference path.
/// FieldInLocal  OpenMP over microblocks; each element's fields are staged
///             locally and the matrix rows are streamed past them.
/// MatrixInLocal OpenMP over microblocks; each matrix column is applied to
///             every element of the microblock before moving on.
///
/// All variants accumulate every output in the same order, so they agree
/// bit for bit.
enum class KernelVariant { Serial, FieldInLocal, MatrixInLocal };

inline constexpr std::array<KernelVariant, 3> kAllVariants = {
    KernelVariant::Serial, KernelVariant::FieldInLocal, KernelVariant::MatrixInLocal};

std::string_view to_string(KernelVariant v);
KernelVariant parse_variant(std::string_view name);

/// Everything the right-hand side kernels read, converted to Real and
/// padded to the layout's K_pad.
template <class Real>
struct DgContext {
  LayoutSpec layout;
  int N = 0;
  int Np = 0;
  int Nfp = 0;
  Real alpha = Real(1);
  KernelVariant variant = KernelVariant::FieldInLocal;

  std::vector<Real> Dr, Ds, DrT, DsT;  // Np x Np row-major, plus transposes
  std::vector<Real> LIFT, LIFTT;       // Np x 3Nfp row-major, plus transpose
  std::vector<Real> rx, ry, sx, sy;    // K_pad; ghosts carry the identity map

  // Surface records, element-major; idM/idP are storage offsets.
  std::vector<std::size_t> idM, idP;
  std::vector<Real> nx, ny, Fsc, Bsc;

  std::size_t num_records() const { return idM.size(); }
};

template <class Real>
DgContext<Real> make_context(const ReferenceElement& ref, const GeomFactors& geom,
                             const SurfInfo& surf, const LayoutSpec& layout, double alpha = 1.0,
                             KernelVariant variant = KernelVariant::FieldInLocal);

/// Fsc-scaled face flux values, one per surface record and field.
template <class Real>
struct FluxBuffer {
  std::array<std::vector<Real>, 3> data;

  FluxBuffer() = default;
  explicit FluxBuffer(std::size_t records) {
    for (auto& d : data) d.assign(records, Real(0));
  }
  std::size_t size() const { return data[0].size(); }
  std::vector<Real>& operator[](Field f) { return data[static_cast<int>(f)]; }
  const std::vector<Real>& operator[](Field f) const { return data[static_cast<int>(f)]; }
};

/// out = (-Dy Ez, Dx Ez, Dx Hy - Dy Hx). Overwrites every element slot of
/// out, ghosts included; intra-microblock padding is never touched.
template <class Real>
void volume_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx, FieldSet<Real>& out);

/// Upwind/central flux jumps at every surface record, scaled by Fsc.
template <class Real>
void flux_gather(const FieldSet<Real>& q, const DgContext<Real>& ctx, FluxBuffer<Real>& out);

/// out += LIFT * flux / 2 per element and field.
template <class Real>
void surface_lift(const FluxBuffer<Real>& flux, const DgContext<Real>& ctx, FieldSet<Real>& out);

/// Full semi-discrete right-hand side; `scratch` is resized as needed.
template <class Real>
void compute_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx, FieldSet<Real>& out,
                 FluxBuffer<Real>& scratch);

template <class Real>
FieldSet<Real> compute_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx);

/// Right-hand side evaluator owning its flux scratch buffer.
template <class Real>
class MaxwellOperator {
 public:
  explicit MaxwellOperator(DgContext<Real> ctx)
      : ctx_(std::move(ctx)), flux_(ctx_.num_records()) {}

  void operator()(const FieldSet<Real>& q, FieldSet<Real>& out) {
    compute_rhs(q, ctx_, out, flux_);
  }
  const DgContext<Real>& context() const { return ctx_; }
  DgContext<Real>& context() { return ctx_; }

 private:
  DgContext<Real> ctx_;
  FluxBuffer<Real> flux_;
};

/// Rough floating-point operation count of one right-hand side evaluation.
double rhs_flops(int N, int K);

}  // namespace dgtm
