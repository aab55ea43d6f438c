#include "dgtm/kernels.hpp"

#include "dgtm/error.hpp"

#include <algorithm>
#include <string>

namespace dgtm {

namespace {

template <class Real>
void check_layout(const LayoutSpec& expected, const LayoutSpec& got, const char* who) {
  if (!(expected == got)) throw LayoutError(std::string(who) + ": field layout mismatch");
}

template <class Real>
std::vector<Real> to_real(const Eigen::MatrixXd& m, bool transpose) {
  const Eigen::Index rows = transpose ? m.cols() : m.rows();
  const Eigen::Index cols = transpose ? m.rows() : m.cols();
  std::vector<Real> out(static_cast<std::size_t>(rows * cols));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out[static_cast<std::size_t>(i * cols + j)] =
          static_cast<Real>(transpose ? m(j, i) : m(i, j));
    }
  }
  return out;
}

// Shared by every variant.
template <class Real>
inline void combine_volume(Real rx, Real ry, Real sx, Real sy, Real drHx, Real dsHx, Real drHy,
                           Real dsHy, Real drEz, Real dsEz, Real& outHx, Real& outHy,
                           Real& outEz) {
  outHx = -(ry * drEz + sy * dsEz);
  outHy = rx * drEz + sx * dsEz;
  outEz = (rx * drHy + sx * dsHy) - (ry * drHx + sy * dsHx);
}

template <class Real>
void volume_field_in_local(const FieldSet<Real>& q, const DgContext<Real>& ctx,
                           FieldSet<Real>& out, bool parallel) {
  const LayoutSpec& L = ctx.layout;
  const int Np = ctx.Np;
  const int mb = L.mb_elems;
  const int nblocks = L.num_microblocks();
  const Real* Dr = ctx.Dr.data();
  const Real* Ds = ctx.Ds.data();

#pragma omp parallel if (parallel)
  {
    std::vector<Real> u(3 * static_cast<std::size_t>(Np));
#pragma omp for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      for (int e = 0; e < mb; ++e) {
        const int k = b * mb + e;
        const std::size_t off = L.offset(k, 0);
        std::copy_n(q.data[0].data() + off, Np, u.data());
        std::copy_n(q.data[1].data() + off, Np, u.data() + Np);
        std::copy_n(q.data[2].data() + off, Np, u.data() + 2 * Np);
        const Real* hx = u.data();
        const Real* hy = u.data() + Np;
        const Real* ez = u.data() + 2 * Np;

        for (int i = 0; i < Np; ++i) {
          const Real* dr = Dr + static_cast<std::size_t>(i) * Np;
          const Real* ds = Ds + static_cast<std::size_t>(i) * Np;
          Real drHx = 0, dsHx = 0, drHy = 0, dsHy = 0, drEz = 0, dsEz = 0;
          for (int j = 0; j < Np; ++j) {
            drHx += dr[j] * hx[j];
            dsHx += ds[j] * hx[j];
            drHy += dr[j] * hy[j];
            dsHy += ds[j] * hy[j];
            drEz += dr[j] * ez[j];
            dsEz += ds[j] * ez[j];
          }
          combine_volume(ctx.rx[k], ctx.ry[k], ctx.sx[k], ctx.sy[k], drHx, dsHx, drHy, dsHy, drEz,
                         dsEz, out.data[0][off + i], out.data[1][off + i], out.data[2][off + i]);
        }
      }
    }
  }
}

template <class Real>
void volume_matrix_in_local(const FieldSet<Real>& q, const DgContext<Real>& ctx,
                            FieldSet<Real>& out) {
  const LayoutSpec& L = ctx.layout;
  const int Np = ctx.Np;
  const int mb = L.mb_elems;
  const int nblocks = L.num_microblocks();
  const std::size_t n = static_cast<std::size_t>(mb) * Np;

#pragma omp parallel
  {
    // drHx, dsHx, drHy, dsHy, drEz, dsEz for the whole microblock
    std::vector<Real> acc(6 * n);
#pragma omp for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      std::fill(acc.begin(), acc.end(), Real(0));
      const std::size_t base = static_cast<std::size_t>(b) * L.mb_size;
      const Real* hx = q.data[0].data() + base;
      const Real* hy = q.data[1].data() + base;
      const Real* ez = q.data[2].data() + base;
      for (int j = 0; j < Np; ++j) {
        const Real* drc = ctx.DrT.data() + static_cast<std::size_t>(j) * Np;
        const Real* dsc = ctx.DsT.data() + static_cast<std::size_t>(j) * Np;
        for (int e = 0; e < mb; ++e) {
          const std::size_t ej = static_cast<std::size_t>(e) * Np + j;
          const Real uhx = hx[ej], uhy = hy[ej], uez = ez[ej];
          Real* a = acc.data() + static_cast<std::size_t>(e) * Np;
          for (int i = 0; i < Np; ++i) {
            a[i] += drc[i] * uhx;
            a[n + i] += dsc[i] * uhx;
            a[2 * n + i] += drc[i] * uhy;
            a[3 * n + i] += dsc[i] * uhy;
            a[4 * n + i] += drc[i] * uez;
            a[5 * n + i] += dsc[i] * uez;
          }
        }
      }
      for (int e = 0; e < mb; ++e) {
        const int k = b * mb + e;
        for (int i = 0; i < Np; ++i) {
          const std::size_t li = static_cast<std::size_t>(e) * Np + i;
          const std::size_t off = base + li;
          combine_volume(ctx.rx[k], ctx.ry[k], ctx.sx[k], ctx.sy[k], acc[li], acc[n + li],
                         acc[2 * n + li], acc[3 * n + li], acc[4 * n + li], acc[5 * n + li],
                         out.data[0][off], out.data[1][off], out.data[2][off]);
        }
      }
    }
  }
}

template <class Real>
void lift_field_in_local(const FluxBuffer<Real>& flux, const DgContext<Real>& ctx,
                         FieldSet<Real>& out, bool parallel) {
  const LayoutSpec& L = ctx.layout;
  const int Np = ctx.Np;
  const int Nfp = ctx.Nfp;
  const int nf = 3 * Nfp;
  const int K = L.K;
  const Real half = Real(0.5);

#pragma omp parallel if (parallel)
  {
    std::vector<Real> f(3 * static_cast<std::size_t>(nf));
#pragma omp for schedule(static)
    for (int k = 0; k < K; ++k) {
      const std::size_t rec = static_cast<std::size_t>(k) * nf;
      for (int c = 0; c < 3; ++c) std::copy_n(flux.data[c].data() + rec, nf, f.data() + c * nf);
      const std::size_t off = L.offset(k, 0);
      for (int i = 0; i < Np; ++i) {
        const Real* row = ctx.LIFT.data() + static_cast<std::size_t>(i) * nf;
        for (int c = 0; c < 3; ++c) {
          const Real* fc = f.data() + c * nf;
          Real acc = 0;
          // three-fold unrolled over the faces
          for (int j = 0; j < Nfp; ++j) {
            acc += row[j] * fc[j];
            acc += row[Nfp + j] * fc[Nfp + j];
            acc += row[2 * Nfp + j] * fc[2 * Nfp + j];
          }
          out.data[c][off + i] += half * acc;
        }
      }
    }
  }
}

template <class Real>
void lift_matrix_in_local(const FluxBuffer<Real>& flux, const DgContext<Real>& ctx,
                          FieldSet<Real>& out) {
  const LayoutSpec& L = ctx.layout;
  const int Np = ctx.Np;
  const int Nfp = ctx.Nfp;
  const int nf = 3 * Nfp;
  const int mb = L.mb_elems;
  const int nblocks = L.num_microblocks();
  const std::size_t n = static_cast<std::size_t>(mb) * Np;
  const Real half = Real(0.5);

#pragma omp parallel
  {
    std::vector<Real> acc(3 * n);
#pragma omp for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      const int kend = std::min(L.K, (b + 1) * mb);
      const int kbeg = b * mb;
      if (kbeg >= kend) continue;
      std::fill(acc.begin(), acc.end(), Real(0));
      for (int j = 0; j < Nfp; ++j) {
        for (int face = 0; face < 3; ++face) {
          const int col = face * Nfp + j;
          const Real* lc = ctx.LIFTT.data() + static_cast<std::size_t>(col) * Np;
          for (int k = kbeg; k < kend; ++k) {
            const std::size_t rec = static_cast<std::size_t>(k) * nf + col;
            const std::size_t e = static_cast<std::size_t>(k - kbeg) * Np;
            for (int c = 0; c < 3; ++c) {
              const Real fv = flux.data[c][rec];
              Real* a = acc.data() + c * n + e;
              for (int i = 0; i < Np; ++i) a[i] += lc[i] * fv;
            }
          }
        }
      }
      for (int k = kbeg; k < kend; ++k) {
        const std::size_t off = L.offset(k, 0);
        const std::size_t e = static_cast<std::size_t>(k - kbeg) * Np;
        for (int c = 0; c < 3; ++c) {
          for (int i = 0; i < Np; ++i) out.data[c][off + i] += half * acc[c * n + e + i];
        }
      }
    }
  }
}

}  // namespace

std::string_view to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::Serial:
      return "serial";
    case KernelVariant::FieldInLocal:
      return "field-in-local";
    case KernelVariant::MatrixInLocal:
      return "matrix-in-local";
  }
  return "unknown";
}

KernelVariant parse_variant(std::string_view name) {
  for (auto v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw Error("unknown kernel variant '" + std::string(name) + "'");
}

template <class Real>
DgContext<Real> make_context(const ReferenceElement& ref, const GeomFactors& geom,
                             const SurfInfo& surf, const LayoutSpec& layout, double alpha,
                             KernelVariant variant) {
  const int K = static_cast<int>(geom.detA.size());
  if (layout.Np != ref.Np || layout.K != K || surf.Nfp != ref.Nfp ||
      surf.size() != static_cast<std::size_t>(K) * 3 * ref.Nfp) {
    throw LayoutError("make_context: reference element, geometry, surfinfo and layout disagree");
  }
  DgContext<Real> ctx;
  ctx.layout = layout;
  ctx.N = ref.N;
  ctx.Np = ref.Np;
  ctx.Nfp = ref.Nfp;
  ctx.alpha = static_cast<Real>(alpha);
  ctx.variant = variant;
  ctx.Dr = to_real<Real>(ref.Dr, false);
  ctx.Ds = to_real<Real>(ref.Ds, false);
  ctx.DrT = to_real<Real>(ref.Dr, true);
  ctx.DsT = to_real<Real>(ref.Ds, true);
  ctx.LIFT = to_real<Real>(ref.LIFT, false);
  ctx.LIFTT = to_real<Real>(ref.LIFT, true);

  ctx.rx.assign(layout.K_pad, Real(1));
  ctx.ry.assign(layout.K_pad, Real(0));
  ctx.sx.assign(layout.K_pad, Real(0));
  ctx.sy.assign(layout.K_pad, Real(1));
  for (int k = 0; k < K; ++k) {
    ctx.rx[k] = static_cast<Real>(geom.rx[k]);
    ctx.ry[k] = static_cast<Real>(geom.ry[k]);
    ctx.sx[k] = static_cast<Real>(geom.sx[k]);
    ctx.sy[k] = static_cast<Real>(geom.sy[k]);
  }

  const std::size_t nrec = surf.size();
  ctx.idM.resize(nrec);
  ctx.idP.resize(nrec);
  ctx.nx.resize(nrec);
  ctx.ny.resize(nrec);
  ctx.Fsc.resize(nrec);
  ctx.Bsc.resize(nrec);
  for (std::size_t r = 0; r < nrec; ++r) {
    ctx.idM[r] = layout.offset(surf.idM[r] / ref.Np, surf.idM[r] % ref.Np);
    ctx.idP[r] = layout.offset(surf.idP[r] / ref.Np, surf.idP[r] % ref.Np);
    ctx.nx[r] = static_cast<Real>(surf.nx[r]);
    ctx.ny[r] = static_cast<Real>(surf.ny[r]);
    ctx.Fsc[r] = static_cast<Real>(surf.Fsc[r]);
    ctx.Bsc[r] = static_cast<Real>(surf.Bsc[r]);
  }
  return ctx;
}

template <class Real>
void volume_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx, FieldSet<Real>& out) {
  check_layout<Real>(ctx.layout, q.layout, "volume_rhs");
  check_layout<Real>(ctx.layout, out.layout, "volume_rhs");
  switch (ctx.variant) {
    case KernelVariant::Serial:
      volume_field_in_local(q, ctx, out, false);
      break;
    case KernelVariant::FieldInLocal:
      volume_field_in_local(q, ctx, out, true);
      break;
    case KernelVariant::MatrixInLocal:
      volume_matrix_in_local(q, ctx, out);
      break;
  }
}

template <class Real>
void flux_gather(const FieldSet<Real>& q, const DgContext<Real>& ctx, FluxBuffer<Real>& out) {
  check_layout<Real>(ctx.layout, q.layout, "flux_gather");
  if (out.size() != ctx.num_records()) out = FluxBuffer<Real>(ctx.num_records());

  const Real* Hx = q.data[0].data();
  const Real* Hy = q.data[1].data();
  const Real* Ez = q.data[2].data();
  Real* fHx = out.data[0].data();
  Real* fHy = out.data[1].data();
  Real* fEz = out.data[2].data();
  const Real alpha = ctx.alpha;
  const long nrec = static_cast<long>(ctx.num_records());

#pragma omp parallel for schedule(static) if (ctx.variant != KernelVariant::Serial)
  for (long r = 0; r < nrec; ++r) {
    const std::size_t m = ctx.idM[r];
    const std::size_t p = ctx.idP[r];
    const Real nx = ctx.nx[r];
    const Real ny = ctx.ny[r];
    const Real fsc = ctx.Fsc[r];

    const Real dHx = Hx[m] - Hx[p];
    const Real dHy = Hy[m] - Hy[p];
    const Real dEz = Ez[m] - ctx.Bsc[r] * Ez[p];
    const Real ndotdH = nx * dHx + ny * dHy;

    fHx[r] = fsc * (ny * dEz + alpha * (nx * ndotdH - dHx));
    fHy[r] = fsc * (-nx * dEz + alpha * (ny * ndotdH - dHy));
    fEz[r] = fsc * (ny * dHx - nx * dHy - alpha * dEz);
  }
}

template <class Real>
void surface_lift(const FluxBuffer<Real>& flux, const DgContext<Real>& ctx, FieldSet<Real>& out) {
  check_layout<Real>(ctx.layout, out.layout, "surface_lift");
  if (flux.size() != ctx.num_records()) {
    throw LayoutError("surface_lift: flux buffer does not match the surface records");
  }
  switch (ctx.variant) {
    case KernelVariant::Serial:
      lift_field_in_local(flux, ctx, out, false);
      break;
    case KernelVariant::FieldInLocal:
      lift_field_in_local(flux, ctx, out, true);
      break;
    case KernelVariant::MatrixInLocal:
      lift_matrix_in_local(flux, ctx, out);
      break;
  }
}

template <class Real>
void compute_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx, FieldSet<Real>& out,
                 FluxBuffer<Real>& scratch) {
  if (&q == &out) throw LayoutError("compute_rhs: input and output must not alias");
  volume_rhs(q, ctx, out);
  flux_gather(q, ctx, scratch);
  surface_lift(scratch, ctx, out);
}

template <class Real>
FieldSet<Real> compute_rhs(const FieldSet<Real>& q, const DgContext<Real>& ctx) {
  FieldSet<Real> out(ctx.layout);
  FluxBuffer<Real> scratch(ctx.num_records());
  compute_rhs(q, ctx, out, scratch);
  return out;
}

double rhs_flops(int N, int K) {
  const double Np = num_nodes(N);
  const double Nfp = N + 1;
  const double volume = 6.0 * 2.0 * Np * Np + 9.0 * Np;
  const double flux = 3.0 * Nfp * 30.0;
  const double lift = 3.0 * (2.0 * Np * 3.0 * Nfp + 2.0 * Np);
  return K * (volume + flux + lift);
}

#define DGTM_INSTANTIATE_KERNELS(Real)                                                          \
  template DgContext<Real> make_context<Real>(const ReferenceElement&, const GeomFactors&,     \
                                              const SurfInfo&, const LayoutSpec&, double,      \
                                              KernelVariant);                                   \
  template void volume_rhs<Real>(const FieldSet<Real>&, const DgContext<Real>&,                \
                                 FieldSet<Real>&);                                              \
  template void flux_gather<Real>(const FieldSet<Real>&, const DgContext<Real>&,               \
                                  FluxBuffer<Real>&);                                           \
  template void surface_lift<Real>(const FluxBuffer<Real>&, const DgContext<Real>&,            \
                                   FieldSet<Real>&);                                            \
  template void compute_rhs<Real>(const FieldSet<Real>&, const DgContext<Real>&,               \
                                  FieldSet<Real>&, FluxBuffer<Real>&);                          \
  template FieldSet<Real> compute_rhs<Real>(const FieldSet<Real>&, const DgContext<Real>&);

DGTM_INSTANTIATE_KERNELS(float)
DGTM_INSTANTIATE_KERNELS(double)

}  // namespace dgtm
