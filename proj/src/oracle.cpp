#include "dgtm/oracle.hpp"

#include <cmath>
#include <limits>

namespace dgtm {

namespace {

struct ElementMaps {
  Eigen::MatrixXd Dx, Dy;
  Eigen::VectorXd x, y;
  double J = 0.0;
};

ElementMaps element_maps(const Mesh& mesh, const ReferenceElement& ref, int k) {
  const auto& v1 = mesh.vertices[mesh.EToV[k][0]];
  const auto& v2 = mesh.vertices[mesh.EToV[k][1]];
  const auto& v3 = mesh.vertices[mesh.EToV[k][2]];
  ElementMaps m;
  const Eigen::VectorXd l1 = -0.5 * (ref.r + ref.s);
  const Eigen::VectorXd l2 = 0.5 * (Eigen::VectorXd::Ones(ref.Np) + ref.r);
  const Eigen::VectorXd l3 = 0.5 * (Eigen::VectorXd::Ones(ref.Np) + ref.s);
  m.x = v1[0] * l1 + v2[0] * l2 + v3[0] * l3;
  m.y = v1[1] * l1 + v2[1] * l2 + v3[1] * l3;

  const Eigen::VectorXd xr = ref.Dr * m.x, xs = ref.Ds * m.x;
  const Eigen::VectorXd yr = ref.Dr * m.y, ys = ref.Ds * m.y;
  // Affine elements: the metric terms are constant, take the mean.
  const double mxr = xr.mean(), mxs = xs.mean(), myr = yr.mean(), mys = ys.mean();
  m.J = mxr * mys - mxs * myr;
  const double rx = mys / m.J, sx = -myr / m.J, ry = -mxs / m.J, sy = mxr / m.J;
  m.Dx = rx * ref.Dr + sx * ref.Ds;
  m.Dy = ry * ref.Dr + sy * ref.Ds;
  return m;
}

}  // namespace

Eigen::MatrixXd quadrature_lift(const ReferenceElement& ref) {
  const int Np = ref.Np;
  const int Nfp = ref.Nfp;
  const auto [t, w] = jacobi_gq(0.0, 0.0, ref.N + 1);
  const Eigen::MatrixXd vinvT = ref.V.inverse().transpose();

  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(Np, 3 * Nfp);
  for (int f = 0; f < 3; ++f) {
    for (Eigen::Index q = 0; q < t.size(); ++q) {
      double r = 0.0, s = 0.0;
      switch (f) {
        case 0: r = t(q); s = -1.0; break;
        case 1: r = -t(q); s = t(q); break;
        default: r = -1.0; s = t(q); break;
      }
      Eigen::VectorXd phi(Np);
      int col = 0;
      for (int i = 0; i <= ref.N; ++i) {
        for (int j = 0; j <= ref.N - i; ++j) phi(col++) = eval_orthonormal_basis(i, j, r, s);
      }
      const Eigen::VectorXd lagrange = vinvT * phi;
      for (int jj = 0; jj < Nfp; ++jj) {
        E.col(f * Nfp + jj) += w(q) * lagrange(ref.face_mask[f][jj]) * lagrange;
      }
    }
  }
  const Eigen::MatrixXd mass = (ref.V * ref.V.transpose()).inverse();
  return mass.partialPivLu().solve(E);
}

NodalFields dense_oracle_volume(const NodalFields& q, const Mesh& mesh,
                                const ReferenceElement& ref) {
  const int K = mesh.num_elements();
  const int Np = ref.Np;
  NodalFields out(K, Np);
  for (int k = 0; k < K; ++k) {
    const ElementMaps m = element_maps(mesh, ref, k);
    auto seg = [&](const std::vector<double>& v) {
      return Eigen::Map<const Eigen::VectorXd>(v.data() + static_cast<std::size_t>(k) * Np, Np);
    };
    const Eigen::VectorXd hx = seg(q[Field::Hx]), hy = seg(q[Field::Hy]), ez = seg(q[Field::Ez]);
    const Eigen::VectorXd rhx = -(m.Dy * ez);
    const Eigen::VectorXd rhy = m.Dx * ez;
    const Eigen::VectorXd rez = m.Dx * hy - m.Dy * hx;
    for (int n = 0; n < Np; ++n) {
      const std::size_t id = static_cast<std::size_t>(k) * Np + n;
      out[Field::Hx][id] = rhx(n);
      out[Field::Hy][id] = rhy(n);
      out[Field::Ez][id] = rez(n);
    }
  }
  return out;
}

NodalFields dense_oracle_rhs(const NodalFields& q, const Mesh& mesh, const ReferenceElement& ref,
                             double alpha) {
  const int K = mesh.num_elements();
  const int Np = ref.Np;
  const int Nfp = ref.Nfp;
  NodalFields out = dense_oracle_volume(q, mesh, ref);
  const Eigen::MatrixXd lift = quadrature_lift(ref);

  std::vector<ElementMaps> maps;
  maps.reserve(K);
  for (int k = 0; k < K; ++k) maps.push_back(element_maps(mesh, ref, k));

  const auto& Hx = q[Field::Hx];
  const auto& Hy = q[Field::Hy];
  const auto& Ez = q[Field::Ez];

  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd fhx(3 * Nfp), fhy(3 * Nfp), fez(3 * Nfp);
    for (int f = 0; f < 3; ++f) {
      const auto& a = mesh.vertices[mesh.EToV[k][f]];
      const auto& b = mesh.vertices[mesh.EToV[k][(f + 1) % 3]];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      const double nx = (b[1] - a[1]) / len;
      const double ny = -(b[0] - a[0]) / len;
      const double scale = 0.5 * len / maps[k].J;
      const int nb = mesh.EToE[k][f];
      const bool boundary = nb == k;

      for (int i = 0; i < Nfp; ++i) {
        const int n = ref.face_mask[f][i];
        const std::size_t idM = static_cast<std::size_t>(k) * Np + n;
        double hxP = Hx[idM], hyP = Hy[idM], ezP = -Ez[idM];
        if (!boundary) {
          // nearest node of the neighbour
          const double px = maps[k].x(n), py = maps[k].y(n);
          int best = 0;
          double best_d = std::numeric_limits<double>::infinity();
          for (int j = 0; j < Np; ++j) {
            const double d = std::hypot(maps[nb].x(j) - px, maps[nb].y(j) - py);
            if (d < best_d) {
              best_d = d;
              best = j;
            }
          }
          const std::size_t idP = static_cast<std::size_t>(nb) * Np + best;
          hxP = Hx[idP];
          hyP = Hy[idP];
          ezP = Ez[idP];
        }
        const double dHx = Hx[idM] - hxP;
        const double dHy = Hy[idM] - hyP;
        const double dEz = Ez[idM] - ezP;
        const double ndotdH = nx * dHx + ny * dHy;
        fhx(f * Nfp + i) = scale * (ny * dEz + alpha * (ndotdH * nx - dHx));
        fhy(f * Nfp + i) = scale * (-nx * dEz + alpha * (ndotdH * ny - dHy));
        fez(f * Nfp + i) = scale * (-nx * dHy + ny * dHx - alpha * dEz);
      }
    }
    const Eigen::VectorXd lhx = 0.5 * (lift * fhx);
    const Eigen::VectorXd lhy = 0.5 * (lift * fhy);
    const Eigen::VectorXd lez = 0.5 * (lift * fez);
    for (int n = 0; n < Np; ++n) {
      const std::size_t id = static_cast<std::size_t>(k) * Np + n;
      out[Field::Hx][id] += lhx(n);
      out[Field::Hy][id] += lhy(n);
      out[Field::Ez][id] += lez(n);
    }
  }
  return out;
}

}  // namespace dgtm
