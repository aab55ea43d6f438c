#include "dgtm/refelem.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dgtm {

namespace {

constexpr double kNodeTol = 1e-10;

// Warp-and-blend optimized blending parameters, indexed by N - 1.
constexpr std::array<double, 15> kAlphaOpt = {
    0.0000, 0.0000, 1.4152, 0.1001, 0.2751, 0.9800, 1.0999, 1.2832,
    1.3648, 1.4773, 1.4959, 1.5743, 1.5770, 1.6223, 1.6258};

// Collapsed coordinates; the top vertex s = 1 is a removable singularity.
std::pair<double, double> rs_to_ab(double r, double s) {
  const double a = (s != 1.0) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
  return {a, s};
}

void check_modes(int i, int j) {
  if (i < 0 || j < 0) {
    throw std::invalid_argument("orthonormal basis: negative mode index (" + std::to_string(i) +
                                ", " + std::to_string(j) + ")");
  }
}

void check_point(double r, double s) {
  constexpr double tol = 1e-12;
  if (r < -1.0 - tol || s < -1.0 - tol || r + s > tol) {
    throw std::invalid_argument("orthonormal basis: point outside the reference triangle");
  }
}

// One-dimensional warp of equidistant to Gauss-Lobatto nodes, evaluated at rout.
Eigen::VectorXd warp_factor(int N, const Eigen::VectorXd& rout) {
  const Eigen::VectorXd lgl = jacobi_gl(0.0, 0.0, N);
  const Eigen::VectorXd req = Eigen::VectorXd::LinSpaced(N + 1, -1.0, 1.0);
  const Eigen::MatrixXd veq = vandermonde_1d(N, req);

  const Eigen::Index nr = rout.size();
  Eigen::MatrixXd pmat(N + 1, nr);
  for (int i = 0; i <= N; ++i) {
    for (Eigen::Index k = 0; k < nr; ++k) pmat(i, k) = jacobi_p(rout(k), 0.0, 0.0, i);
  }
  const Eigen::MatrixXd lmat = veq.transpose().partialPivLu().solve(pmat);
  Eigen::VectorXd warp = lmat.transpose() * (lgl - req);

  for (Eigen::Index k = 0; k < nr; ++k) {
    const bool interior = std::abs(rout(k)) < 1.0 - 1e-10;
    if (interior) {
      warp(k) /= 1.0 - rout(k) * rout(k);
    } else {
      warp(k) = 0.0;
    }
  }
  return warp;
}

}  // namespace

double jacobi_p(double x, double alpha, double beta, int n) {
  const double gamma0 = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                        std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                        std::tgamma(alpha + beta + 1.0);
  double p_prev = 1.0 / std::sqrt(gamma0);
  if (n == 0) return p_prev;

  const double gamma1 = (alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0) * gamma0;
  double p = ((alpha + beta + 2.0) * x / 2.0 + (alpha - beta) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return p;

  double a_old = 2.0 / (2.0 + alpha + beta) *
                 std::sqrt((alpha + 1.0) * (beta + 1.0) / (alpha + beta + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double a_new = 2.0 / (h1 + 2.0) *
                         std::sqrt((i + 1.0) * (i + 1.0 + alpha + beta) * (i + 1.0 + alpha) *
                                   (i + 1.0 + beta) / (h1 + 1.0) / (h1 + 3.0));
    const double b_new = -(alpha * alpha - beta * beta) / h1 / (h1 + 2.0);
    const double p_next = (-a_old * p_prev + (x - b_new) * p) / a_new;
    p_prev = p;
    p = p_next;
    a_old = a_new;
  }
  return p;
}

double grad_jacobi_p(double x, double alpha, double beta, int n) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(x, alpha + 1.0, beta + 1.0, n - 1);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> jacobi_gq(double alpha, double beta, int n) {
  Eigen::VectorXd x(n + 1);
  Eigen::VectorXd w(n + 1);
  if (n == 0) {
    x(0) = -(alpha - beta) / (alpha + beta + 2.0);
    w(0) = 2.0;
    return {x, w};
  }

  // Golub-Welsch: eigenvalues of the symmetric Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    J(i, i) = -0.5 * (alpha * alpha - beta * beta) / (h1 + 2.0) / h1;
    if (i < n) {
      const double k = i + 1.0;
      const double off = 2.0 / (h1 + 2.0) *
                         std::sqrt(k * (k + alpha + beta) * (k + alpha) * (k + beta) / (h1 + 1.0) /
                                   (h1 + 3.0));
      J(i, i + 1) = off;
      J(i + 1, i) = off;
    }
  }
  if (alpha + beta < 10.0 * std::numeric_limits<double>::epsilon()) J(0, 0) = 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  x = eig.eigenvalues();
  const double scale = std::pow(2.0, alpha + beta + 1.0) / (alpha + beta + 1.0) *
                       std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                       std::tgamma(alpha + beta + 1.0);
  for (int i = 0; i <= n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    w(i) = v0 * v0 * scale;
  }
  return {x, w};
}

Eigen::VectorXd jacobi_gl(double alpha, double beta, int n) {
  Eigen::VectorXd x(n + 1);
  x(0) = -1.0;
  x(n) = 1.0;
  if (n == 1) return x;
  const auto [xi, wi] = jacobi_gq(alpha + 1.0, beta + 1.0, n - 2);
  x.segment(1, n - 1) = xi;
  return x;
}

Eigen::MatrixXd vandermonde_1d(int n, const Eigen::VectorXd& x) {
  Eigen::MatrixXd v(x.size(), n + 1);
  for (int j = 0; j <= n; ++j) {
    for (Eigen::Index i = 0; i < x.size(); ++i) v(i, j) = jacobi_p(x(i), 0.0, 0.0, j);
  }
  return v;
}

double eval_orthonormal_basis(int i, int j, double r, double s) {
  check_modes(i, j);
  check_point(r, s);
  const auto [a, b] = rs_to_ab(r, s);
  const double h1 = jacobi_p(a, 0.0, 0.0, i);
  const double h2 = jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
  return std::numbers::sqrt2 * h1 * h2 * std::pow(1.0 - b, i);
}

std::pair<double, double> grad_orthonormal_basis(int i, int j, double r, double s) {
  check_modes(i, j);
  check_point(r, s);
  const auto [a, b] = rs_to_ab(r, s);

  const double fa = jacobi_p(a, 0.0, 0.0, i);
  const double dfa = grad_jacobi_p(a, 0.0, 0.0, i);
  const double gb = jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
  const double dgb = grad_jacobi_p(b, 2.0 * i + 1.0, 0.0, j);
  const double half_1mb = 0.5 * (1.0 - b);

  // Chain rule through (a, b); powers of (1-b)/2 cancel the 1/(1-b) in da/dr.
  double dr = dfa * gb;
  double ds = dfa * (gb * 0.5 * (1.0 + a));
  if (i > 0) {
    dr *= std::pow(half_1mb, i - 1);
    ds *= std::pow(half_1mb, i - 1);
  }
  double tmp = dgb * std::pow(half_1mb, i);
  if (i > 0) tmp -= 0.5 * i * gb * std::pow(half_1mb, i - 1);
  ds += fa * tmp;

  const double scale = std::pow(2.0, i + 0.5);
  return {dr * scale, ds * scale};
}

std::vector<std::pair<double, double>> warp_blend_nodes(int N) {
  if (N < 1 || N > kMaxDegree) {
    throw std::invalid_argument("warp_blend_nodes: degree " + std::to_string(N) +
                                " outside [1, " + std::to_string(kMaxDegree) + "]");
  }
  const int np = num_nodes(N);
  const double alpha = kAlphaOpt[N - 1];

  // Equidistant barycentric lattice on the equilateral triangle.
  Eigen::VectorXd L1(np), L2(np), L3(np);
  int sk = 0;
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= N - n; ++m) {
      L1(sk) = static_cast<double>(n) / N;
      L3(sk) = static_cast<double>(m) / N;
      L2(sk) = 1.0 - L1(sk) - L3(sk);
      ++sk;
    }
  }
  const double sqrt3 = std::sqrt(3.0);
  Eigen::VectorXd x = -L2 + L3;
  Eigen::VectorXd y = (-L2 - L3 + 2.0 * L1) / sqrt3;

  const Eigen::VectorXd blend1 = 4.0 * L2.cwiseProduct(L3);
  const Eigen::VectorXd blend2 = 4.0 * L1.cwiseProduct(L3);
  const Eigen::VectorXd blend3 = 4.0 * L1.cwiseProduct(L2);
  const Eigen::VectorXd warpf1 = warp_factor(N, L3 - L2);
  const Eigen::VectorXd warpf2 = warp_factor(N, L1 - L3);
  const Eigen::VectorXd warpf3 = warp_factor(N, L2 - L1);

  const double c2 = std::cos(2.0 * std::numbers::pi / 3.0);
  const double s2 = std::sin(2.0 * std::numbers::pi / 3.0);
  const double c4 = std::cos(4.0 * std::numbers::pi / 3.0);
  const double s4 = std::sin(4.0 * std::numbers::pi / 3.0);

  std::vector<std::pair<double, double>> nodes(np);
  for (int k = 0; k < np; ++k) {
    const double w1 = blend1(k) * warpf1(k) * (1.0 + (alpha * L1(k)) * (alpha * L1(k)));
    const double w2 = blend2(k) * warpf2(k) * (1.0 + (alpha * L2(k)) * (alpha * L2(k)));
    const double w3 = blend3(k) * warpf3(k) * (1.0 + (alpha * L3(k)) * (alpha * L3(k)));
    const double xe = x(k) + w1 + c2 * w2 + c4 * w3;
    const double ye = y(k) + s2 * w2 + s4 * w3;

    // Equilateral -> right reference triangle.
    const double l1 = (sqrt3 * ye + 1.0) / 3.0;
    const double l2 = (-3.0 * xe - sqrt3 * ye + 2.0) / 6.0;
    const double l3 = (3.0 * xe - sqrt3 * ye + 2.0) / 6.0;
    nodes[k] = {-l2 + l3 - l1, -l2 - l3 + l1};
  }
  return nodes;
}

Eigen::MatrixXd vandermonde_2d(int N, const Eigen::VectorXd& r, const Eigen::VectorXd& s) {
  Eigen::MatrixXd v(r.size(), num_nodes(N));
  int col = 0;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N - i; ++j) {
      for (Eigen::Index k = 0; k < r.size(); ++k) v(k, col) = eval_orthonormal_basis(i, j, r(k), s(k));
      ++col;
    }
  }
  return v;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> grad_vandermonde_2d(int N, const Eigen::VectorXd& r,
                                                                  const Eigen::VectorXd& s) {
  Eigen::MatrixXd vr(r.size(), num_nodes(N));
  Eigen::MatrixXd vs(r.size(), num_nodes(N));
  int col = 0;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N - i; ++j) {
      for (Eigen::Index k = 0; k < r.size(); ++k) {
        const auto [dr, ds] = grad_orthonormal_basis(i, j, r(k), s(k));
        vr(k, col) = dr;
        vs(k, col) = ds;
      }
      ++col;
    }
  }
  return {vr, vs};
}

Eigen::MatrixXd ReferenceElement::mass() const { return (V * V.transpose()).inverse(); }

ReferenceElement build_reference_element(int N) {
  if (N < 1 || N > kMaxDegree) {
    throw std::invalid_argument("build_reference_element: degree " + std::to_string(N) +
                                " outside [1, " + std::to_string(kMaxDegree) + "]");
  }
  ReferenceElement ref;
  ref.N = N;
  ref.Np = num_nodes(N);
  ref.Nfp = N + 1;

  const auto nodes = warp_blend_nodes(N);
  ref.r.resize(ref.Np);
  ref.s.resize(ref.Np);
  for (int k = 0; k < ref.Np; ++k) {
    ref.r(k) = nodes[k].first;
    ref.s(k) = nodes[k].second;
  }

  ref.V = vandermonde_2d(N, ref.r, ref.s);
  const auto [vr, vs] = grad_vandermonde_2d(N, ref.r, ref.s);
  const auto vlu = ref.V.transpose().partialPivLu();
  // D = Vr V^{-1}  <=>  D^T = V^{-T} Vr^T
  ref.Dr = vlu.solve(vr.transpose()).transpose();
  ref.Ds = vlu.solve(vs.transpose()).transpose();

  for (int k = 0; k < ref.Np; ++k) {
    const double r = ref.r(k);
    const double s = ref.s(k);
    if (std::abs(s + 1.0) < kNodeTol) ref.face_mask[0].push_back(k);
    if (std::abs(r + s) < kNodeTol) ref.face_mask[1].push_back(k);
    if (std::abs(r + 1.0) < kNodeTol) ref.face_mask[2].push_back(k);
  }
  for (const auto& fm : ref.face_mask) {
    if (static_cast<int>(fm.size()) != ref.Nfp) {
      throw std::logic_error("build_reference_element: face node count mismatch");
    }
  }

  // Face mass matrices on the face parameter in [-1, 1]; face 2 (left) is
  // parametrized by s, the others by r.
  Eigen::MatrixXd emat = Eigen::MatrixXd::Zero(ref.Np, 3 * ref.Nfp);
  for (int f = 0; f < 3; ++f) {
    Eigen::VectorXd t(ref.Nfp);
    for (int i = 0; i < ref.Nfp; ++i) {
      const int n = ref.face_mask[f][i];
      t(i) = (f == 2) ? ref.s(n) : ref.r(n);
    }
    const Eigen::MatrixXd v1d = vandermonde_1d(N, t);
    const Eigen::MatrixXd mass_edge = (v1d * v1d.transpose()).inverse();
    for (int i = 0; i < ref.Nfp; ++i) {
      for (int j = 0; j < ref.Nfp; ++j) {
        emat(ref.face_mask[f][i], f * ref.Nfp + j) = mass_edge(i, j);
      }
    }
  }
  ref.LIFT = ref.V * (ref.V.transpose() * emat);
  return ref;
}

}  // namespace dgtm
