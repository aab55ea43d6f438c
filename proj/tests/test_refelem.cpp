#include "dgtm/refelem.hpp"
#include "quadrature.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace dgtm;

namespace {

std::vector<std::pair<int, int>> modes(int N) {
  std::vector<std::pair<int, int>> m;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N - i; ++j) m.emplace_back(i, j);
  }
  return m;
}

// Same node set up to permutation, within tol.
bool same_set(std::vector<std::pair<double, double>> a, std::vector<std::pair<double, double>> b,
              double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    auto it = std::find_if(b.begin(), b.end(), [&](const auto& q) {
      return std::hypot(p.first - q.first, p.second - q.second) < tol;
    });
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

// Node set mapped through a permutation of barycentric coordinates.
std::vector<std::pair<double, double>> permute(const std::vector<std::pair<double, double>>& nodes,
                                               int p0, int p1, int p2) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [r, s] : nodes) {
    const double l[3] = {-(r + s) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0};
    const double m[3] = {l[p0], l[p1], l[p2]};
    out.emplace_back(2.0 * m[1] - 1.0, 2.0 * m[2] - 1.0);
  }
  return out;
}

}  // namespace

TEST_CASE("test quadrature integrates the reference triangle area") {
  CHECK(testing::integrate_triangle([](double, double) { return 1.0; }) ==
        doctest::Approx(2.0).epsilon(1e-14));
  // \int r^2 over the triangle = 2/3
  CHECK(testing::integrate_triangle([](double r, double) { return r * r; }) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("constant mode is 1/sqrt(2) everywhere") {
  for (auto [r, s] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-0.3, -0.2}}) {
    CHECK(eval_orthonormal_basis(0, 0, r, s) == doctest::Approx(1.0 / std::numbers::sqrt2));
  }
  const double norm = testing::integrate_triangle([](double r, double s) {
    const double p = eval_orthonormal_basis(0, 0, r, s);
    return p * p;
  });
  CHECK(std::abs(norm - 1.0) < 1e-12);
}

TEST_CASE("modes (1,0) and (0,0) are orthogonal") {
  const double ip = testing::integrate_triangle([](double r, double s) {
    return eval_orthonormal_basis(1, 0, r, s) * eval_orthonormal_basis(0, 0, r, s);
  });
  CHECK(std::abs(ip) < 1e-12);
}

TEST_CASE("Gram matrix up to degree 5 is the identity") {
  const auto m = modes(5);
  double worst = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a; b < m.size(); ++b) {
      const double g = testing::integrate_triangle([&](double r, double s) {
        return eval_orthonormal_basis(m[a].first, m[a].second, r, s) *
               eval_orthonormal_basis(m[b].first, m[b].second, r, s);
      });
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("basis rejects bad modes and points") {
  CHECK_THROWS_AS(eval_orthonormal_basis(-1, 0, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_orthonormal_basis(0, -2, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_orthonormal_basis(0, 0, 0.5, 0.5), std::invalid_argument);
  // the collapsed-coordinate singularity at the top vertex is handled
  CHECK(std::isfinite(eval_orthonormal_basis(3, 2, -1.0, 1.0)));
  const auto g = grad_orthonormal_basis(3, 2, -1.0, 1.0);
  CHECK(std::isfinite(g.first));
  CHECK(std::isfinite(g.second));
}

TEST_CASE("gradient matches central differences") {
  for (const auto& [i, j] : modes(4)) {
    const double r = -0.41, s = -0.23, h = 1e-6;
    const auto [dr, ds] = grad_orthonormal_basis(i, j, r, s);
    const double fdr =
        (eval_orthonormal_basis(i, j, r + h, s) - eval_orthonormal_basis(i, j, r - h, s)) / (2 * h);
    const double fds =
        (eval_orthonormal_basis(i, j, r, s + h) - eval_orthonormal_basis(i, j, r, s - h)) / (2 * h);
    CHECK(std::abs(dr - fdr) < 1e-7);
    CHECK(std::abs(ds - fds) < 1e-7);
  }
}

TEST_CASE("Gauss-Jacobi rule integrates polynomials") {
  const auto [x, w] = jacobi_gq(0.0, 0.0, 5);
  CHECK(w.sum() == doctest::Approx(2.0));
  double m10 = 0.0;
  for (int i = 0; i < x.size(); ++i) m10 += w(i) * std::pow(x(i), 10);
  CHECK(m10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("warp-blend nodes") {
  SUBCASE("degree 1 is the vertex set") {
    const auto n = warp_blend_nodes(1);
    REQUIRE(n.size() == 3);
    CHECK(n[0].first == doctest::Approx(-1.0));
    CHECK(n[0].second == doctest::Approx(-1.0));
    CHECK(n[1].first == doctest::Approx(1.0));
    CHECK(n[1].second == doctest::Approx(-1.0));
    CHECK(n[2].first == doctest::Approx(-1.0));
    CHECK(n[2].second == doctest::Approx(1.0));
  }
  SUBCASE("degree 2 adds the edge midpoints") {
    const std::vector<std::pair<double, double>> expected = {
        {-1, -1}, {1, -1}, {-1, 1}, {0, -1}, {0, 0}, {-1, 0}};
    CHECK(same_set(warp_blend_nodes(2), expected, 1e-12));
  }
  SUBCASE("edge nodes are Gauss-Lobatto points") {
    for (int N = 2; N <= 8; ++N) {
      const auto nodes = warp_blend_nodes(N);
      const Eigen::VectorXd gl = jacobi_gl(0.0, 0.0, N);
      std::vector<double> bottom;
      for (const auto& [r, s] : nodes) {
        if (std::abs(s + 1.0) < 1e-10) bottom.push_back(r);
      }
      std::sort(bottom.begin(), bottom.end());
      REQUIRE(bottom.size() == static_cast<std::size_t>(N + 1));
      for (int i = 0; i <= N; ++i) CHECK(std::abs(bottom[i] - gl(i)) < 1e-12);
    }
  }
  SUBCASE("invariant under the triangle symmetries") {
    for (int N = 1; N <= kMaxDegree; ++N) {
      const auto nodes = warp_blend_nodes(N);
      CHECK(same_set(nodes, permute(nodes, 1, 2, 0), 1e-10));
      CHECK(same_set(nodes, permute(nodes, 0, 2, 1), 1e-10));
      CHECK(same_set(nodes, permute(nodes, 2, 1, 0), 1e-10));
    }
  }
}

TEST_CASE("reference element shapes") {
  const auto ref1 = build_reference_element(1);
  CHECK(ref1.Np == 3);
  CHECK(ref1.Nfp == 2);
  CHECK(ref1.LIFT.rows() == 3);
  CHECK(ref1.LIFT.cols() == 6);
  for (int N = 1; N <= 10; ++N) {
    const auto ref = build_reference_element(N);
    CHECK(ref.Np == (N + 1) * (N + 2) / 2);
    CHECK(ref.Nfp == N + 1);
  }
  CHECK_THROWS_AS(build_reference_element(0), std::invalid_argument);
  CHECK_THROWS_AS(build_reference_element(kMaxDegree + 1), std::invalid_argument);
}

TEST_CASE("differentiation of linear and quadratic data") {
  const auto ref3 = build_reference_element(3);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(ref3.Np);
  CHECK((ref3.Dr * ref3.r - one).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((ref3.Dr * one).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((ref3.Ds * one).lpNorm<Eigen::Infinity>() < 1e-12);

  const auto ref4 = build_reference_element(4);
  const Eigen::VectorXd u = ref4.r.array().square() * ref4.s.array();
  const Eigen::VectorXd du = 2.0 * ref4.r.array() * ref4.s.array();
  CHECK((ref4.Dr * u - du).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("derivatives of monomials are exact up to degree N") {
  for (int N = 1; N <= 8; ++N) {
    const auto ref = build_reference_element(N);
    double worst = 0.0;
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; i + j <= N; ++j) {
        const Eigen::ArrayXd r = ref.r.array(), s = ref.s.array();
        const Eigen::VectorXd u = r.pow(i) * s.pow(j);
        const Eigen::VectorXd ur = i > 0 ? Eigen::VectorXd(i * r.pow(i - 1) * s.pow(j))
                                         : Eigen::VectorXd::Zero(ref.Np).eval();
        const Eigen::VectorXd us = j > 0 ? Eigen::VectorXd(j * r.pow(i) * s.pow(j - 1))
                                         : Eigen::VectorXd::Zero(ref.Np).eval();
        worst = std::max(worst, (ref.Dr * u - ur).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (ref.Ds * u - us).lpNorm<Eigen::Infinity>());
      }
    }
    CHECK_MESSAGE(worst < 1e-9, "N=" << N << " worst=" << worst);
  }
}

TEST_CASE("face masks select nodes on their faces") {
  for (int N = 1; N <= kMaxDegree; ++N) {
    const auto ref = build_reference_element(N);
    for (int n : ref.face_mask[0]) CHECK(std::abs(ref.s(n) + 1.0) < 1e-12);
    for (int n : ref.face_mask[1]) CHECK(std::abs(ref.r(n) + ref.s(n)) < 1e-12);
    for (int n : ref.face_mask[2]) CHECK(std::abs(ref.r(n) + 1.0) < 1e-12);
    CHECK(std::isfinite(ref.V.jacobiSvd().singularValues().minCoeff()));
    CHECK(ref.V.jacobiSvd().singularValues().minCoeff() > 0.0);
  }
}

TEST_CASE("mass and lift consistency") {
  for (int N = 1; N <= 8; ++N) {
    const auto ref = build_reference_element(N);
    const Eigen::MatrixXd M = ref.mass();
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(ref.Np);
    CHECK(std::abs(one.dot(M * one) - 2.0) < 1e-10);

    // A unit flux on one face lifts to its surface integral (face parameter length 2).
    for (int f = 0; f < 3; ++f) {
      Eigen::VectorXd flux = Eigen::VectorXd::Zero(3 * ref.Nfp);
      flux.segment(f * ref.Nfp, ref.Nfp).setOnes();
      CHECK(std::abs(one.dot(M * (ref.LIFT * flux)) - 2.0) < 1e-10);
    }

    // Face mass matrices are SPD.
    for (int f = 0; f < 3; ++f) {
      Eigen::VectorXd t(ref.Nfp);
      for (int i = 0; i < ref.Nfp; ++i) {
        const int n = ref.face_mask[f][i];
        t(i) = f == 2 ? ref.s(n) : ref.r(n);
      }
      const Eigen::MatrixXd v1 = vandermonde_1d(N, t);
      const Eigen::MatrixXd mf = (v1 * v1.transpose()).inverse();
      CHECK((mf - mf.transpose()).norm() < 1e-12 * mf.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mf);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
}
