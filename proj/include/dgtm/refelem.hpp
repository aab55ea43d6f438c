#pragma once

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

namespace dgtm {

/// Highest polynomial degree for which reference operators are built.
/// Beyond this the Vandermonde conditioning (and the tabulated warp
/// blend parameters) run out.
inline constexpr int kMaxDegree = 15;

/// Reference triangle {r, s >= -1, r + s <= 0}.
///
/// Faces are numbered 0 = bottom (s = -1), 1 = hypotenuse (r + s = 0),
/// 2 = left (r = -1). Face operators are parametrized over [-1, 1], so each
/// face has parameter length 2 regardless of its Euclidean length.
struct ReferenceElement {
  int N = 0;
  int Np = 0;
  int Nfp = 0;
  Eigen::VectorXd r;
  Eigen::VectorXd s;
  Eigen::MatrixXd V;
  Eigen::MatrixXd Dr;
  Eigen::MatrixXd Ds;
  std::array<std::vector<int>, 3> face_mask;
  Eigen::MatrixXd LIFT;  ///< Np x 3*Nfp, M^{-1} times the face mass block matrix.

  /// Reference mass matrix (V V^T)^{-1}.
  Eigen::MatrixXd mass() const;
};

// 1D helpers on [-1, 1] --------------------------------------------------

/// Orthonormal Jacobi polynomial P_n^{(alpha,beta)} evaluated at x.
double jacobi_p(double x, double alpha, double beta, int n);
double grad_jacobi_p(double x, double alpha, double beta, int n);

/// Gauss-Jacobi nodes and weights with n + 1 points.
std::pair<Eigen::VectorXd, Eigen::VectorXd> jacobi_gq(double alpha, double beta, int n);

/// Gauss-Lobatto-Jacobi nodes, n + 1 points including the endpoints.
Eigen::VectorXd jacobi_gl(double alpha, double beta, int n);

/// 1D Vandermonde matrix of orthonormal Legendre polynomials up to degree n.
Eigen::MatrixXd vandermonde_1d(int n, const Eigen::VectorXd& x);

// Triangle ---------------------------------------------------------------

inline constexpr int num_nodes(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Orthonormal Koornwinder-Dubiner mode phi_{(i,j)} on the reference
/// triangle. Throws std::invalid_argument for negative mode indices or a
/// point outside the closed triangle.
double eval_orthonormal_basis(int i, int j, double r, double s);

/// Gradient (d/dr, d/ds) of phi_{(i,j)}.
std::pair<double, double> grad_orthonormal_basis(int i, int j, double r, double s);

/// Warp-and-blend interpolation nodes for degree N, ordered row by row
/// in s and by increasing r inside a row.
std::vector<std::pair<double, double>> warp_blend_nodes(int N);

Eigen::MatrixXd vandermonde_2d(int N, const Eigen::VectorXd& r, const Eigen::VectorXd& s);
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> grad_vandermonde_2d(int N, const Eigen::VectorXd& r,
                                                                  const Eigen::VectorXd& s);

/// Builds every reference operator for 1 <= N <= kMaxDegree.
ReferenceElement build_reference_element(int N);

}  // namespace dgtm
