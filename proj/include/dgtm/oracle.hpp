#pragma once

#include "dgtm/layout.hpp"
#include "dgtm/mesh.hpp"
#include "dgtm/refelem.hpp"

namespace dgtm {

/// Right-hand side by dense per-element matrix products and face-by-face
/// jump loops, in double precision.
///
/// Shares nothing with the layout or kernel code: geometric factors come
/// from differentiating the nodal coordinates, neighbour traces are found
/// by searching the neighbour's nodes, and the lift matrix is assembled
/// from face quadrature of the Lagrange basis. Intended for small meshes.
NodalFields dense_oracle_rhs(const NodalFields& q, const Mesh& mesh, const ReferenceElement& ref,
                             double alpha);

/// Volume part only (no surface terms).
NodalFields dense_oracle_volume(const NodalFields& q, const Mesh& mesh,
                                const ReferenceElement& ref);

/// M^{-1} M^{dI} assembled by face quadrature.
Eigen::MatrixXd quadrature_lift(const ReferenceElement& ref);

}  // namespace dgtm
