#pragma once

// Radial-graph geometry. With phi = log r, rho = sqrt(1 + |grad phi|^2) and
// all derivatives taken with respect to the round metric,
//
//   u      = r / rho
//   g_ij   = r^2 (e_ij + phi_i phi_j)
//   h_ij   = (r / rho) (e_ij + phi_i phi_j - phi_ij)
//   h_i^j  = (delta_i^j - phi_i^j + phi_il phi^l phi^j / rho^2) / (r rho)
//
// Vectors and tensors are expressed in the orthonormal round frame
// (d_theta, d_phi / sin theta); for n = 1 there is a single component.
// The shape operator is stored as the symmetric matrix
//   S = G^{-1/2} b G^{-1/2},
// where G and b are the induced metric and second fundamental form in the
// round frame and G^{1/2} is the symmetric square root. Its eigenvalues are
// the principal curvatures.

#include <array>
#include <vector>

#include "anisoflow/grid.hpp"
#include "anisoflow/symfunc.hpp"

namespace anisoflow {

struct NodeDerivatives {
  std::array<double, 2> grad{};  ///< (phi_theta, phi_lon / sin theta)
  std::array<double, 3> hess{};  ///< (H_tt, H_tl, H_ll), covariant, orthonormal frame
};

struct NodeGeometry {
  SymmetricMatrix shape;
  CurvatureVector kappa;        ///< descending
  std::array<double, 3> sigma{};  ///< sigma_1 .. sigma_n
  double r = 0.0;
  double rho = 1.0;
  double u = 0.0;
  double grad_norm = 0.0;  ///< |grad phi|
};

struct WeingartenField {
  SphericalGrid grid;
  std::vector<NodeGeometry> nodes;
};

/// Fourth-order central differences; longitude periodic, latitude closed by
/// the pole ghost rule.
std::vector<NodeDerivatives> covariant_derivatives(const RadialGraph& graph);

/// Pointwise evaluation of the graph formulas from phi and its derivatives.
NodeGeometry weingarten_node(int dim, double phi, const NodeDerivatives& d);

WeingartenField weingarten(const RadialGraph& graph);

/// Independent check: builds X = r(theta) theta in R^{n+1}, differentiates
/// the embedding with second-order central differences and forms the
/// shape operator from the first and second fundamental forms.
/// Throws SingularMetric on a degenerate first fundamental form.
WeingartenField embedding_oracle(const RadialGraph& graph);

/// Symmetric square root of a 2x2 SPD matrix (xx, xy, yy).
SymmetricMatrix spd_sqrt(const SymmetricMatrix& a);

}  // namespace anisoflow
