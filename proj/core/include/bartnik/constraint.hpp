#pragma once

#include <vector>

#include "bartnik/geometry.hpp"

namespace bartnik::constraint {

using geometry::MetricCache;
using grid::Field;
using grid::Grid;

/// Asymptotically flat initial data: metric g, extrinsic curvature K, and the
/// cached conjugate momentum pi = (K - (tr K) g)^sharp sqrt(g), a symmetric
/// (2,0)-density.
struct InitialData {
  MetricCache mc;
  Field K;   // 6, (0,2)
  Field pi;  // 6, (2,0) density
};
InitialData make_initial_data(const Field& g, const Field& K);

Field momentum_of(const MetricCache& mc, const Field& K);
Field extrinsic_of(const MetricCache& mc, const Field& pi);

/// Constraint values: scalar density u and 1-form density Z.
struct ConstraintValues {
  Field u;  // 1
  Field Z;  // 3
};

enum class PhiForm { GK, Momentum };

/// The constraint map: u = (R - |K|^2 + (tr K)^2) sqrt(g),
/// Z = -2 (delta K + d tr K) sqrt(g); the momentum form evaluates the
/// algebraically equivalent (g, pi) expressions.
ConstraintValues evaluate_phi(const InitialData& data, PhiForm form = PhiForm::GK);

/// Deformation of (g, K): h symmetric (0,2), p symmetric (0,2).
struct Deformation {
  Field h;
  Field p;
};
/// Deformation of (g, pi): h symmetric (0,2), sigma symmetric (2,0) density.
struct MomentumDeformation {
  Field h;
  Field sigma;
};

/// Linearization of the constraint map at (g, K), term-by-term:
///   D Phi_0 = R'_h sqrt(g) + (2 K_ik K_j^k h^ij - 2 tr K <K,h>) sqrt(g)
///             - 2 (<K,p> - tr K tr p) sqrt(g) + tr h u / 2
///   D Phi_i = -2 (delta p + d tr p) sqrt(g)
///             - 2 (delta'_h K - d<K,h>) sqrt(g) + tr h Z / 2
/// with R'_h = Delta tr h + delta delta h - <Ric,h> and
/// (delta'_h K)_i = h^jk nabla_j K_ki - K(beta h)_i + K_jk nabla_i h^jk / 2.
ConstraintValues linearize_phi(const InitialData& data, const Deformation& def);

/// Linearization of the momentum-form constraint map at (g, pi).
ConstraintValues linearize_phi_momentum(const InitialData& data, const MomentumDeformation& def);

/// Tangent transform between the two parameterizations: (h, sigma) -> (h, p)
/// and its inverse.
Deformation from_momentum_deformation(const InitialData& data, const MomentumDeformation& def);
MomentumDeformation to_momentum_deformation(const InitialData& data, const Deformation& def);

/// Spacetime vector: lapse-like scalar and shift-like (raised) vector.
struct SpacetimeVector {
  Field X0;  // 1
  Field X;   // 3
};

/// Generalized Killing operator:
///   E1 = 2 X^0 K + Lie_X g
///   E2 = Hess X^0 + Lie_X K + X^0 (-Ric + 2 K o K - (tr K) K + u g / 4)
/// where u is the undensitized Hamiltonian constraint value Phi_0/sqrt(g).
struct KidValues {
  Field E1;  // 6
  Field E2;  // 6
};
KidValues kid_operator(const InitialData& data, const Field& u_undensitized,
                       const SpacetimeVector& xi);

/// Formal adjoint of the momentum-form linearization with respect to the
/// coordinate-measure pairing: <D Phi (h,sigma), xi> = <(h,sigma), adj(xi)>
/// + inner boundary flux.  a pairs with h (a symmetric (2,0) density),
/// b pairs with sigma (a symmetric (0,2) tensor).
struct AdjointValues {
  Field a;  // 6
  Field b;  // 6
};
AdjointValues adjoint_phi_momentum(const InitialData& data, const SpacetimeVector& xi);

/// Coordinate-measure pairings used by the adjoint identity.
double pair_constraint(const ConstraintValues& cv, const SpacetimeVector& xi);
double pair_deformation(const MomentumDeformation& def, const AdjointValues& av);

/// Boundary bilinear form of the adjoint identity, evaluated on the inner
/// boundary.  The normal contraction is flux-normalized (the raised gradient
/// of r contracted against the flat boundary measure) so that the integral
/// equals the defect
///   <xi, D Phi(h,sigma)> - <(h,sigma), adj(xi)>  =  - integral(B[(xi),(h,sigma)])
/// up to discretization error.  density holds the per-node integrand.
struct BoundaryFormResult {
  std::vector<double> density;  // per boundary node (theta, phi)
  double integral = 0.0;
};
BoundaryFormResult boundary_form_B(const InitialData& data, const SpacetimeVector& muY,
                                   const MomentumDeformation& def);

/// Adjoint identity residual:
///   <D Phi(h,sigma), xi> - <(h,sigma), adj(xi)> - integral B[(-xi),(h,sigma)].
/// The deformation must vanish near the outer boundary.
double adjoint_check(const InitialData& data, const MomentumDeformation& def,
                     const SpacetimeVector& xi);

/// Q Y = delta* Y + (delta Y) g and its formal adjoint Q* p = delta p + d tr p.
Field q_operator(const MetricCache& mc, const Field& Y);
Field q_adjoint(const MetricCache& mc, const Field& p);

/// Boundary-surjectivity construction: a deformation (h, p), vanishing to
/// second/first order on the inner boundary, whose linearized constraint
/// values reproduce the target (u, Z) on the boundary.
/// u_target: boundary scalar array; z_target: boundary Cartesian 1-form.
Deformation boundary_surjectivity_data(const InitialData& data,
                                       const std::vector<double>& u_target,
                                       const std::vector<double>& z_target);

/// Discrete L2 norm of the Killing operator output, sqrt of
/// integral (|E1|^2 + |E2|^2) dvol_g.
double kid_residual_norm(const InitialData& data, const Field& u_undensitized,
                         const SpacetimeVector& xi);

}  // namespace bartnik::constraint
