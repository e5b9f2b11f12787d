#pragma once

#include <array>
#include <vector>

#include "bartnik/grid.hpp"

namespace bartnik::geometry {

using grid::Field;
using grid::Grid;
using grid::kSym;
using grid::kSymPair;

/// Per-metric cached data: inverse, volume density relative to the flat
/// background, metric partials and Christoffel symbols.
/// gamma component layout: k * 6 + sym(i,j) for Gamma^k_{ij}.
struct MetricCache {
  const Grid* g = nullptr;
  Field met;                  // 6
  Field inv;                  // 6
  Field sqrtg;                // 1: sqrt(det g)/sqrt(det flat)
  std::array<Field, 3> dmet;  // partial_i g, 6 comps each
  Field gamma;                // 18
};
MetricCache metric_cache(const Field& metric);

/// Connection coefficients, curvature, Ricci, scalar and Einstein tensors.
/// riem stores the fully lowered tensor with layout ((i*3+j)*3+k)*3+l for
/// R_{ijkl} = g_{im} R^m_{jkl}, R(d_j, d_k) d_l = R^m_{jkl} d_m, so that
/// g^{ij} R_{i j k l} = Ric_{kl}.
struct CurvatureBundle {
  Field gamma;  // 18
  Field riem;   // 81
  Field ric;    // 6
  Field scal;   // 1
  Field ein;    // 6
};
CurvatureBundle connection_curvature(const MetricCache& mc);

// --- pointwise algebra helpers (symmetric-6 representation) ---------------
double sym_contract(const double* a_inv, const double* t);        // g^{ij} t_ij
void mat_vec_sym(const double* s, const double* v, double* out);  // s_ij v^j

// --- differential operators with the negative-divergence convention -------

/// delta on a symmetric 2-tensor: (delta T)_i = -g^{ab} nabla_a T_{bi}.
Field divergence_sym2(const MetricCache& mc, const Field& T);
/// delta on a 1-form: -g^{ab} nabla_a w_b.
Field divergence_oneform(const MetricCache& mc, const Field& w);
/// delta* on a vector: (delta* Y)_ij = (nabla_i Y_j + nabla_j Y_i)/2 = Lie_Y g / 2.
Field delta_star(const MetricCache& mc, const Field& Y);
/// beta h = delta h + d(tr h)/2.
Field bianchi_operator(const MetricCache& mc, const Field& h);
/// Covariant Hessian of a scalar.
Field hessian_scalar(const MetricCache& mc, const Field& f);
/// Laplacian with the -tr Hess sign.
Field laplacian(const MetricCache& mc, const Field& f);
/// Lie derivative of a symmetric 2-tensor along a (raised) vector field.
Field lie_sym2(const MetricCache& mc, const Field& X, const Field& T);
/// g-trace of a symmetric 2-tensor.
Field trace_sym2(const MetricCache& mc, const Field& T);
/// Raise / lower with g.
Field raise_oneform(const MetricCache& mc, const Field& w);
Field lower_vector(const MetricCache& mc, const Field& X);
Field raise_sym2(const MetricCache& mc, const Field& T);  // both indices
Field lower_sym2(const MetricCache& mc, const Field& T);
/// nabla_k T_ij of a symmetric 2-tensor, layout k * 6 + sym(i,j).
Field covariant_deriv_sym2(const MetricCache& mc, const Field& T);
/// Pointwise inner product <S,T> = g^ik g^jl S_ij T_kl.
Field inner_sym2(const MetricCache& mc, const Field& S, const Field& T);

// --- level-set (shell) geometry -------------------------------------------

/// Unit normal to the coordinate spheres (pointing toward infinity), its
/// covariant derivative data, mean curvature and second fundamental form on
/// every shell, plus the tangential projector.
struct ShellGeometry {
  Field n_up;    // 3: n^i
  Field n_dn;    // 3: n_i
  Field H;       // 1: div_g n
  Field A;       // 6: second fundamental form, tangential Cartesian comps
  Field proj_dn; // 6: P_ij = g_ij - n_i n_j
};
ShellGeometry shell_geometry(const MetricCache& mc);

/// Boundary (r = 1) data as (theta, phi) arrays, index it * nphi + ip.
struct BoundaryData {
  std::vector<double> n;       // 3 per node, Cartesian n^i
  std::vector<double> gammaT;  // 3 per node: induced metric comps (tt, tp, pp)
  std::vector<double> A;       // 6 per node, Cartesian tangential
  std::vector<double> H;       // 1 per node
  std::vector<double> area;    // sqrt(det gamma)/sin(theta): induced-measure weight
};
BoundaryData boundary_geometry(const MetricCache& mc);

/// Bartnik boundary data of (g, K): induced metric, mean curvature,
/// boundary trace of K and the connection 1-form K(n)^T.
struct BartnikData {
  std::vector<double> gammaT;  // 3 per node
  std::vector<double> H;       // 1 per node
  std::vector<double> trK;     // 1 per node
  std::vector<double> omega;   // 3 per node, Cartesian tangential 1-form
};
BartnikData bartnik_data(const MetricCache& mc, const Field& K);

/// Intrinsic scalar curvature of the induced boundary metric, computed from
/// the two-dimensional metric components in the angular chart.
std::vector<double> boundary_scalar_curvature(const MetricCache& mc);

/// Tangential divergence (with the negative sign convention) of a tangential
/// 1-form field given in the collar: delta^T w = -P^{ij} nabla_i w_j,
/// evaluated on the inner boundary.
std::vector<double> boundary_tangential_divergence(const MetricCache& mc,
                                                   const ShellGeometry& sg, const Field& w);

/// Linearized mean curvature and unit normal on the inner boundary:
///   H'_h = n(tr^T h)/2 + delta^T(h(n)^T) - h(n,n) H / 2
///   n'_h = -h(n,n) n / 2 - (h(n)^T)^sharp
struct LinearizedBoundary {
  std::vector<double> dH;  // 1 per node
  std::vector<double> dn;  // 3 per node (vector)
};
LinearizedBoundary linearized_boundary(const MetricCache& mc, const ShellGeometry& sg,
                                       const Field& h);

/// Residuals of the Gauss identity |A|^2 - H^2 + R^T = R - 2 Ric(n,n), the
/// radial Riccati identity n(H) + |A|^2 = -Ric(n,n) (boundary arrays), and
/// the contracted Bianchi identity delta Ein = 0 (1-form field).
struct IdentityResiduals {
  std::vector<double> gauss;
  std::vector<double> riccati;
  Field bianchi;
};
IdentityResiduals identity_residuals(const MetricCache& mc);

/// Collar extension h = E1(tau) for a boundary 1-form tau (Cartesian
/// tangential components, divergence-free on the boundary): h^T = 0,
/// h(n,n) = 0, h(n)^T ramps inward so that (delta h)^T = tau on the
/// boundary, h = 0 on the boundary itself, supported in r < 2.
Field collar_extend_e1(const MetricCache& mc, const ShellGeometry& sg,
                       const std::vector<double>& tau);

/// Collar extension E2(h): symmetric tensor with tilde-h^T = 0,
/// tilde-h(n,n) = 0 and tilde-h(n)^T = -K(n'_h)^T in the collar.
Field collar_extend_e2(const MetricCache& mc, const ShellGeometry& sg, const Field& K,
                       const Field& h);

/// Quintic cutoff: 1 for u <= 1/4, 0 for u >= 1/2, C^2 monotone between.
double collar_cutoff(double u);

/// g-distance to the inner boundary along radial lines (second-order
/// cumulative integration of sqrt(g_rr)); one value per node.
Field collar_distance(const MetricCache& mc);

}  // namespace bartnik::geometry
