#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bartnik/constraint.hpp"

namespace bartnik::kid {

using constraint::InitialData;
using constraint::SpacetimeVector;
using grid::Field;
using grid::KillingAsymptotics;

/// Asymptotic basis fields: the flat-space Killing data (time and space
/// translations, rotations, boost potentials), multiplied by a quintic
/// cutoff activating for r > 4.
enum class BasisField {
  Time,
  TransX,
  TransY,
  TransZ,
  RotX,
  RotY,
  RotZ,
  BoostX,
  BoostY,
  BoostZ
};
std::vector<BasisField> all_basis_fields();
std::string basis_field_name(BasisField b);

struct KidSearchResult {
  SpacetimeVector X;
  double residual_norm = 0.0;   // re-evaluated |kid_operator(X)| in L2(dvol_g)
  KillingAsymptotics asym;
  std::string asym_class;       // "rotation-boost" | "translation" | "decaying"
  int iterations = 0;
  bool converged = false;
  bool no_kid = false;          // residual above the declared threshold
  std::vector<double> basis_coeffs;        // unit Euclidean norm
  std::vector<double> kernel_spectrum;     // Schur eigenvalues, ascending
  int near_kernel_dim = 0;
  std::vector<double> objective_history;   // least-squares objective per CG step
};

struct KidSearchOptions {
  std::uint64_t seed = 0;
  double tikhonov_scale = 1e-8;   // lambda = scale * trace(Gcc)/dim
  double no_kid_threshold = 0.0;  // 0: no verdict recorded
  int max_cg_iterations = 2000;
  double cg_tolerance = 1e-14;
};

/// Least-squares search for near-null spacetime vectors of the Killing
/// operator.  X is parameterized as a combination of the cutoff asymptotic
/// basis fields plus a decaying correction space (inner continuations of the
/// active basis fields and radial spline profiles per spacetime component).
/// The Gram system is assembled with analytic derivatives of the modes and
/// solved by conjugate gradients on the correction block with a Tikhonov
/// weight; the basis block is resolved through its Schur complement.
KidSearchResult find_kid(const InitialData& data, const Field& u_undensitized,
                         const std::vector<BasisField>& basis, const KidSearchOptions& opt = {});

/// kid-operator residual norm of a given spacetime vector field.
double kid_residual_norm(const InitialData& data, const Field& u_undensitized,
                         const SpacetimeVector& xi);

/// Affine classification of the asymptotics of a spacetime vector.
struct ClassifiedAsymptotics {
  KillingAsymptotics fit;
  std::string label;  // "rotation-boost" | "translation" | "decaying"
};
ClassifiedAsymptotics classify_asymptotics(const SpacetimeVector& X);

/// The ten analytic flat-space Killing fields (no cutoff), for oracles and
/// subspace-recovery tests.
SpacetimeVector analytic_flat_kid(const grid::Grid& g, BasisField b);

}  // namespace bartnik::kid
