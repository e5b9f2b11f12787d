#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bartnik/symbol_matrix.hpp"

namespace bartnik::adn {

using sym::MultiPoly;
using sym::SymbolMatrix;

/// A declared boundary-value operator: square interior principal symbol
/// L(xi) (n x n) and boundary principal symbol B(xi) (q x n), both with
/// constant coefficients in the frozen frame where xi1 is the direction
/// normal to the boundary and (xi2, xi3) span the tangential directions.
///
/// Per-row orders record the derivative order of each boundary row (the
/// interior rows of every builtin are uniformly second order).
struct BvpOperatorSpec {
  std::string name;
  SymbolMatrix interior;              // entries in xi1, xi2, xi3
  SymbolMatrix boundary;              // entries in xi1, xi2, xi3
  std::vector<int> boundary_orders;   // per boundary row
  int interior_order = 2;

  /// Optional exact row operations applied to B(z mu + eta) before forming
  /// the product with adj L; entries are polynomials in eta2, eta3.
  std::optional<SymbolMatrix> row_reduction;
  /// Optional exact scalar factor known to divide every entry of the reduced
  /// product; dividing it out reproduces the classical reduced matrices.
  std::optional<MultiPoly> strip_scalar;

  std::vector<std::string> notes;
};

enum class CheckMode { Exact, Sampled };

struct SampledStats {
  int samples = 0;
  double min_value = 0.0;
  double tolerance = 0.0;
};

struct EllipticityReport {
  std::string operator_name;
  CheckMode mode = CheckMode::Exact;

  // proper ellipticity
  MultiPoly det_symbol;                          // ell(xi) = det L(xi)
  std::string det_pretty;                        // e.g. "(1/2)*|xi|^6" when recognized
  bool properly_elliptic = false;
  std::string proper_witness;                    // description of the certificate
  std::optional<SampledStats> proper_sampling;   // set when sampling was used
  bool exact_recognition_failed = false;         // exact mode fell back to sampling

  // roots with positive imaginary part of ell(z mu + eta)
  int upper_multiplicity = 0;                    // k in (z - i t)^k
  std::string ell_plus_pretty;                   // "(z - i*t)^k"

  // complementing condition
  bool complementing = false;
  std::string certificate_kind;   // "boundary-det" | "derivative-trick" | "stacked-rank" | ...
  MultiPoly certificate;          // the nonzero determinant polynomial (exact modes)
  std::string certificate_pretty;
  bool certificate_positive = false;  // recognized c*t^(2k): nonzero for every real eta != 0
  std::optional<SampledStats> complementing_sampling;

  std::vector<std::string> notes;
  std::vector<std::string> warnings;

  std::string to_json() const;
  std::string to_text() const;
};

/// Properly elliptic condition: det L(xi) has no nonzero real root.
/// Exact mode certifies by recognizing det = c*|xi|^(2k), c != 0; on
/// recognition failure it falls back to sampling with a warning flag.
/// Sampled mode evaluates |det| on >= 500 deterministic unit directions.
EllipticityReport check_proper_ellipticity(const BvpOperatorSpec& op, CheckMode mode);

/// The monic factor of det L(z mu + eta) carrying the roots with positive
/// imaginary part.  For recognized determinants this is exactly (z - i*t)^k.
MultiPoly compute_ell_plus(const BvpOperatorSpec& op, const EllipticityReport& proper);

/// Full check: proper ellipticity, ell^+, and the complementing boundary
/// condition (rows of B(z mu + eta) * adj L(z mu + eta) linearly independent
/// modulo ell^+(z)).
EllipticityReport check_complementing(const BvpOperatorSpec& op, CheckMode mode);

/// Builtin operator specs.
/// Names: P1, P2, L0-Btilde, Ptilde, Pbar, Lbar0-Bbar, laplacian-dirichlet.
BvpOperatorSpec builtin_operator(const std::string& name);
std::vector<std::string> builtin_operator_names();

}  // namespace bartnik::adn
