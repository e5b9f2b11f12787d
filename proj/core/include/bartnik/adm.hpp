#pragma once

#include <array>
#include <string>
#include <vector>

#include "bartnik/constraint.hpp"

namespace bartnik::adm {

using constraint::InitialData;
using constraint::SpacetimeVector;
using grid::Field;
using grid::Grid;

/// A constant translation near infinity: equal to the constant 4-vector
/// xi_inf for r >= 2R, zero for r <= R, with a C^2 quintic transition in
/// ln r (midpoint value xi_inf/2 at r = R sqrt(2)).
struct TranslationAtInfinity {
  std::array<double, 4> xi_inf{};
  double R = 0.0;
  SpacetimeVector realize(const Grid& g) const;
  double profile(double r) const;  // the scalar transition profile
};
TranslationAtInfinity constant_translation(const std::array<double, 4>& xi_inf, double R,
                                           const Grid& g);

/// ADM energy-momentum from the volume expressions with a fitted tail
/// correction, cross-checked against Richardson-extrapolated surface
/// integrals.
struct EnergyMomentum {
  std::array<double, 4> P{};          // adopted values (volume form)
  std::array<double, 4> P_surface{};  // extrapolated surface values
  double p0_truncated = 0.0;
  double p0_tail = 0.0;
  double g_decay_rate = 0.0;
  std::vector<std::array<double, 2>> surface_energy_table;  // (radius, value)
  std::string to_json() const;
};
EnergyMomentum energy_momentum(const InitialData& data, double activation_radius = 0.0);

/// ADM mass sqrt(-P^mu P_mu); throws when P is not timelike.
double adm_mass(const std::array<double, 4>& P);

/// Regge-Teitelboim Hamiltonian evaluated term by term, plus the on-shell
/// equivalent expression 16 pi xi_inf^mu P_mu - integral(xi^mu Phi_mu).
struct HamiltonianReport {
  double value = 0.0;      // sum of the five terms (with tail corrections)
  double value_alt = 0.0;  // equivalent on-shell expression
  std::array<double, 5> terms{};
  double tail = 0.0;
  std::string to_json() const;
};
HamiltonianReport rt_hamiltonian(const InitialData& data, const SpacetimeVector& xi,
                                 const std::array<double, 4>& xi_inf, double R);

/// Initial data from (g, pi) rather than (g, K).
InitialData make_initial_data_gpi(const Field& g, const Field& pi);

}  // namespace bartnik::adm
