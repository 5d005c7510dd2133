#pragma once

#include <optional>

#include "biofet/kinetics.hpp"
#include "biofet/physchem.hpp"

namespace biofet {

// FET geometry and electrical parameters. Sign convention: all response
// quantities are magnitudes for the reference arrangement of a p-type channel
// with negatively charged ligands, where binding accumulates holes and raises
// the channel conductivity.
struct TransducerConfig {
  double width = 0.1e-6;    // W, m
  double length = 5e-6;     // L, m
  double oxide_thickness = 17.5e-9;          // t_ox, m
  double oxide_rel_permittivity = 3.9;       // eps_ox/eps_0
  double effective_mobility = 16e-3;         // mu_eff, m^2/(V s)
  double drain_source_voltage = 0.1;         // V_DS, V
  double dl_capacitance_per_area = 5e-2;     // C_dl, F/m^2
  double semiconductor_capacitance_per_area = 2e-3;  // C_s, F/m^2
  double trap_density = 2.3e24;              // N_t, 1/(eV m^3)
  double tunneling_distance = 0.05e-9;       // lambda, m
  double layer_resistance = 5e10;            // R_layer, Ohm
  std::optional<double> gate_source_voltage; // V_GS, V; only baseline_current needs it
  double baseline_threshold_voltage = 0.0;   // V_TH0, V

  double area() const { return width * length; }
  double oxide_capacitance_per_area() const;  // eps_ox*eps0/t_ox, F/m^2
  void validate() const;
};

// Elements of the small-signal equivalent circuit at a given occupancy.
// c_eq is the sum of the two series branches: (C_ox || C_s via series) over
// the area, plus the receptor/ligand/double-layer series chain. c_p is the
// inverse-capacitance sum of that second chain (1/F). c_eq_prime is the
// effective capacitance filtering the layer thermal noise.
struct CapacitanceBreakdown {
  double c_ox_area = 0;    // F/m^2
  double c_rec = 0;        // F
  double c_layer = 0;      // F
  double c_eq = 0;         // F
  double c_p = 0;          // 1/F
  double c_eq_prime = 0;   // F
  bool degenerate = false; // n_bound == 0: ligand branch dropped (c_p infinite)
};

CapacitanceBreakdown capacitances(double n_bound, const TransducerConfig& cfg,
                                  const LigandReceptorPair& pair,
                                  const RecognitionLayer& layer);

// Surface-potential shift for an explicit bound-ligand charge [C] at an
// explicit occupancy: charge / C_eq(n_bound). Zero charge gives exactly 0.
// This is the arithmetic the stochastic path shares with potential_shift.
double potential_from_charge(double charge, double n_bound, const TransducerConfig& cfg,
                             const LigandReceptorPair& pair, const RecognitionLayer& layer);

// Mean threshold-voltage shift at steady state for ligand concentration c:
//   dPsi = N_B(c) * N_e * q_eff(L_R, lambda_D) / C_eq(N_B(c))   [V].
double potential_shift(double concentration, const TransducerConfig& cfg,
                       const LigandReceptorPair& pair, const RecognitionLayer& layer,
                       const Environment& env);

// g_m = (W/L) mu_eff C_ox V_DS  [S].
double transconductance(const TransducerConfig& cfg);

// Mean channel-current shift, g_m * potential_shift  [A].
double current_shift(double concentration, const TransducerConfig& cfg,
                     const LigandReceptorPair& pair, const RecognitionLayer& layer,
                     const Environment& env);

// Linear-regime bias current (W/L) mu_eff C_ox (V_GS - V_TH0) V_DS [A].
// Requires gate_source_voltage; throws UnsupportedOperation otherwise.
double baseline_current(const TransducerConfig& cfg);

// Analytical sensitivity d(dI_DS)/dc [A m^3], evaluated as the exact closed-
// form derivative of the current_shift chain (occupancy and capacitance terms
// both concentration-dependent). Strictly positive; c must be > 0.
double sensitivity(double concentration, const TransducerConfig& cfg,
                   const LigandReceptorPair& pair, const RecognitionLayer& layer,
                   const Environment& env);

} // namespace biofet
