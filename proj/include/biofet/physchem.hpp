#pragma once

#include "biofet/constants.hpp"

namespace biofet {

// Ionic/thermal/dielectric state of the fluid medium. Strict SI throughout:
// ionic concentration in mol/m^3 (1 mM == 1 mol/m^3).
struct Environment {
  double temperature = 298.0;           // K
  double ionic_concentration = 70.0;    // mol/m^3
  double relative_permittivity = 78.0;  // eps_R/eps_0 of the solvent

  void validate() const;  // throws std::invalid_argument
};

// Electrostatic screening length of the electrolyte,
//   lambda_D = sqrt(eps_R eps_0 k_B T / (2 N_A q^2 c_ion))  [m].
// Scales as c_ion^(-1/2).
double debye_length(const Environment& env);

// Mean effective charge contributed by one ligand electron at distance r
// from the channel surface: q * exp(-r/lambda_d)  [C]. In (0, q] for r >= 0.
double effective_charge_per_electron(double r, double lambda_d);

struct LigandReceptorPair;

// Screened charge per bound ligand molecule, N_e * q_eff(L_R, lambda_d) [C].
// The electron distance is taken equal to the receptor length.
double ligand_charge(const LigandReceptorPair& pair, double lambda_d);

} // namespace biofet
