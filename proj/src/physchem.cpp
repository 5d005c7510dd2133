#include "biofet/physchem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "biofet/kinetics.hpp"

namespace biofet {

void Environment::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw std::invalid_argument("environment: temperature must be > 0 (got " +
                                std::to_string(temperature) + " K)");
  if (!(ionic_concentration > 0.0) || !std::isfinite(ionic_concentration))
    throw std::invalid_argument("environment: ionic_concentration must be > 0 (got " +
                                std::to_string(ionic_concentration) + " mol/m^3)");
  if (!(relative_permittivity >= 1.0) || !std::isfinite(relative_permittivity))
    throw std::invalid_argument("environment: relative_permittivity must be >= 1");
}

double debye_length(const Environment& env) {
  env.validate();
  using namespace constants;
  const double num = env.relative_permittivity * eps_vacuum * k_boltzmann * env.temperature;
  const double den = 2.0 * n_avogadro * q_elementary * q_elementary * env.ionic_concentration;
  const double lambda = std::sqrt(num / den);
  if (!std::isfinite(lambda) || lambda <= 0.0)
    throw std::invalid_argument("debye_length: non-finite result for this environment");
  return lambda;
}

double effective_charge_per_electron(double r, double lambda_d) {
  if (r < 0.0) throw std::domain_error("effective_charge_per_electron: r must be >= 0");
  if (!(lambda_d > 0.0))
    throw std::domain_error("effective_charge_per_electron: lambda_d must be > 0");
  return constants::q_elementary * std::exp(-r / lambda_d);
}

double ligand_charge(const LigandReceptorPair& pair, double lambda_d) {
  pair.validate();
  return pair.electrons_per_ligand *
         effective_charge_per_electron(pair.receptor_length, lambda_d);
}

} // namespace biofet
