#include "biofet/transducer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "biofet/errors.hpp"

namespace biofet {

double TransducerConfig::oxide_capacitance_per_area() const {
  return oxide_rel_permittivity * constants::eps_vacuum / oxide_thickness;
}

void TransducerConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("transducer: ") + name + " must be > 0");
  };
  positive(width, "width");
  positive(length, "length");
  positive(oxide_thickness, "oxide_thickness");
  positive(oxide_rel_permittivity, "oxide_rel_permittivity");
  positive(effective_mobility, "effective_mobility");
  positive(drain_source_voltage, "drain_source_voltage");
  positive(dl_capacitance_per_area, "dl_capacitance_per_area");
  positive(semiconductor_capacitance_per_area, "semiconductor_capacitance_per_area");
  positive(trap_density, "trap_density");
  positive(tunneling_distance, "tunneling_distance");
  positive(layer_resistance, "layer_resistance");
}

CapacitanceBreakdown capacitances(double n_bound, const TransducerConfig& cfg,
                                  const LigandReceptorPair& pair,
                                  const RecognitionLayer& layer) {
  if (n_bound < 0.0) throw std::domain_error("capacitances: n_bound < 0");
  CapacitanceBreakdown b;
  const double area = cfg.area();
  b.c_ox_area = cfg.oxide_capacitance_per_area();
  b.c_rec = layer.receptor_count * pair.receptor_capacitance;
  b.c_layer = n_bound * pair.ligand_capacitance;

  const double area_branch =
      1.0 / (1.0 / (b.c_ox_area * area) +
             1.0 / (cfg.semiconductor_capacitance_per_area * area));

  // Inverse capacitance of the receptor/ligand/double-layer series chain;
  // the n_bound = 0 degeneracy drops the whole chain (its charge is 0 too).
  if (n_bound == 0.0) {
    b.degenerate = true;
    b.c_p = std::numeric_limits<double>::infinity();
    b.c_eq = area_branch;
  } else {
    b.c_p = 1.0 / b.c_rec + 1.0 / b.c_layer + 1.0 / (cfg.dl_capacitance_per_area * area);
    b.c_eq = area_branch + 1.0 / b.c_p;
  }

  const double series_per_area = 1.0 / cfg.dl_capacitance_per_area +
                                 1.0 / b.c_ox_area +
                                 1.0 / cfg.semiconductor_capacitance_per_area;
  b.c_eq_prime = b.c_layer + 1.0 / (series_per_area / area + 1.0 / b.c_rec);
  return b;
}

double potential_from_charge(double charge, double n_bound, const TransducerConfig& cfg,
                             const LigandReceptorPair& pair, const RecognitionLayer& layer) {
  if (charge == 0.0) return 0.0;
  return charge / capacitances(n_bound, cfg, pair, layer).c_eq;
}

double potential_shift(double concentration, const TransducerConfig& cfg,
                       const LigandReceptorPair& pair, const RecognitionLayer& layer,
                       const Environment& env) {
  const double n_bound = mean_bound_steady(concentration, pair, layer);
  const double charge = n_bound * ligand_charge(pair, debye_length(env));
  return potential_from_charge(charge, n_bound, cfg, pair, layer);
}

double transconductance(const TransducerConfig& cfg) {
  return (cfg.width / cfg.length) * cfg.effective_mobility *
         cfg.oxide_capacitance_per_area() * cfg.drain_source_voltage;
}

double current_shift(double concentration, const TransducerConfig& cfg,
                     const LigandReceptorPair& pair, const RecognitionLayer& layer,
                     const Environment& env) {
  return transconductance(cfg) * potential_shift(concentration, cfg, pair, layer, env);
}

double baseline_current(const TransducerConfig& cfg) {
  if (!cfg.gate_source_voltage)
    throw UnsupportedOperation("baseline_current: gate_source_voltage not configured");
  const double overdrive = *cfg.gate_source_voltage - cfg.baseline_threshold_voltage;
  if (overdrive < 0.0)
    throw std::domain_error("baseline_current: V_GS below V_TH0, device off");
  return (cfg.width / cfg.length) * cfg.effective_mobility *
         cfg.oxide_capacitance_per_area() * overdrive * cfg.drain_source_voltage;
}

double sensitivity(double concentration, const TransducerConfig& cfg,
                   const LigandReceptorPair& pair, const RecognitionLayer& layer,
                   const Environment& env) {
  if (!(concentration > 0.0))
    throw std::domain_error("sensitivity: concentration must be > 0 (ligand branch singular)");
  const double kd = dissociation_constant(pair);
  const double n_bound = mean_bound_steady(concentration, pair, layer);
  const auto caps = capacitances(n_bound, cfg, pair, layer);
  const double q_per_ligand = ligand_charge(pair, debye_length(env));

  // d(dI)/dc of the full chain dI = g_m * N_B(c) * q_lig / C_eq(N_B(c)):
  // dN_B/dc = N_R K_D/(c+K_D)^2 and dC_eq/dN_B = 1/(C_p^2 N_B^2 C_mol,L).
  const double dn_dc = layer.receptor_count * kd / ((concentration + kd) * (concentration + kd));
  const double dceq_dn = 1.0 / (caps.c_p * caps.c_p * n_bound * n_bound * pair.ligand_capacitance);
  return transconductance(cfg) * q_per_ligand * dn_dc *
         (caps.c_eq - n_bound * dceq_dn) / (caps.c_eq * caps.c_eq);
}

} // namespace biofet
