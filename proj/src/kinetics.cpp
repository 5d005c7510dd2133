#include "biofet/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace biofet {

void LigandReceptorPair::validate() const {
  if (!(k_on > 0.0)) throw std::invalid_argument("pair: k_on must be > 0");
  if (!(k_off > 0.0)) throw std::invalid_argument("pair: k_off must be > 0");
  if (!(receptor_length > 0.0))
    throw std::invalid_argument("pair: receptor_length must be > 0");
  if (!(electrons_per_ligand >= 0.0))
    throw std::invalid_argument("pair: electrons_per_ligand must be >= 0");
  if (!(receptor_capacitance > 0.0) || !(ligand_capacitance > 0.0))
    throw std::invalid_argument("pair: molecular capacitances must be > 0");
}

RecognitionLayer RecognitionLayer::from_density(double density, double width, double length) {
  RecognitionLayer layer;
  layer.receptor_density = density;
  layer.receptor_count = density * width * length;
  layer.validate();
  return layer;
}

void RecognitionLayer::validate() const {
  if (!(receptor_density > 0.0))
    throw std::invalid_argument("layer: receptor_density must be > 0");
  if (!(receptor_count >= 1.0))
    throw std::invalid_argument("layer: receptor_count must be >= 1 (got " +
                                std::to_string(receptor_count) + ")");
}

void MessageSchedule::validate() const {
  if (levels.empty()) throw std::invalid_argument("schedule: levels must be non-empty");
  for (double c : levels)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("schedule: levels must be finite and >= 0");
  if (!(symbol_rate > 0.0)) throw std::invalid_argument("schedule: symbol_rate must be > 0");
}

double dissociation_constant(const LigandReceptorPair& pair) {
  return pair.k_off / pair.k_on;
}

double binding_timescale(double concentration, const LigandReceptorPair& pair) {
  if (concentration < 0.0) throw std::domain_error("binding_timescale: concentration < 0");
  return 1.0 / (pair.k_on * concentration + pair.k_off);
}

double mean_bound_steady(double concentration, const LigandReceptorPair& pair,
                         const RecognitionLayer& layer) {
  if (concentration < 0.0) throw std::domain_error("mean_bound_steady: concentration < 0");
  if (concentration == 0.0) return 0.0;
  return layer.receptor_count * concentration / (concentration + dissociation_constant(pair));
}

double mean_bound_transient(double prev_bound, double concentration,
                            const LigandReceptorPair& pair, const RecognitionLayer& layer,
                            double elapsed) {
  if (prev_bound < 0.0 || prev_bound > layer.receptor_count)
    throw std::domain_error("mean_bound_transient: prev_bound outside [0, N_R]");
  if (elapsed < 0.0) throw std::domain_error("mean_bound_transient: elapsed < 0");
  const double n_ss = mean_bound_steady(concentration, pair, layer);
  return n_ss + (prev_bound - n_ss) * std::exp(-elapsed / binding_timescale(concentration, pair));
}

double bound_variance(double concentration, const LigandReceptorPair& pair,
                      const RecognitionLayer& layer) {
  if (concentration < 0.0) throw std::domain_error("bound_variance: concentration < 0");
  const double rate = pair.k_on * concentration + pair.k_off;
  return layer.receptor_count * pair.k_off * pair.k_on * concentration / (rate * rate);
}

double binding_acf(double lag, double concentration, const LigandReceptorPair& pair,
                   const RecognitionLayer& layer) {
  if (lag < 0.0) throw std::domain_error("binding_acf: lag < 0");
  return bound_variance(concentration, pair, layer) *
         std::exp(-lag / binding_timescale(concentration, pair));
}

double binding_noise_psd(double frequency, double concentration,
                         const LigandReceptorPair& pair, const RecognitionLayer& layer) {
  if (!std::isfinite(frequency)) throw std::domain_error("binding_noise_psd: f not finite");
  const double tau = binding_timescale(concentration, pair);
  const double w = 2.0 * 3.14159265358979323846 * frequency * tau;
  return bound_variance(concentration, pair, layer) * 2.0 * tau / (1.0 + w * w);
}

double min_symbol_duration(double concentration, const LigandReceptorPair& pair) {
  return 10.0 * binding_timescale(concentration, pair);
}

bool schedule_reaches_steady_state(const MessageSchedule& schedule,
                                   const LigandReceptorPair& pair) {
  for (double c : schedule.levels)
    if (schedule.symbol_duration() < min_symbol_duration(c, pair)) return false;
  return true;
}

} // namespace biofet
