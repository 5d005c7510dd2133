#include "biofet/noise.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace biofet {

namespace {

constexpr double quad_rel_tol = 1e-6;

double adaptive_integral(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 14, quad_rel_tol);
}

// V_m = N_e q_eff / C_eq(c): threshold shift from one bound ligand.
double single_ligand_voltage(double concentration, const TransducerConfig& cfg,
                             const LigandReceptorPair& pair, const RecognitionLayer& layer,
                             const Environment& env) {
  const double n_bound = mean_bound_steady(concentration, pair, layer);
  const auto caps = capacitances(n_bound, cfg, pair, layer);
  return ligand_charge(pair, debye_length(env)) / caps.c_eq;
}

double flicker_coefficient(const TransducerConfig& cfg, const Environment& env) {
  using namespace constants;
  const double c_ox = cfg.oxide_capacitance_per_area();
  // N_t is per eV; k_B T q N_t == q^2 N_t (kT in eV), keeping the result in V^2.
  return cfg.tunneling_distance * k_boltzmann * env.temperature * q_elementary *
         cfg.trap_density / (cfg.area() * c_ox * c_ox);
}

} // namespace

void Band::validate() const {
  if (!(f_min > 0.0) || !(f_max > f_min) || !std::isfinite(f_max))
    throw std::invalid_argument("band: require 0 < f_min < f_max (flicker diverges at f=0)");
}

double binding_voltage_psd(double frequency, double concentration,
                           const TransducerConfig& cfg, const LigandReceptorPair& pair,
                           const RecognitionLayer& layer, const Environment& env) {
  const double vm = single_ligand_voltage(concentration, cfg, pair, layer, env);
  return binding_noise_psd(frequency, concentration, pair, layer) * vm * vm;
}

double thermal_voltage_psd(double frequency, double concentration,
                           const TransducerConfig& cfg, const LigandReceptorPair& pair,
                           const RecognitionLayer& layer, const Environment& env) {
  const double n_bound = mean_bound_steady(concentration, pair, layer);
  const auto caps = capacitances(n_bound, cfg, pair, layer);
  const double floor = 4.0 * constants::k_boltzmann * env.temperature * cfg.layer_resistance;
  const double w = 2.0 * constants::pi * cfg.layer_resistance * caps.c_eq_prime * frequency;
  return floor / (1.0 + w * w);
}

double flicker_voltage_psd(double frequency, const TransducerConfig& cfg,
                           const Environment& env) {
  if (frequency == 0.0)
    throw std::domain_error("flicker_voltage_psd: singular at f = 0; band must exclude 0");
  return flicker_coefficient(cfg, env) / std::fabs(frequency);
}

double total_voltage_psd(double frequency, double concentration,
                         const TransducerConfig& cfg, const LigandReceptorPair& pair,
                         const RecognitionLayer& layer, const Environment& env) {
  return binding_voltage_psd(frequency, concentration, cfg, pair, layer, env) +
         thermal_voltage_psd(frequency, concentration, cfg, pair, layer, env) +
         flicker_voltage_psd(frequency, cfg, env);
}

double flicker_band_power(const Band& band, const TransducerConfig& cfg,
                          const Environment& env) {
  band.validate();
  return 2.0 * flicker_coefficient(cfg, env) * std::log(band.f_max / band.f_min);
}

NoiseBudget noise_budget(double concentration, const TransducerConfig& cfg,
                         const LigandReceptorPair& pair, const RecognitionLayer& layer,
                         const Environment& env, const Band& band, SignalModel signal) {
  band.validate();
  if (concentration < 0.0) throw std::domain_error("noise_budget: concentration < 0");

  NoiseBudget budget;
  budget.binding_power =
      concentration == 0.0
          ? 0.0
          : 2.0 * adaptive_integral(
                      [&](double f) {
                        return binding_voltage_psd(f, concentration, cfg, pair, layer, env);
                      },
                      band.f_min, band.f_max);
  budget.thermal_power =
      2.0 * adaptive_integral(
                [&](double f) {
                  return thermal_voltage_psd(f, concentration, cfg, pair, layer, env);
                },
                band.f_min, band.f_max);
  budget.flicker_power = flicker_band_power(band, cfg, env);
  budget.total_power = budget.binding_power + budget.thermal_power + budget.flicker_power;

  const double gm = transconductance(cfg);
  double signal_current = 0.0;
  switch (signal) {
    case SignalModel::deviation:
      signal_current = current_shift(concentration, cfg, pair, layer, env);
      break;
    case SignalModel::absolute_bias:
      signal_current = baseline_current(cfg);
      break;
  }
  budget.signal_power = signal_current * signal_current;

  const double noise_current_power = budget.total_power * gm * gm;
  budget.snr_db = budget.signal_power > 0.0
                      ? 10.0 * std::log10(budget.signal_power / noise_current_power)
                      : -std::numeric_limits<double>::infinity();
  return budget;
}

double snr_db(double concentration, const TransducerConfig& cfg,
              const LigandReceptorPair& pair, const RecognitionLayer& layer,
              const Environment& env, const Band& band, SignalModel signal) {
  return noise_budget(concentration, cfg, pair, layer, env, band, signal).snr_db;
}

std::optional<double> limit_of_detection(const TransducerConfig& cfg,
                                         const LigandReceptorPair& pair,
                                         const RecognitionLayer& layer,
                                         const Environment& env, const Band& band,
                                         double threshold_db, double c_min, double c_max,
                                         int n_points) {
  if (!(c_min > 0.0) || !(c_max > c_min) || n_points < 2)
    throw std::invalid_argument("limit_of_detection: bad scan grid");
  const double step = std::log(c_max / c_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double c = c_min * std::exp(step * i);
    if (snr_db(c, cfg, pair, layer, env, band) >= threshold_db) return c;
  }
  return std::nullopt;
}

Spectrum tabulate_total_psd(double concentration, const TransducerConfig& cfg,
                            const LigandReceptorPair& pair, const RecognitionLayer& layer,
                            const Environment& env, const Band& band, int n_points) {
  band.validate();
  if (n_points < 2) throw std::invalid_argument("tabulate_total_psd: n_points < 2");
  Spectrum s;
  s.band = band;
  s.frequencies.reserve(n_points);
  s.values.reserve(n_points);
  const double step = std::log(band.f_max / band.f_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double f = band.f_min * std::exp(step * i);
    s.frequencies.push_back(f);
    s.values.push_back(total_voltage_psd(f, concentration, cfg, pair, layer, env));
  }
  return s;
}

} // namespace biofet
