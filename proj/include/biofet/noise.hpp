#pragma once

#include <optional>
#include <vector>

#include "biofet/transducer.hpp"

namespace biofet {

// Integration band for noise power; 0 < f_min < f_max. All PSDs here are
// two-sided, so band powers integrate over +-[f_min, f_max]. The flicker
// divergence at f=0 makes f_min mandatory.
struct Band {
  double f_min = 1e-2;  // Hz
  double f_max = 1e3;   // Hz

  void validate() const;
};

// Two-sided-symmetric PSD sampled on the positive-frequency side of `band`.
struct Spectrum {
  std::vector<double> frequencies;  // Hz, strictly increasing, > 0
  std::vector<double> values;       // unit^2/Hz, two-sided density
  Band band;
};

// Band-integrated noise powers at the threshold-voltage node (V^2, counting
// both spectral half-axes) plus the resulting SNR.
struct NoiseBudget {
  double binding_power = 0;  // V^2
  double thermal_power = 0;  // V^2
  double flicker_power = 0;  // V^2
  double total_power = 0;    // V^2
  double signal_power = 0;   // A^2 (1 Ohm convention)
  double snr_db = 0;         // -inf when the signal is zero
};

// Numerator convention for the SNR: the message-induced current deviation
// (default), or the absolute bias current (requires gate_source_voltage).
enum class SignalModel { deviation, absolute_bias };

// Binding-noise PSD referred to the threshold voltage:
//   S_dNB(f) * V_m^2  with  V_m = N_e q_eff / C_eq(c)   [V^2/Hz].
double binding_voltage_psd(double frequency, double concentration,
                           const TransducerConfig& cfg, const LigandReceptorPair& pair,
                           const RecognitionLayer& layer, const Environment& env);

// Thermal noise of the bound-ligand layer, low-pass filtered by the
// equivalent RC:  4 k_B T R_layer / (1 + (2 pi R_layer C_eq' f)^2)  [V^2/Hz].
double thermal_voltage_psd(double frequency, double concentration,
                           const TransducerConfig& cfg, const LigandReceptorPair& pair,
                           const RecognitionLayer& layer, const Environment& env);

// Trap-induced 1/f channel noise (number-fluctuation model):
//   lambda k_B T q N_t / (W L C_ox^2 |f|)  [V^2/Hz],
// with N_t per eV (the kT/q factor folds the eV into SI). Message-independent.
// f == 0 is a singularity error.
double flicker_voltage_psd(double frequency, const TransducerConfig& cfg,
                           const Environment& env);

// Sum of the three (uncorrelated) components. f != 0.
double total_voltage_psd(double frequency, double concentration,
                         const TransducerConfig& cfg, const LigandReceptorPair& pair,
                         const RecognitionLayer& layer, const Environment& env);

// Closed-form two-sided flicker power over the band: 2 * coef * ln(fmax/fmin).
double flicker_band_power(const Band& band, const TransducerConfig& cfg,
                          const Environment& env);

// Band powers of all components (binding and thermal by adaptive quadrature
// at 1e-6 relative tolerance, flicker in closed form) and the SNR
//   10 log10( dI_DS^2 / (2 g_m^2 Int_band S_dVTH df) ).
NoiseBudget noise_budget(double concentration, const TransducerConfig& cfg,
                         const LigandReceptorPair& pair, const RecognitionLayer& layer,
                         const Environment& env, const Band& band,
                         SignalModel signal = SignalModel::deviation);

double snr_db(double concentration, const TransducerConfig& cfg,
              const LigandReceptorPair& pair, const RecognitionLayer& layer,
              const Environment& env, const Band& band,
              SignalModel signal = SignalModel::deviation);

// Smallest concentration on a log grid [c_min, c_max] (n points) whose SNR
// reaches threshold_db; nullopt when none does.
std::optional<double> limit_of_detection(const TransducerConfig& cfg,
                                         const LigandReceptorPair& pair,
                                         const RecognitionLayer& layer,
                                         const Environment& env, const Band& band,
                                         double threshold_db, double c_min, double c_max,
                                         int n_points);

// Total threshold-voltage noise PSD tabulated on a log grid over the band.
Spectrum tabulate_total_psd(double concentration, const TransducerConfig& cfg,
                            const LigandReceptorPair& pair, const RecognitionLayer& layer,
                            const Environment& env, const Band& band, int n_points);

} // namespace biofet
