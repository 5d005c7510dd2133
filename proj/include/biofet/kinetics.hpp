#pragma once

#include <cstddef>
#include <vector>

namespace biofet {

// Kinetic and electrostatic description of one ligand/receptor chemistry.
struct LigandReceptorPair {
  double k_on = 2e-18;                    // association rate, m^3/s
  double k_off = 10.0;                    // dissociation rate, 1/s
  double receptor_length = 4e-9;          // L_R, m
  double electrons_per_ligand = 4.0;      // N_e, mean free electrons per ligand
  double receptor_capacitance = 2e-20;    // C_mol,R, F
  double ligand_capacitance = 2e-20;      // C_mol,L, F

  void validate() const;
};

// Receptor population on the active area. receptor_count = density * W * L is
// kept real-valued for the analytical formulas; the stochastic simulator
// rounds it to the nearest integer >= 1.
struct RecognitionLayer {
  double receptor_density = 2e16;  // c_R, 1/m^2
  double receptor_count = 1e4;     // N_R

  static RecognitionLayer from_density(double density, double width, double length);
  void validate() const;
};

// CSK symbol sequence: the recognition layer sees concentration levels[i]
// on [t_i, t_i + 1/B) with t_i = start_time + i/B.
struct MessageSchedule {
  std::vector<double> levels;  // molecules/m^3, one entry per symbol
  double symbol_rate = 2.5;    // B, 1/s
  double start_time = 0.0;     // s

  double symbol_duration() const { return 1.0 / symbol_rate; }
  double start_of(std::size_t i) const { return start_time + static_cast<double>(i) / symbol_rate; }
  double duration() const { return static_cast<double>(levels.size()) / symbol_rate; }
  void validate() const;
};

// K_D = k_off/k_on, molecules/m^3.
double dissociation_constant(const LigandReceptorPair& pair);

// Reaction timescale tau_B = 1/(k_on*c + k_off), s. Sets both the adaptation
// speed of the layer and the correlation time of the binding noise.
double binding_timescale(double concentration, const LigandReceptorPair& pair);

// Steady-state mean bound count, N_R * c/(c + K_D). In [0, N_R).
double mean_bound_steady(double concentration, const LigandReceptorPair& pair,
                         const RecognitionLayer& layer);

// Relaxation from prev_bound toward the steady state of `concentration`:
//   N_ss + (prev_bound - N_ss) * exp(-elapsed/tau_B).
double mean_bound_transient(double prev_bound, double concentration,
                            const LigandReceptorPair& pair, const RecognitionLayer& layer,
                            double elapsed);

// Binomial steady-state variance of the bound count,
//   N_R * k_off*k_on*c / (k_on*c + k_off)^2 = N_R * p(1-p).
double bound_variance(double concentration, const LigandReceptorPair& pair,
                      const RecognitionLayer& layer);

// Single-exponential autocorrelation of the stationary occupancy
// fluctuations: Var * exp(-lag/tau_B). lag >= 0.
double binding_acf(double lag, double concentration, const LigandReceptorPair& pair,
                   const RecognitionLayer& layer);

// Two-sided Lorentzian PSD of the occupancy fluctuations,
//   Var * 2 tau_B / (1 + (2 pi f tau_B)^2)   [1/Hz].
// Even in f; integrates to Var over the whole axis.
double binding_noise_psd(double frequency, double concentration,
                         const LigandReceptorPair& pair, const RecognitionLayer& layer);

// Shortest symbol duration for which end-of-symbol sampling is effectively at
// steady state (10 tau_B at the given level).
double min_symbol_duration(double concentration, const LigandReceptorPair& pair);

// True when every symbol interval of the schedule is at least 10 tau_B of its
// level, i.e. steady-state sampling is a valid assumption.
bool schedule_reaches_steady_state(const MessageSchedule& schedule,
                                   const LigandReceptorPair& pair);

} // namespace biofet
