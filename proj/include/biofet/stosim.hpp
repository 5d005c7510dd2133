#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "biofet/noise.hpp"

namespace biofet {

inline constexpr std::uint64_t default_seed = 11603943;

// A background species competing for the same receptor pool.
struct InterfererSpecies {
  double concentration = 0;  // molecules/m^3, constant over the run
  double k_on = 0;           // m^3/s
  double k_off = 0;          // 1/s
  double electrons = 0;      // mean free electrons per molecule
  double receptor_length_equivalent = 0;  // m, distance used for its q_eff
};

// Which noise paths contribute to a synthesized output. Binding noise is the
// intrinsic stochasticity of the receptor Markov chain; thermal and flicker
// are generated by spectral shaping and added on top.
struct NoiseFlags {
  bool binding = true;
  bool thermal = true;
  bool flicker = true;

  static NoiseFlags none() { return {false, false, false}; }
  static NoiseFlags all() { return {true, true, true}; }
};

// What the transducer needs to know about one bound species: its mean free
// electrons and the distance its charge sits from the channel.
struct SpeciesCharge {
  double electrons = 0;
  double charge_distance = 0;  // m
};

// Uniformly sampled realization. Sample j is the state at time j*dt; species
// 0 is the information ligand, species k>=1 the (k-1)th interferer.
struct Trace {
  double dt = 0;                              // s
  std::uint64_t rng_seed = 0;
  std::vector<SpeciesCharge> species;         // charge model per species
  std::vector<std::vector<double>> n_bound;   // [species][sample], counts
  std::vector<double> delta_vth;              // V, filled by synthesize_output
  std::vector<double> delta_ids;              // A, filled by synthesize_output

  std::size_t samples() const { return n_bound.empty() ? 0 : n_bound.front().size(); }
  std::size_t species_count() const { return n_bound.size(); }
  double time_at(std::size_t j) const { return static_cast<double>(j) * dt; }
  double total_bound(std::size_t j) const;
};

struct OccupancySim {
  MessageSchedule schedule;
  LigandReceptorPair pair;
  RecognitionLayer layer;
  std::vector<InterfererSpecies> interferers;
  double dt = 0;                       // s; must be <= 0.1 * min tau_B over species/levels
  std::uint64_t seed = default_seed;
  bool stochastic = true;              // false: deterministic mean-field relaxation
  std::vector<double> initial_bound;   // per species; empty = steady state of first level
};

// Per-receptor Markov chain over the shared receptor pool, advanced with
// fixed-step Bernoulli transitions: free -> bound(s) w.p. k_on(s) c_s dt
// (first-reaction choice among species), bound(s) -> free w.p. k_off(s) dt.
// Receptor exchangeability makes aggregate binomial/multinomial draws
// distributionally identical to per-receptor sampling, so transitions are
// drawn per species count. Deterministic for a fixed seed.
Trace simulate_occupancy(const OccupancySim& sim);

// Fills delta_vth/delta_ids from the occupancy:
//   dV(t) = sum_s n_s(t) N_e,s q_eff,s / C_eq(n_total(t)),  dI = g_m dV,
// then adds thermal/flicker noise per `flags`, synthesized by frequency-
// domain shaping of white Gaussian noise over [1/T_trace, 1/(2dt)].
// If `required_band` is given, it must fit inside that synthesizable range.
void synthesize_output(Trace& trace, const TransducerConfig& cfg,
                       const LigandReceptorPair& pair, const RecognitionLayer& layer,
                       const Environment& env, const NoiseFlags& flags,
                       const std::optional<Band>& required_band = std::nullopt);

struct AcfEstimate {
  double dt = 0;
  std::vector<double> values;  // R(k*dt), k = 0..K; values[0] is the sample variance

  double lag_at(std::size_t k) const { return static_cast<double>(k) * dt; }
};

// Unbiased sample autocovariance of one species' bound count after dropping
// `burn_in` seconds. Throws InsufficientData when the trace is shorter than
// burn_in + 10*max_lag.
AcfEstimate empirical_acf(const Trace& trace, std::size_t species, double max_lag,
                          double burn_in);

// Least-squares exponential timescale of an ACF estimate: log-linear fit over
// the head with R(k) > 0.2 R(0), where the relative estimation noise is
// small. NaN when fewer than 3 usable points.
double acf_fit_timescale(const AcfEstimate& acf);

struct WelchEstimate {
  std::vector<double> frequencies;  // Hz, positive bins
  std::vector<double> values;       // two-sided density, unit^2/Hz
};

// Welch-averaged periodogram: Hann window, 50% overlap, per-segment mean
// removal, two-sided normalization.
WelchEstimate welch_psd(std::span<const double> series, double dt,
                        std::size_t segment_length);

// Threshold detector sampling delta_ids at the end of each symbol interval.
// thresholds must be strictly increasing with size == levels-1 of the
// schedule's alphabet; returns one level index per symbol.
std::vector<std::size_t> demodulate_csk(const Trace& trace, const MessageSchedule& schedule,
                                        const std::vector<double>& thresholds);

struct SerResult {
  double ser = 0;
  double ci_low = 0;   // Wilson 95% interval
  double ci_high = 0;
  std::uint64_t error_count = 0;
  std::uint64_t symbol_count = 0;
};

struct SerExperiment {
  std::vector<double> alphabet;  // candidate levels, molecules/m^3, ascending
  std::size_t n_symbols = 10000;
  double symbol_rate = 0;        // 0: 1/(20 * slowest tau_B over the alphabet)
  double dt = 0;                 // 0: 0.1 * fastest tau_B
  LigandReceptorPair pair;
  RecognitionLayer layer;
  TransducerConfig transducer;
  Environment environment;
  NoiseFlags noise = NoiseFlags::all();
  std::vector<double> thresholds;  // empty: midpoints of the analytic dI_DS levels
  std::uint64_t seed = default_seed;
};

// End-to-end Monte-Carlo symbol error rate: random equiprobable symbol
// stream, occupancy simulation, output synthesis, threshold demodulation.
// Deterministic for a fixed seed (independent sub-streams are derived from
// it for the symbols, the trace and the synthesized noise).
SerResult estimate_ser(const SerExperiment& exp);

// Wilson score interval for `successes` out of `trials` at 95% confidence.
void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& lo, double& hi);

// Trace CSV: time_s, n_bound[_species_k]..., delta_vth_V, delta_ids_A.
std::string trace_to_csv(const Trace& trace);

} // namespace biofet
