#include "biofet/stosim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "biofet/errors.hpp"

namespace biofet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FFTW plan creation is not thread safe; execution is.
std::mutex fftw_plan_mutex;

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> irfft(std::vector<std::complex<double>> half, std::size_t n) {
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(half.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= static_cast<double>(n);  // FFTW leaves the 1/N off
  return out;
}

struct SpeciesKinetics {
  double k_on = 0;
  double k_off = 0;
  std::string name;
};

long binomial_draw(std::mt19937_64& rng, long n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<long> dist(n, p);
  return dist(rng);
}

// Competitive Langmuir equilibrium fractions over the shared pool:
// p_s = (c_s/K_s) / (1 + sum_j c_j/K_j).
std::vector<double> competitive_steady_fractions(const std::vector<SpeciesKinetics>& species,
                                                 const std::vector<double>& conc) {
  double load = 1.0;
  std::vector<double> x(species.size());
  for (std::size_t s = 0; s < species.size(); ++s) {
    x[s] = conc[s] * species[s].k_on / species[s].k_off;
    load += x[s];
  }
  for (double& v : x) v /= load;
  return x;
}

} // namespace

double Trace::total_bound(std::size_t j) const {
  double total = 0.0;
  for (const auto& s : n_bound) total += s[j];
  return total;
}

Trace simulate_occupancy(const OccupancySim& sim) {
  sim.schedule.validate();
  sim.pair.validate();
  sim.layer.validate();
  if (!(sim.dt > 0.0)) throw std::invalid_argument("simulate_occupancy: dt must be > 0");

  const std::size_t n_species = 1 + sim.interferers.size();
  std::vector<SpeciesKinetics> kin(n_species);
  kin[0] = {sim.pair.k_on, sim.pair.k_off, "ligand"};
  for (std::size_t i = 0; i < sim.interferers.size(); ++i) {
    const auto& sp = sim.interferers[i];
    if (!(sp.k_on > 0.0) || !(sp.k_off > 0.0) || sp.concentration < 0.0)
      throw std::invalid_argument("simulate_occupancy: interferer " + std::to_string(i + 1) +
                                  " has invalid rates or concentration");
    kin[i + 1] = {sp.k_on, sp.k_off, "interferer " + std::to_string(i + 1)};
  }

  // The step discipline is first-order in dt; require dt <= 0.1*tau_B for the
  // fastest exposure of every species.
  const double c_max_primary = *std::max_element(sim.schedule.levels.begin(),
                                                 sim.schedule.levels.end());
  double bind_prob_sum = 0.0;
  for (std::size_t s = 0; s < n_species; ++s) {
    const double c = s == 0 ? c_max_primary : sim.interferers[s - 1].concentration;
    const double tau = 1.0 / (kin[s].k_on * c + kin[s].k_off);
    if (sim.dt > 0.1 * tau) {
      std::ostringstream msg;
      msg << "simulate_occupancy: dt=" << sim.dt << " s exceeds 0.1*tau_B=" << 0.1 * tau
          << " s for species '" << kin[s].name << "'";
      throw std::invalid_argument(msg.str());
    }
    bind_prob_sum += kin[s].k_on * c * sim.dt;
  }
  if (bind_prob_sum >= 0.5)
    throw std::invalid_argument(
        "simulate_occupancy: combined per-step binding probability too large; reduce dt");

  const long n_receptors = std::max<long>(1, std::llround(sim.layer.receptor_count));
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(sim.schedule.duration() / sim.dt));
  if (n_steps == 0) throw std::invalid_argument("simulate_occupancy: schedule shorter than dt");

  Trace trace;
  trace.dt = sim.dt;
  trace.rng_seed = sim.seed;
  trace.species.resize(n_species);
  trace.species[0] = {sim.pair.electrons_per_ligand, sim.pair.receptor_length};
  for (std::size_t i = 0; i < sim.interferers.size(); ++i)
    trace.species[i + 1] = {sim.interferers[i].electrons,
                            sim.interferers[i].receptor_length_equivalent};
  trace.n_bound.assign(n_species, std::vector<double>(n_steps + 1, 0.0));

  // Initial state: supplied counts, or equilibrium with the first symbol.
  std::vector<double> conc(n_species);
  for (std::size_t s = 1; s < n_species; ++s) conc[s] = sim.interferers[s - 1].concentration;
  conc[0] = sim.schedule.levels.front();
  std::vector<double> state(n_species, 0.0);
  if (!sim.initial_bound.empty()) {
    if (sim.initial_bound.size() != n_species)
      throw std::invalid_argument("simulate_occupancy: initial_bound size != species count");
    state = sim.initial_bound;
  } else {
    const auto frac = competitive_steady_fractions(kin, conc);
    for (std::size_t s = 0; s < n_species; ++s) {
      state[s] = static_cast<double>(n_receptors) * frac[s];
      if (sim.stochastic) state[s] = std::floor(state[s] + 0.5);
    }
  }
  for (std::size_t s = 0; s < n_species; ++s) trace.n_bound[s][0] = state[s];

  std::mt19937_64 rng(splitmix64(sim.seed));
  const double symbol_duration = sim.schedule.symbol_duration();
  std::vector<double> deriv(n_species), k1(n_species), k2(n_species), k3(n_species),
      k4(n_species), tmp(n_species);

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * sim.dt;
    const double since_start = std::max(0.0, t - sim.schedule.start_time);
    const std::size_t symbol = std::min<std::size_t>(
        sim.schedule.levels.size() - 1,
        static_cast<std::size_t>(std::floor(since_start / symbol_duration)));
    conc[0] = sim.schedule.levels[symbol];

    if (sim.stochastic) {
      // Unbinding from the state at step start, binding from the pool free at
      // step start; one event per receptor per step.
      double bound_total = std::accumulate(state.begin(), state.end(), 0.0);
      long free_pool = n_receptors - static_cast<long>(bound_total);
      long remaining = free_pool;
      double residual_prob = 1.0;
      for (std::size_t s = 0; s < n_species; ++s) {
        const long unbind =
            binomial_draw(rng, static_cast<long>(state[s]), kin[s].k_off * sim.dt);
        const double p_bind = kin[s].k_on * conc[s] * sim.dt;
        const long bind = binomial_draw(rng, remaining, p_bind / residual_prob);
        remaining -= bind;
        residual_prob -= p_bind;
        state[s] += static_cast<double>(bind - unbind);
      }
    } else if (n_species == 1) {
      // Exact mean-field relaxation toward the current level.
      const double tau = 1.0 / (kin[0].k_on * conc[0] + kin[0].k_off);
      const double n_ss = static_cast<double>(n_receptors) * conc[0] * kin[0].k_on /
                          (kin[0].k_on * conc[0] + kin[0].k_off);
      state[0] = n_ss + (state[0] - n_ss) * std::exp(-sim.dt / tau);
    } else {
      // Coupled mean-field ODEs over the shared pool, RK4.
      auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        const double free_count =
            static_cast<double>(n_receptors) - std::accumulate(y.begin(), y.end(), 0.0);
        for (std::size_t s = 0; s < n_species; ++s)
          dy[s] = kin[s].k_on * conc[s] * free_count - kin[s].k_off * y[s];
      };
      rhs(state, k1);
      for (std::size_t s = 0; s < n_species; ++s) tmp[s] = state[s] + 0.5 * sim.dt * k1[s];
      rhs(tmp, k2);
      for (std::size_t s = 0; s < n_species; ++s) tmp[s] = state[s] + 0.5 * sim.dt * k2[s];
      rhs(tmp, k3);
      for (std::size_t s = 0; s < n_species; ++s) tmp[s] = state[s] + sim.dt * k3[s];
      rhs(tmp, k4);
      for (std::size_t s = 0; s < n_species; ++s)
        state[s] += sim.dt / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
    }

    for (std::size_t s = 0; s < n_species; ++s) trace.n_bound[s][step + 1] = state[s];
  }
  return trace;
}

void synthesize_output(Trace& trace, const TransducerConfig& cfg,
                       const LigandReceptorPair& pair, const RecognitionLayer& layer,
                       const Environment& env, const NoiseFlags& flags,
                       const std::optional<Band>& required_band) {
  if (trace.n_bound.empty() || trace.samples() == 0)
    throw std::invalid_argument("synthesize_output: occupancy trace missing");
  const std::size_t n = trace.samples();
  const std::size_t n_species = trace.species_count();
  if (trace.species.size() != n_species)
    throw std::invalid_argument("synthesize_output: species charge info missing");

  const double lambda_d = debye_length(env);
  std::vector<double> charge_per_molecule(n_species);
  for (std::size_t s = 0; s < n_species; ++s)
    charge_per_molecule[s] = trace.species[s].electrons *
                             effective_charge_per_electron(trace.species[s].charge_distance,
                                                           lambda_d);

  trace.delta_vth.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double charge = 0.0, total = 0.0;
    for (std::size_t s = 0; s < n_species; ++s) {
      charge += trace.n_bound[s][j] * charge_per_molecule[s];
      total += trace.n_bound[s][j];
    }
    trace.delta_vth[j] = potential_from_charge(charge, total, cfg, pair, layer);
  }

  if ((flags.thermal || flags.flicker) && n >= 4) {
    const double span = static_cast<double>(n) * trace.dt;
    const double f_lo = 1.0 / span;
    const double f_nyq = 1.0 / (2.0 * trace.dt);
    if (required_band) {
      required_band->validate();
      if (required_band->f_max > f_nyq * (1.0 + 1e-12) || required_band->f_min < f_lo)
        throw std::invalid_argument(
            "synthesize_output: requested noise band [" + std::to_string(required_band->f_min) +
            ", " + std::to_string(required_band->f_max) + "] Hz outside synthesizable [" +
            std::to_string(f_lo) + ", " + std::to_string(f_nyq) + "] Hz; adjust dt or length");
    }

    double mean_total = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean_total += trace.total_bound(j);
    mean_total /= static_cast<double>(n);
    const auto caps = capacitances(mean_total, cfg, pair, layer);
    const double thermal_floor =
        4.0 * constants::k_boltzmann * env.temperature * cfg.layer_resistance;
    const double rc = 2.0 * constants::pi * cfg.layer_resistance * caps.c_eq_prime;
    const double flicker_coef =
        flicker_voltage_psd(1.0, cfg, env);  // coefficient == PSD at 1 Hz

    // Gaussian spectral synthesis: Hermitian spectrum with E|X_k|^2 = N S(f_k)/dt.
    std::mt19937_64 rng(splitmix64(trace.rng_seed ^ 0x4e4f495345ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> half(n / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const double f = static_cast<double>(k) / span;
      double psd = 0.0;
      if (flags.thermal) psd += thermal_floor / (1.0 + rc * f * rc * f);
      if (flags.flicker) psd += flicker_coef / f;
      const double amp = std::sqrt(psd * static_cast<double>(n) / trace.dt);
      if (2 * k == n)
        half[k] = amp * gauss(rng);
      else
        half[k] = amp / std::sqrt(2.0) * std::complex<double>(gauss(rng), gauss(rng));
    }
    const auto noise = irfft(std::move(half), n);
    for (std::size_t j = 0; j < n; ++j) trace.delta_vth[j] += noise[j];
  }

  const double gm = transconductance(cfg);
  trace.delta_ids.resize(n);
  for (std::size_t j = 0; j < n; ++j) trace.delta_ids[j] = gm * trace.delta_vth[j];
}

AcfEstimate empirical_acf(const Trace& trace, std::size_t species, double max_lag,
                          double burn_in) {
  if (species >= trace.species_count())
    throw std::invalid_argument("empirical_acf: species index out of range");
  if (!(max_lag > 0.0) || burn_in < 0.0)
    throw std::invalid_argument("empirical_acf: need max_lag > 0 and burn_in >= 0");
  const auto& series = trace.n_bound[species];
  const double total_span = static_cast<double>(series.size()) * trace.dt;
  if (total_span < burn_in + 10.0 * max_lag)
    throw InsufficientData("empirical_acf: trace shorter than burn-in + 10*max_lag");

  const std::size_t skip = static_cast<std::size_t>(std::ceil(burn_in / trace.dt));
  const std::size_t n = series.size() - skip;
  const double* x = series.data() + skip;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i];
  mean /= static_cast<double>(n);

  AcfEstimate acf;
  acf.dt = trace.dt;
  const std::size_t n_lags = static_cast<std::size_t>(std::floor(max_lag / trace.dt));
  acf.values.resize(n_lags + 1);
  for (std::size_t k = 0; k <= n_lags; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) sum += (x[i] - mean) * (x[i + k] - mean);
    acf.values[k] = sum / static_cast<double>(n - k);  // unbiased in the lag count
  }
  return acf;
}

double acf_fit_timescale(const AcfEstimate& acf) {
  // Log-linear least squares over the head of the estimate. Lags below
  // 0.2 * R(0) are excluded: their relative estimation noise is large and an
  // unweighted fit in log space would be dominated by it.
  if (acf.values.empty() || acf.values[0] <= 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < acf.values.size(); ++k) {
    if (acf.values[k] <= 0.2 * acf.values[0]) break;
    const double lx = acf.lag_at(k), ly = std::log(acf.values[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) return std::numeric_limits<double>::quiet_NaN();
  const double slope =
      (static_cast<double>(m) * sxy - sx * sy) / (static_cast<double>(m) * sxx - sx * sx);
  return slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::quiet_NaN();
}

WelchEstimate welch_psd(std::span<const double> series, double dt,
                        std::size_t segment_length) {
  if (segment_length < 8 || series.size() < segment_length)
    throw std::invalid_argument("welch_psd: series shorter than one segment");
  const std::size_t hop = segment_length / 2;
  const std::size_t n_segments = 1 + (series.size() - segment_length) / hop;

  std::vector<double> window(segment_length);
  double window_power = 0.0;
  for (std::size_t i = 0; i < segment_length; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * constants::pi * static_cast<double>(i) /
                                      static_cast<double>(segment_length - 1)));
    window_power += window[i] * window[i];
  }

  std::vector<double> accum(segment_length / 2 + 1, 0.0);
  std::vector<double> seg(segment_length);
  for (std::size_t s = 0; s < n_segments; ++s) {
    const double* x = series.data() + s * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < segment_length; ++i) mean += x[i];
    mean /= static_cast<double>(segment_length);
    for (std::size_t i = 0; i < segment_length; ++i) seg[i] = (x[i] - mean) * window[i];
    const auto spec = rfft(seg);
    for (std::size_t k = 0; k < accum.size(); ++k) accum[k] += std::norm(spec[k]);
  }

  // Two-sided density: dt/(sum w^2) * mean |X_k|^2.
  const double scale = dt / (window_power * static_cast<double>(n_segments));
  WelchEstimate est;
  est.frequencies.reserve(segment_length / 2);
  est.values.reserve(segment_length / 2);
  for (std::size_t k = 1; k <= segment_length / 2; ++k) {
    est.frequencies.push_back(static_cast<double>(k) /
                              (static_cast<double>(segment_length) * dt));
    est.values.push_back(accum[k] * scale);
  }
  return est;
}

std::vector<std::size_t> demodulate_csk(const Trace& trace, const MessageSchedule& schedule,
                                        const std::vector<double>& thresholds) {
  schedule.validate();
  if (thresholds.empty())
    throw std::invalid_argument("demodulate_csk: thresholds must be non-empty");
  if (!std::is_sorted(thresholds.begin(), thresholds.end()) ||
      std::adjacent_find(thresholds.begin(), thresholds.end()) != thresholds.end())
    throw std::invalid_argument("demodulate_csk: thresholds must be strictly increasing");
  if (trace.delta_ids.size() != trace.samples())
    throw std::invalid_argument("demodulate_csk: output not synthesized");

  std::vector<std::size_t> symbols(schedule.levels.size());
  for (std::size_t i = 0; i < schedule.levels.size(); ++i) {
    // Steady-state sample: the last state inside [t_i, t_i + 1/B).
    const double t_end = schedule.start_of(i) + schedule.symbol_duration();
    const long long j = std::llround(t_end / trace.dt) - 1;
    if (j < 0 || static_cast<std::size_t>(j) >= trace.samples())
      throw std::runtime_error("demodulate_csk: schedule extends beyond the trace");
    const double sample = trace.delta_ids[static_cast<std::size_t>(j)];
    symbols[i] = static_cast<std::size_t>(
        std::upper_bound(thresholds.begin(), thresholds.end(), sample) - thresholds.begin());
  }
  return symbols;
}

void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& lo, double& hi) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: trials == 0");
  const double z = 1.959963984540054;  // 95%
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // the score interval is exact at the boundaries; avoid rounding residue
  lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  hi = successes == trials ? 1.0 : std::min(1.0, center + half);
}

SerResult estimate_ser(const SerExperiment& exp) {
  if (exp.n_symbols < 100)
    throw std::invalid_argument("estimate_ser: need at least 100 symbols");
  if (exp.alphabet.size() < 2 ||
      !std::is_sorted(exp.alphabet.begin(), exp.alphabet.end()))
    throw std::invalid_argument("estimate_ser: alphabet must be >= 2 ascending levels");

  double tau_slow = 0.0, tau_fast = std::numeric_limits<double>::infinity();
  for (double c : exp.alphabet) {
    const double tau = binding_timescale(c, exp.pair);
    tau_slow = std::max(tau_slow, tau);
    tau_fast = std::min(tau_fast, tau);
  }
  const double symbol_rate =
      exp.symbol_rate > 0.0 ? exp.symbol_rate : 1.0 / (20.0 * tau_slow);
  double dt = exp.dt > 0.0 ? exp.dt : 0.1 * tau_fast;
  // Keep an integer number of steps per symbol so end-of-symbol samples align.
  const double steps_per_symbol = std::max(2.0, std::ceil(1.0 / (symbol_rate * dt)));
  dt = 1.0 / (symbol_rate * steps_per_symbol);

  std::mt19937_64 symbol_rng(splitmix64(exp.seed ^ 0x53594d424fULL));
  std::uniform_int_distribution<std::size_t> pick(0, exp.alphabet.size() - 1);
  std::vector<std::size_t> sent(exp.n_symbols);
  MessageSchedule schedule;
  schedule.symbol_rate = symbol_rate;
  schedule.levels.resize(exp.n_symbols);
  for (std::size_t i = 0; i < exp.n_symbols; ++i) {
    sent[i] = pick(symbol_rng);
    schedule.levels[i] = exp.alphabet[sent[i]];
  }

  OccupancySim sim;
  sim.schedule = std::move(schedule);
  sim.pair = exp.pair;
  sim.layer = exp.layer;
  sim.dt = dt;
  sim.seed = splitmix64(exp.seed ^ 0x5452414345ULL);
  sim.stochastic = exp.noise.binding;
  Trace trace = simulate_occupancy(sim);
  synthesize_output(trace, exp.transducer, exp.pair, exp.layer, exp.environment, exp.noise);

  std::vector<double> thresholds = exp.thresholds;
  if (thresholds.empty()) {
    std::vector<double> level_current(exp.alphabet.size());
    for (std::size_t k = 0; k < exp.alphabet.size(); ++k)
      level_current[k] =
          current_shift(exp.alphabet[k], exp.transducer, exp.pair, exp.layer, exp.environment);
    for (std::size_t k = 0; k + 1 < exp.alphabet.size(); ++k)
      thresholds.push_back(0.5 * (level_current[k] + level_current[k + 1]));
  }

  const auto decided = demodulate_csk(trace, sim.schedule, thresholds);
  SerResult result;
  result.symbol_count = exp.n_symbols;
  for (std::size_t i = 0; i < exp.n_symbols; ++i)
    if (decided[i] != sent[i]) ++result.error_count;
  result.ser = static_cast<double>(result.error_count) / static_cast<double>(exp.n_symbols);
  wilson_interval(result.error_count, result.symbol_count, result.ci_low, result.ci_high);
  return result;
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream out;
  out.precision(12);
  out << "time_s";
  if (trace.species_count() == 1) {
    out << ",n_bound";
  } else {
    for (std::size_t s = 0; s < trace.species_count(); ++s) out << ",n_bound_species_" << s;
  }
  out << ",delta_vth_V,delta_ids_A\n";
  const bool has_output = trace.delta_vth.size() == trace.samples() &&
                          trace.delta_ids.size() == trace.samples();
  for (std::size_t j = 0; j < trace.samples(); ++j) {
    out << trace.time_at(j);
    for (std::size_t s = 0; s < trace.species_count(); ++s) out << ',' << trace.n_bound[s][j];
    out << ',' << (has_output ? trace.delta_vth[j] : 0.0) << ','
        << (has_output ? trace.delta_ids[j] : 0.0) << '\n';
  }
  return out.str();
}

} // namespace biofet
