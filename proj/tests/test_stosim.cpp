#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "biofet/errors.hpp"
#include "biofet/stosim.hpp"
#include "test_util.hpp"

using namespace biofet;
using testutil::table1_env;
using testutil::table1_layer;
using testutil::table1_pair;
using testutil::table1_transducer;

namespace {
const Environment env = table1_env();
const LigandReceptorPair pair = table1_pair();
const TransducerConfig cfg = table1_transducer();
const double kd = dissociation_constant(pair);

RecognitionLayer layer_of(double count) {
  RecognitionLayer layer;
  layer.receptor_count = count;
  layer.receptor_density = count / cfg.area();
  return layer;
}

OccupancySim steady_sim(double c, double receptors, double span_tau, double dt_tau,
                        std::uint64_t seed) {
  OccupancySim sim;
  const double tau = binding_timescale(c, pair);
  sim.schedule.levels = {c};
  sim.schedule.symbol_rate = 1.0 / (span_tau * tau);
  sim.pair = pair;
  sim.layer = layer_of(receptors);
  sim.dt = dt_tau * tau;
  sim.seed = seed;
  return sim;
}

double sample_mean(const std::vector<double>& x, std::size_t skip) {
  double m = 0.0;
  for (std::size_t i = skip; i < x.size(); ++i) m += x[i];
  return m / static_cast<double>(x.size() - skip);
}

double sample_variance(const std::vector<double>& x, std::size_t skip) {
  const double m = sample_mean(x, skip);
  double v = 0.0;
  for (std::size_t i = skip; i < x.size(); ++i) v += (x[i] - m) * (x[i] - m);
  return v / static_cast<double>(x.size() - skip - 1);
}
} // namespace

TEST_CASE("identical seeds give identical traces and SER results") {
  auto sim = steady_sim(kd, 1e4, 200.0, 0.05, 42);
  const Trace a = simulate_occupancy(sim);
  const Trace b = simulate_occupancy(sim);
  CHECK(a.n_bound == b.n_bound);

  sim.seed = 43;
  const Trace c = simulate_occupancy(sim);
  CHECK(a.n_bound != c.n_bound);
}

TEST_CASE("receptor pool is conserved under competition") {
  OccupancySim sim = steady_sim(kd, 500, 400.0, 0.05, 7);
  InterfererSpecies rival;
  rival.concentration = kd;
  rival.k_on = pair.k_on;
  rival.k_off = pair.k_off;
  rival.electrons = 2.0;
  rival.receptor_length_equivalent = 2e-9;
  sim.interferers = {rival};
  sim.dt = 0.05 * binding_timescale(kd, pair) / 2.0;  // two competing species

  const Trace trace = simulate_occupancy(sim);
  for (std::size_t j = 0; j < trace.samples(); ++j) {
    double total = 0.0;
    for (std::size_t s = 0; s < trace.species_count(); ++s) {
      CHECK(trace.n_bound[s][j] >= 0.0);
      total += trace.n_bound[s][j];
    }
    CHECK(total <= 500.0 + 1e-9);
  }
}

TEST_CASE("zero concentration empties the layer and stays empty") {
  OccupancySim sim = steady_sim(0.0, 1000, 400.0, 0.05, 11);
  sim.initial_bound = {1000.0};
  const Trace trace = simulate_occupancy(sim);
  const auto& series = trace.n_bound[0];
  // absorbing empty state: once the initial molecules decay, nothing rebinds
  for (std::size_t j = trace.samples() / 2; j < trace.samples(); ++j)
    CHECK(series[j] == 0.0);
  CHECK(series.front() == 1000.0);
}

TEST_CASE("stochastic occupancy reproduces the analytic mean and variance (small pool)") {
  const double receptors = 100;
  std::uint64_t seed = 1000;
  for (double c : {0.25 * kd, kd, 4.0 * kd}) {
    const double tau = binding_timescale(c, pair);
    auto sim = steady_sim(c, receptors, 5000.0, 0.05, seed++);
    const Trace trace = simulate_occupancy(sim);
    const std::size_t skip = static_cast<std::size_t>(std::ceil(20.0 * tau / sim.dt));

    const double expected_mean = mean_bound_steady(c, pair, sim.layer);
    const double expected_var = bound_variance(c, pair, sim.layer);
    const double span = 5000.0 * tau - 20.0 * tau;
    const double se_mean = std::sqrt(2.0 * expected_var * tau / span);

    CHECK(std::fabs(sample_mean(trace.n_bound[0], skip) - expected_mean) <= 3.0 * se_mean);
    CHECK(sample_variance(trace.n_bound[0], skip) ==
          doctest::Approx(expected_var).epsilon(0.10));
  }
}

TEST_CASE("stochastic occupancy statistics at the table-1 pool size") {
  const double c = 4.0 * kd;
  const double tau = binding_timescale(c, pair);
  auto sim = steady_sim(c, 1e4, 2000.0, 0.05, 2024);
  const Trace trace = simulate_occupancy(sim);
  const double burn_in = 20.0 * tau;
  const std::size_t skip = static_cast<std::size_t>(std::ceil(burn_in / sim.dt));

  const double expected_mean = mean_bound_steady(c, pair, sim.layer);
  const double expected_var = bound_variance(c, pair, sim.layer);
  const double se_mean = std::sqrt(2.0 * expected_var * tau / (2000.0 * tau - burn_in));
  CHECK(std::fabs(sample_mean(trace.n_bound[0], skip) - expected_mean) <= 3.0 * se_mean);
  CHECK(sample_variance(trace.n_bound[0], skip) ==
        doctest::Approx(expected_var).epsilon(0.10));

  SUBCASE("ACF decays with the reaction timescale") {
    const auto acf = empirical_acf(trace, 0, 3.0 * tau, burn_in);
    CHECK(acf.values[0] == doctest::Approx(sample_variance(trace.n_bound[0], skip))
                               .epsilon(0.02));
    CHECK(acf_fit_timescale(acf) == doctest::Approx(tau).epsilon(0.10));
  }
}

TEST_CASE("mean-field path matches the closed-form transient exactly") {
  const double c = 4.0 * kd;
  auto sim = steady_sim(c, 1e4, 30.0, 0.05, 1);
  sim.stochastic = false;
  sim.initial_bound = {0.0};
  const Trace trace = simulate_occupancy(sim);
  for (std::size_t j : {std::size_t{1}, std::size_t{10}, trace.samples() - 1}) {
    const double expected =
        mean_bound_transient(0.0, c, pair, sim.layer, trace.time_at(j));
    CHECK(trace.n_bound[0][j] == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("empirical ACF input checks") {
  auto sim = steady_sim(kd, 100, 100.0, 0.05, 5);
  const Trace trace = simulate_occupancy(sim);
  const double tau = binding_timescale(kd, pair);
  CHECK_THROWS_AS(empirical_acf(trace, 0, 10.0 * tau, 20.0 * tau), InsufficientData);
  CHECK_THROWS_AS(empirical_acf(trace, 5, tau, 0.0), std::invalid_argument);
}

TEST_CASE("fast kinetics decorrelate within a few steps") {
  LigandReceptorPair fast = pair;
  fast.k_off = 1e4;  // tau_B ~ 0.1 ms at c = 0
  OccupancySim sim;
  sim.schedule.levels = {kd};
  const double tau = 1.0 / (fast.k_on * kd + fast.k_off);
  sim.schedule.symbol_rate = 1.0 / (20000.0 * tau);
  sim.pair = fast;
  sim.layer = layer_of(200);
  sim.dt = 0.1 * tau;
  sim.seed = 99;
  const Trace trace = simulate_occupancy(sim);
  const auto acf = empirical_acf(trace, 0, 100.0 * sim.dt, 20.0 * tau);
  const double noise_floor =
      acf.values[0] / std::sqrt(static_cast<double>(trace.samples()) * sim.dt / (2.0 * tau));
  // beyond ~6 tau_B the true ACF (0.25% of the variance) is buried in the
  // estimation noise; the estimate must sit at that floor
  for (std::size_t k = 60; k < acf.values.size(); ++k)
    CHECK(std::fabs(acf.values[k]) < 5.0 * noise_floor);
}

TEST_CASE("deterministic chain reduction: constant occupancy reproduces the analytic shift") {
  const double c = 4.0 * kd;
  const RecognitionLayer layer = layer_of(1e4);
  const double n_mean = mean_bound_steady(c, pair, layer);

  Trace trace;
  trace.dt = 1e-3;
  trace.rng_seed = 0;
  trace.species = {{pair.electrons_per_ligand, pair.receptor_length}};
  trace.n_bound = {std::vector<double>(64, n_mean)};
  synthesize_output(trace, cfg, pair, layer, env, NoiseFlags::none());

  const double expected = potential_shift(c, cfg, pair, layer, env);
  for (double v : trace.delta_vth) CHECK(v == expected);  // identical arithmetic path
  const double gm = transconductance(cfg);
  for (std::size_t j = 0; j < trace.samples(); ++j)
    CHECK(trace.delta_ids[j] == gm * trace.delta_vth[j]);
}

TEST_CASE("p-type step response: a binding event raises the current, unbinding restores it") {
  const RecognitionLayer layer = layer_of(100);
  Trace trace;
  trace.dt = 1e-3;
  trace.species = {{pair.electrons_per_ligand, pair.receptor_length}};
  trace.n_bound = {{0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0}};
  synthesize_output(trace, cfg, pair, layer, env, NoiseFlags::none());
  CHECK(trace.delta_ids[0] == 0.0);
  CHECK(trace.delta_ids[2] > 0.0);
  CHECK(trace.delta_ids[3] == trace.delta_ids[2]);
  CHECK(trace.delta_ids[5] == 0.0);
}

TEST_CASE("welch estimate of white noise matches the flat two-sided density") {
  const double dt = 0.01, sigma = 3.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> x(1 << 16);
  for (double& v : x) v = gauss(rng);
  const auto est = welch_psd(x, dt, 1024);
  double mean = 0.0;
  for (double v : est.values) mean += v;
  mean /= static_cast<double>(est.values.size());
  CHECK(mean == doctest::Approx(sigma * sigma * dt).epsilon(0.05));
}

TEST_CASE("synthesized thermal+flicker noise matches its target spectrum") {
  const double c = 4.0 * kd;
  const RecognitionLayer layer = layer_of(1e4);
  const double n_mean = mean_bound_steady(c, pair, layer);

  Trace trace;
  trace.dt = 1e-3;
  trace.rng_seed = 313;
  trace.species = {{pair.electrons_per_ligand, pair.receptor_length}};
  trace.n_bound = {std::vector<double>(1 << 17, n_mean)};
  synthesize_output(trace, cfg, pair, layer, env, {false, true, true});

  // remove the deterministic offset, keep the synthesized fluctuation
  const double offset = potential_shift(c, cfg, pair, layer, env);
  std::vector<double> noise(trace.samples());
  for (std::size_t j = 0; j < noise.size(); ++j) noise[j] = trace.delta_vth[j] - offset;

  const auto est = welch_psd(noise, trace.dt, 4096);
  for (double f_target : {1.0, 10.0, 100.0}) {
    double got = 0.0, want = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < est.frequencies.size(); ++k) {
      const double f = est.frequencies[k];
      if (f >= 0.8 * f_target && f <= 1.25 * f_target) {
        got += est.values[k];
        want += thermal_voltage_psd(f, c, cfg, pair, layer, env) +
                flicker_voltage_psd(f, cfg, env);
        ++bins;
      }
    }
    REQUIRE(bins > 0);
    CHECK(got / bins == doctest::Approx(want / bins).epsilon(0.25));
  }
}

TEST_CASE("binding-noise periodogram matches the lorentzian at its corner") {
  const double c = 4.0 * kd;
  const double tau = binding_timescale(c, pair);
  auto sim = steady_sim(c, 1e4, 3000.0, 0.05, 2718);
  Trace trace = simulate_occupancy(sim);
  synthesize_output(trace, cfg, pair, sim.layer, env, {true, false, false});

  const std::size_t skip = static_cast<std::size_t>(std::ceil(20.0 * tau / sim.dt));
  std::vector<double> steady(trace.delta_vth.begin() + skip, trace.delta_vth.end());
  const auto est = welch_psd(steady, sim.dt, 4096);

  const double corner = 1.0 / (2.0 * 3.14159265358979323846 * tau);
  double got = 0.0, want = 0.0;
  int bins = 0;
  for (std::size_t k = 0; k < est.frequencies.size(); ++k) {
    const double f = est.frequencies[k];
    if (f >= 0.7 * corner && f <= 1.4 * corner) {
      got += est.values[k];
      want += binding_voltage_psd(f, c, cfg, pair, sim.layer, env);
      ++bins;
    }
  }
  REQUIRE(bins > 0);
  CHECK(got / bins == doctest::Approx(want / bins).epsilon(0.25));
}

TEST_CASE("interference biases the occupancy and inflates the output variance") {
  // dilute regime (occupancy well below the pool), where the model's
  // uncorrelated-binding picture holds and interferer fluctuations add
  const double c = 0.2 * kd;
  const double receptors = 1e4;
  auto clean_sim = steady_sim(c, receptors, 2000.0, 0.024, 555);
  Trace clean = simulate_occupancy(clean_sim);
  synthesize_output(clean, cfg, pair, clean_sim.layer, env, {true, false, false});

  auto rival_sim = clean_sim;
  InterfererSpecies rival;
  rival.concentration = c;
  rival.k_on = pair.k_on;
  rival.k_off = pair.k_off;
  rival.electrons = pair.electrons_per_ligand;
  rival.receptor_length_equivalent = pair.receptor_length;
  rival_sim.interferers = {rival};
  Trace crowded = simulate_occupancy(rival_sim);
  synthesize_output(crowded, cfg, pair, rival_sim.layer, env, {true, false, false});

  const double tau = binding_timescale(c, pair);
  const std::size_t skip = static_cast<std::size_t>(std::ceil(20.0 * tau / clean_sim.dt));

  // competition over the shared pool: x = c/K_D per species, so the primary
  // fraction drops from x/(1+x) to x/(1+2x)
  const double mean_clean = sample_mean(clean.n_bound[0], skip);
  const double mean_crowded = sample_mean(crowded.n_bound[0], skip);
  const double expected_crowded = receptors * 0.2 / 1.4;
  const double se = std::sqrt(2.0 * bound_variance(c, pair, clean_sim.layer) * tau /
                              (2000.0 * tau));
  CHECK(mean_crowded < mean_clean - 10.0 * se);
  CHECK(std::fabs(mean_crowded - expected_crowded) <= 5.0 * se);

  CHECK(sample_variance(crowded.delta_vth, skip) >
        1.2 * sample_variance(clean.delta_vth, skip));
}

TEST_CASE("timestep guards") {
  SUBCASE("too-coarse dt names the violating species") {
    auto sim = steady_sim(kd, 100, 100.0, 0.05, 1);
    InterfererSpecies fast;
    fast.concentration = kd;
    fast.k_on = pair.k_on;
    fast.k_off = 1e5;
    fast.electrons = 1.0;
    fast.receptor_length_equivalent = 1e-9;
    sim.interferers = {fast};
    CHECK_THROWS_WITH_AS(simulate_occupancy(sim),
                         doctest::Contains("interferer 1"), std::invalid_argument);
  }
  SUBCASE("dt must be positive") {
    auto sim = steady_sim(kd, 100, 100.0, 0.05, 1);
    sim.dt = 0.0;
    CHECK_THROWS_AS(simulate_occupancy(sim), std::invalid_argument);
  }
}

TEST_CASE("noise band outside the synthesizable range is a configuration error") {
  const RecognitionLayer layer = layer_of(100);
  Trace trace;
  trace.dt = 1e-2;  // nyquist 50 Hz
  trace.species = {{4.0, 4e-9}};
  trace.n_bound = {std::vector<double>(256, 10.0)};
  CHECK_THROWS_AS(
      synthesize_output(trace, cfg, pair, layer, env, {false, true, true}, Band{1e-2, 1e3}),
      std::invalid_argument);
  // and a band inside the range is accepted
  synthesize_output(trace, cfg, pair, layer, env, {false, true, true}, Band{0.5, 50.0});
}

TEST_CASE("noiseless well-separated binary CSK decodes without errors") {
  SerExperiment exp;
  exp.alphabet = {kd, 16.0 * kd};
  exp.n_symbols = 1000;
  exp.pair = pair;
  exp.layer = layer_of(1e4);
  exp.transducer = cfg;
  exp.environment = env;
  exp.noise = NoiseFlags::none();
  exp.seed = 4242;
  const auto result = estimate_ser(exp);
  CHECK(result.error_count == 0);
  CHECK(result.ser == 0.0);
  CHECK(result.ci_low == 0.0);
}

TEST_CASE("indistinguishable levels give SER near one half") {
  SerExperiment exp;
  exp.alphabet = {4.0 * kd, 4.0 * kd};
  exp.n_symbols = 500;
  exp.pair = pair;
  exp.layer = layer_of(1e4);
  exp.transducer = cfg;
  exp.environment = env;
  exp.seed = 31337;
  const auto result = estimate_ser(exp);
  CHECK(result.ci_low < 0.5);
  CHECK(result.ci_high > 0.5);
}

TEST_CASE("larger level separation lowers the SER (disjoint confidence intervals)") {
  SerExperiment base;
  base.n_symbols = 2000;
  base.pair = pair;
  base.layer = layer_of(1e4);
  base.transducer = cfg;
  base.environment = env;
  base.seed = 77;

  const double c_lo = 2e-3 * kd;
  SerExperiment narrow = base;
  narrow.alphabet = {c_lo, 2.0 * c_lo};
  SerExperiment wide = base;
  wide.alphabet = {c_lo, 16.0 * c_lo};

  const auto ser_narrow = estimate_ser(narrow);
  const auto ser_wide = estimate_ser(wide);
  CHECK(ser_narrow.ser > ser_wide.ser);
  CHECK(ser_narrow.ci_low > ser_wide.ci_high);

  SUBCASE("fixed seed reproduces the estimate exactly") {
    const auto again = estimate_ser(narrow);
    CHECK(again.ser == ser_narrow.ser);
    CHECK(again.error_count == ser_narrow.error_count);
  }
}

TEST_CASE("sampling inside the transient inflates the SER") {
  // symbol duration 1 tau_B violates the steady-state sampling assumption:
  // end-of-symbol samples carry memory of the previous level
  SerExperiment exp;
  exp.n_symbols = 2000;
  exp.pair = pair;
  exp.layer = layer_of(1e4);
  exp.transducer = cfg;
  exp.environment = env;
  exp.seed = 909;
  const double c_lo = 2e-3 * kd;
  exp.alphabet = {c_lo, 4.0 * c_lo};

  const double tau_slow = binding_timescale(c_lo, pair);
  SerExperiment settled = exp;
  settled.symbol_rate = 1.0 / (20.0 * tau_slow);
  SerExperiment rushed = exp;
  rushed.symbol_rate = 1.0 / tau_slow;

  const auto ser_settled = estimate_ser(settled);
  const auto ser_rushed = estimate_ser(rushed);
  CHECK(ser_rushed.ser > ser_settled.ser);
  CHECK(ser_rushed.ci_low > ser_settled.ci_high);
}

TEST_CASE("wilson interval") {
  double lo = 0.0, hi = 0.0;
  wilson_interval(0, 100, lo, hi);
  CHECK(lo == 0.0);
  CHECK(hi > 0.0);
  CHECK(hi < 0.05);
  wilson_interval(50, 100, lo, hi);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK_THROWS_AS(wilson_interval(1, 0, lo, hi), std::invalid_argument);
}

TEST_CASE("trace CSV layout") {
  Trace trace;
  trace.dt = 0.5;
  trace.species = {{4.0, 4e-9}, {1.0, 2e-9}};
  trace.n_bound = {{1.0, 2.0}, {0.0, 1.0}};
  trace.delta_vth = {0.1, 0.2};
  trace.delta_ids = {1e-9, 2e-9};
  const std::string csv = trace_to_csv(trace);
  CHECK(csv.find("time_s,n_bound_species_0,n_bound_species_1,delta_vth_V,delta_ids_A") == 0);
  CHECK(csv.find("\n0,1,0,0.1,1e-09\n") != std::string::npos);
  CHECK(csv.find("\n0.5,2,1,0.2,2e-09\n") != std::string::npos);

  Trace single;
  single.dt = 1.0;
  single.species = {{4.0, 4e-9}};
  single.n_bound = {{3.0}};
  CHECK(trace_to_csv(single).find("time_s,n_bound,delta_vth_V,delta_ids_A") == 0);
}
