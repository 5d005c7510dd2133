#include "biofet/sweep.hpp"

#include <cmath>
#include <sstream>

#include "biofet/noise.hpp"
#include "biofet/version.hpp"

namespace biofet {

namespace {

std::vector<std::string> provenance(const RunConfig& config) {
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  return {"config_hash=" + std::string(hash), "seed=" + std::to_string(config.seed),
          "mode=" + mode_name(config.mode), "version=" + std::string(version)};
}

std::string axis_column(const std::string& axis) {
  const std::string unit = axis_unit(axis);
  return unit.empty() ? axis : axis + "[" + unit + "]";
}

std::vector<std::string> value_columns(RunMode mode) {
  switch (mode) {
    case RunMode::response: return {"delta_vth[V]", "delta_ids[A]"};
    case RunMode::sensitivity: return {"sensitivity[A*m^3]"};
    case RunMode::snr:
      return {"snr[dB]", "binding_power[V^2]", "thermal_power[V^2]", "flicker_power[V^2]"};
    case RunMode::lod: return {"lod[1/m^3]"};
    default: throw ConfigError("run_sweep: mode '" + mode_name(mode) + "' is not a sweep mode");
  }
}

std::vector<std::string> evaluate_point(const RunConfig& point) {
  const auto layer = point.layer();
  const double c = point.operating_concentration();
  switch (point.mode) {
    case RunMode::response: {
      const double dv = potential_shift(c, point.transducer, point.pair, layer, point.environment);
      const double di = current_shift(c, point.transducer, point.pair, layer, point.environment);
      return {format_number(dv), format_number(di)};
    }
    case RunMode::sensitivity:
      return {format_number(
          sensitivity(c, point.transducer, point.pair, layer, point.environment))};
    case RunMode::snr: {
      const auto budget = noise_budget(c, point.transducer, point.pair, layer,
                                       point.environment, point.band, point.snr_signal);
      return {format_number(budget.snr_db), format_number(budget.binding_power),
              format_number(budget.thermal_power), format_number(budget.flicker_power)};
    }
    case RunMode::lod: {
      const double kd = dissociation_constant(point.pair);
      const double c_min = point.lod.c_min > 0 ? point.lod.c_min : 1e-3 * kd;
      const double c_max = point.lod.c_max > 0 ? point.lod.c_max : 1e4 * kd;
      const auto lod = limit_of_detection(point.transducer, point.pair, layer,
                                          point.environment, point.band,
                                          point.lod.threshold_db, c_min, c_max,
                                          point.lod.points);
      if (!lod)
        throw std::runtime_error("no concentration in [" + format_number(c_min) + ", " +
                                 format_number(c_max) + "] 1/m^3 reaches " +
                                 format_number(point.lod.threshold_db) + " dB");
      return {format_number(*lod)};
    }
    default:
      throw ConfigError("run_sweep: mode '" + mode_name(point.mode) + "' is not a sweep mode");
  }
}

} // namespace

ResultTable run_sweep(const RunConfig& config) {
  config.validate_all();
  ResultTable table;
  const bool family = config.sweep.has_family();
  if (family) table.columns.push_back(axis_column(config.sweep.family_axis));
  table.columns.push_back(axis_column(config.sweep.axis));
  for (auto& col : value_columns(config.mode)) table.columns.push_back(col);
  table.footer = provenance(config);

  std::vector<double> grid = config.sweep.grid;
  if (grid.empty()) grid = {config.operating_concentration()};
  std::vector<double> families = family ? config.sweep.family : std::vector<double>{0.0};

  for (double fam_value : families) {
    for (double grid_value : grid) {
      RunConfig point = config;
      try {
        if (family) apply_axis_value(point, config.sweep.family_axis, fam_value);
        apply_axis_value(point, config.sweep.axis, grid_value);
        auto values = evaluate_point(point);
        std::vector<std::string> row;
        if (family) row.push_back(format_number(fam_value));
        row.push_back(format_number(grid_value));
        for (auto& v : values) row.push_back(std::move(v));
        table.add_row(std::move(row));
      } catch (const std::exception& ex) {
        std::ostringstream msg;
        msg << config.sweep.axis << "=" << format_number(grid_value);
        if (family) msg << " (" << config.sweep.family_axis << "=" << format_number(fam_value) << ")";
        msg << ": " << ex.what();
        table.row_errors.push_back(msg.str());
      }
    }
  }
  return table;
}

ResultTable run_validate(const RunConfig& config) {
  config.validate_all();
  ResultTable table;
  table.columns = {"check", "c_over_kd", "measured", "expected", "tolerance", "status"};
  table.footer = provenance(config);

  const double kd = dissociation_constant(config.pair);
  RecognitionLayer layer;
  layer.receptor_density = config.validate.receptor_count / config.transducer.area();
  layer.receptor_count = config.validate.receptor_count;
  layer.validate();

  int check_index = 0;
  for (double c_over_kd : {1.0, 4.0}) {
    const double c = c_over_kd * kd;
    const double tau = binding_timescale(c, config.pair);
    // fine stepping: the discrete chain's timescale is -dt/ln(1 - dt/tau),
    // a -dt/(2 tau) bias that 0.025 tau keeps near 1%
    const double dt = 0.025 * tau;
    const double span = config.validate.trace_tau * tau;

    OccupancySim sim;
    sim.schedule.levels = {c};
    sim.schedule.symbol_rate = 1.0 / span;
    sim.pair = config.pair;
    sim.layer = layer;
    sim.dt = dt;
    sim.seed = config.seed + static_cast<std::uint64_t>(check_index++);
    Trace trace = simulate_occupancy(sim);

    const double burn_in = 20.0 * tau;
    const std::size_t skip = static_cast<std::size_t>(std::ceil(burn_in / dt));
    const auto& series = trace.n_bound[0];
    const std::size_t n = series.size() - skip;
    double mean = 0.0;
    for (std::size_t i = skip; i < series.size(); ++i) mean += series[i];
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (std::size_t i = skip; i < series.size(); ++i)
      variance += (series[i] - mean) * (series[i] - mean);
    variance /= static_cast<double>(n - 1);

    auto add_check = [&](const std::string& name, double measured, double expected,
                         double tolerance, bool pass) {
      table.add_row({name, format_number(c_over_kd), format_number(measured),
                     format_number(expected), format_number(tolerance),
                     pass ? "pass" : "FAIL"});
    };

    // Steady mean against the Langmuir value, within 3 standard errors of the
    // time average (variance of an exponentially correlated mean: 2 Var tau/T).
    const double expected_mean = mean_bound_steady(c, config.pair, layer);
    const double expected_var = bound_variance(c, config.pair, layer);
    const double se_mean = std::sqrt(2.0 * expected_var * tau / (span - burn_in));
    add_check("occupancy_mean", mean, expected_mean, 3.0 * se_mean,
              std::fabs(mean - expected_mean) <= 3.0 * se_mean);
    add_check("occupancy_variance", variance, expected_var, 0.10 * expected_var,
              std::fabs(variance - expected_var) <= 0.10 * expected_var);

    const auto acf = empirical_acf(trace, 0, 3.0 * tau, burn_in);
    const double tau_fit = acf_fit_timescale(acf);
    add_check("acf_timescale", tau_fit, tau, 0.10 * tau,
              std::isfinite(tau_fit) && std::fabs(tau_fit - tau) <= 0.10 * tau);

    // Binding-noise PSD at the Lorentzian corner: Welch estimate of the
    // synthesized dV_TH trace (binding only) against the analytic value,
    // both averaged over the same bins around f_c.
    synthesize_output(trace, config.transducer, config.pair, layer, config.environment,
                      {true, false, false});
    std::vector<double> steady(trace.delta_vth.begin() + skip, trace.delta_vth.end());
    // segment long enough to resolve the corner (~32 bins below f_c), short
    // enough for a healthy segment count
    std::size_t segment = 1;
    while (segment * 2 <= steady.size() / 16) segment *= 2;
    segment = std::min<std::size_t>(segment, 8192);
    const auto welch = welch_psd(steady, dt, segment);
    const double corner = 1.0 / (2.0 * constants::pi * tau);
    double est_sum = 0.0, ref_sum = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < welch.frequencies.size(); ++k) {
      const double f = welch.frequencies[k];
      if (f >= 0.5 * corner && f <= 2.0 * corner) {  // octave around the corner
        est_sum += welch.values[k];
        ref_sum += binding_voltage_psd(f, c, config.transducer, config.pair, layer,
                                       config.environment);
        ++bins;
      }
    }
    const double est = bins > 0 ? est_sum / bins : 0.0;
    const double ref = bins > 0 ? ref_sum / bins : 1.0;
    add_check("welch_psd_corner", est, ref, 0.20 * ref,
              bins > 0 && std::fabs(est - ref) <= 0.20 * ref);
  }
  return table;
}

ResultTable run_simulate(const RunConfig& config, std::string& csv_out) {
  config.validate_all();
  const auto layer = config.layer();

  OccupancySim sim;
  sim.schedule = config.schedule;
  sim.pair = config.pair;
  sim.layer = layer;
  sim.interferers = config.interferers;
  sim.seed = config.seed;
  sim.stochastic = config.sim_noise.binding;
  double dt = config.sim_dt;
  if (dt <= 0.0) {
    double tau_min = binding_timescale(
        *std::max_element(config.schedule.levels.begin(), config.schedule.levels.end()),
        config.pair);
    for (const auto& sp : config.interferers)
      tau_min = std::min(tau_min, 1.0 / (sp.k_on * sp.concentration + sp.k_off));
    dt = 0.1 * tau_min;
  }
  sim.dt = dt;

  Trace trace = simulate_occupancy(sim);
  synthesize_output(trace, config.transducer, config.pair, layer, config.environment,
                    config.sim_noise);
  csv_out = trace_to_csv(trace);

  ResultTable table;
  table.columns = {"samples", "dt[s]", "species"};
  table.footer = provenance(config);
  if (!schedule_reaches_steady_state(config.schedule, config.pair))
    table.footer.push_back(
        "warning=symbol duration below 10*tau_B for some level; end-of-symbol samples "
        "are not at steady state");
  table.add_row({format_number(static_cast<double>(trace.samples())), format_number(trace.dt),
                 format_number(static_cast<double>(trace.species_count()))});
  return table;
}

} // namespace biofet
