#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "biofet/errors.hpp"
#include "biofet/stosim.hpp"

namespace biofet {

enum class RunMode { response, sensitivity, snr, lod, simulate, validate };

RunMode parse_mode(const std::string& name);
std::string mode_name(RunMode mode);

// One swept axis plus an optional family axis (multi-curve figures).
// Axis names are restricted to the documented parameter set; values are SI.
struct SweepSpec {
  std::string axis = "c";
  std::vector<double> grid;         // resolved SI values
  std::string family_axis;          // empty = single curve
  std::vector<double> family;       // resolved SI values

  bool has_family() const { return !family_axis.empty(); }
};

// Options for lod mode: the internal concentration scan.
struct LodSpec {
  double threshold_db = 0.0;
  double c_min = 0;   // 0 = 1e-3 * K_D
  double c_max = 0;   // 0 = 1e4 * K_D
  int points = 200;
};

// Options for validate mode (stochastic-vs-analytic oracle suite).
struct ValidateSpec {
  double trace_tau = 3e4;   // trace length in units of tau_B (3x the minimum,
                            // which keeps the ACF-fit scatter well inside tolerance)
  double receptor_count = 1e4;
};

// Fully-resolved run description. Unset config keys take the built-in
// defaults; unit suffixes are converted to strict SI at parse time.
struct RunConfig {
  Environment environment;
  LigandReceptorPair pair;
  TransducerConfig transducer;
  double receptor_density = 2e16;   // c_R, 1/m^2
  MessageSchedule schedule;         // used by simulate mode
  std::vector<InterfererSpecies> interferers;
  Band band;
  SweepSpec sweep;
  LodSpec lod;
  ValidateSpec validate;
  RunMode mode = RunMode::response;
  std::uint64_t seed = default_seed;
  std::string output_path;          // empty = stdout
  double concentration = 0;         // operating c_i, molecules/m^3; 0 = 4*K_D
  SignalModel snr_signal = SignalModel::deviation;
  double sim_dt = 0;                // s; 0 = auto (0.1 * fastest tau_B)
  NoiseFlags sim_noise = NoiseFlags::all();

  RecognitionLayer layer() const;
  double operating_concentration() const;  // resolves the 4*K_D default
  void validate_all() const;
};

// Table-I defaults for every field.
RunConfig default_config();

// Parse the key-value config text. Unknown keys, unit mismatches and
// invariant violations raise ConfigError with file:line context.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in, const std::string& name);

// Canonical SI serialization; load_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

// Named sweep presets (table1, fig7a..fig7d, fig9a..fig9d, fig10a..fig10d).
void apply_preset(RunConfig& config, const std::string& name);
std::vector<std::string> preset_names();

// FNV-1a over the canonical serialization; stamped into output footers.
std::uint64_t config_hash(const RunConfig& config);

// Documented sweep axes and their setters.
bool is_sweep_axis(const std::string& name);
void apply_axis_value(RunConfig& config, const std::string& axis, double value);
std::string axis_unit(const std::string& axis);
std::vector<std::string> sweep_axis_names();

} // namespace biofet
