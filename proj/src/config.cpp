#include "biofet/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "biofet/constants.hpp"

namespace biofet {

namespace {

enum class Dim {
  none,        // dimensionless; no unit suffix allowed
  kelvin,
  molar_conc,  // mol/m^3 (ionic)
  molec_conc,  // 1/m^3 (molecular); supports molar units via N_A and "KD"
  length,
  voltage,
  capacitance,
  cap_area,
  mobility,
  assoc_rate,  // m^3/s
  rate,        // 1/s
  resistance,
  areal_density,
  trap_density,
  frequency,
  time,
  count,       // dimensionless count
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct UnitEntry {
  const char* name;
  double factor;
};

const std::map<Dim, std::vector<UnitEntry>>& unit_table() {
  using constants::n_avogadro;
  static const std::map<Dim, std::vector<UnitEntry>> table = {
      {Dim::kelvin, {{"K", 1.0}}},
      {Dim::molar_conc, {{"mol/m^3", 1.0}, {"M", 1e3}, {"mM", 1.0}, {"uM", 1e-3}, {"nM", 1e-6}}},
      {Dim::molec_conc,
       {{"1/m^3", 1.0},
        {"m^-3", 1.0},
        {"M", 1e3 * n_avogadro},
        {"mM", n_avogadro},
        {"uM", 1e-3 * n_avogadro},
        {"nM", 1e-6 * n_avogadro},
        {"pM", 1e-9 * n_avogadro}}},
      {Dim::length, {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {Dim::voltage, {{"V", 1.0}, {"mV", 1e-3}}},
      {Dim::capacitance, {{"F", 1.0}, {"aF", 1e-18}}},
      {Dim::cap_area, {{"F/m^2", 1.0}}},
      {Dim::mobility, {{"m^2/Vs", 1.0}, {"m^2/V/s", 1.0}}},
      {Dim::assoc_rate, {{"m^3/s", 1.0}}},
      {Dim::rate, {{"1/s", 1.0}, {"s^-1", 1.0}}},
      {Dim::resistance, {{"Ohm", 1.0}, {"kOhm", 1e3}, {"MOhm", 1e6}, {"GOhm", 1e9}}},
      {Dim::areal_density, {{"1/m^2", 1.0}, {"m^-2", 1.0}}},
      {Dim::trap_density, {{"1/eV/m^3", 1.0}, {"1/(eV m^3)", 1.0}}},
      {Dim::frequency, {{"Hz", 1.0}, {"mHz", 1e-3}, {"kHz", 1e3}}},
      {Dim::time, {{"s", 1.0}, {"ms", 1e-3}}},
      {Dim::none, {}},
      {Dim::count, {}},
  };
  return table;
}

struct RawEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  int interferer_index = -1;  // >= 0 inside the n-th [interferer] block
};

struct ParsedFile {
  std::string name;
  std::vector<RawEntry> entries;
  int interferer_count = 0;
};

ParsedFile tokenize(std::istream& in, const std::string& name) {
  ParsedFile file;
  file.name = name;
  std::string line;
  std::string section;
  int interferer_index = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "interferer")
        interferer_index = file.interferer_count++;
      else
        interferer_index = -1;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name, line_no, "expected 'key = value'");
    RawEntry entry;
    entry.section = section;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    entry.line = line_no;
    entry.interferer_index = section == "interferer" ? interferer_index : -1;
    if (entry.key.empty() || entry.value.empty())
      throw ConfigError(name, line_no, "empty key or value");
    file.entries.push_back(std::move(entry));
  }
  return file;
}

double convert_unit(double value, const std::string& unit, Dim dim, double kd,
                    const std::string& file, int line) {
  if (unit.empty()) return value;  // bare numbers are strict SI
  if (dim == Dim::molec_conc && unit == "KD") {
    if (!(kd > 0.0)) throw ConfigError(file, line, "KD unit needs a valid [pair] section");
    return value * kd;
  }
  for (const auto& u : unit_table().at(dim))
    if (unit == u.name) return value * u.factor;
  std::string expected;
  for (const auto& u : unit_table().at(dim)) {
    if (!expected.empty()) expected += ", ";
    expected += u.name;
  }
  if (dim == Dim::molec_conc) expected += ", KD";
  if (expected.empty()) expected = "no unit (dimensionless)";
  throw ConfigError(file, line, "unit mismatch: '" + unit + "' (expected: " + expected + ")");
}

double parse_scalar(const std::string& text, Dim dim, double kd, const std::string& file,
                    int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) throw ConfigError(file, line, "expected a number, got '" + text + "'");
  const std::string unit = trim(std::string(end));
  return convert_unit(value, unit, dim, kd, file, line);
}

std::vector<double> parse_list(const std::string& text, Dim dim, double kd,
                               const std::string& file, int line) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(file, line, "empty list element");
    values.push_back(parse_scalar(item, dim, kd, file, line));
  }
  if (values.empty()) throw ConfigError(file, line, "empty list");
  return values;
}

std::uint64_t parse_u64(const std::string& text, const std::string& file, int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected an unsigned integer, got '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& file, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected an integer, got '" + text + "'");
  }
}

struct AxisDef {
  Dim dim;
  const char* unit;
  std::function<void(RunConfig&, double)> set;
};

const std::map<std::string, AxisDef>& axis_table() {
  static const std::map<std::string, AxisDef> table = {
      {"c", {Dim::molec_conc, "1/m^3", [](RunConfig& c, double v) { c.concentration = v; }}},
      {"c_ion",
       {Dim::molar_conc, "mol/m^3",
        [](RunConfig& c, double v) { c.environment.ionic_concentration = v; }}},
      {"T", {Dim::kelvin, "K", [](RunConfig& c, double v) { c.environment.temperature = v; }}},
      {"eps_R",
       {Dim::none, "",
        [](RunConfig& c, double v) { c.environment.relative_permittivity = v; }}},
      {"N_e",
       {Dim::none, "", [](RunConfig& c, double v) { c.pair.electrons_per_ligand = v; }}},
      {"L_R", {Dim::length, "m", [](RunConfig& c, double v) { c.pair.receptor_length = v; }}},
      {"k_on", {Dim::assoc_rate, "m^3/s", [](RunConfig& c, double v) { c.pair.k_on = v; }}},
      {"k_off", {Dim::rate, "1/s", [](RunConfig& c, double v) { c.pair.k_off = v; }}},
      {"c_R",
       {Dim::areal_density, "1/m^2", [](RunConfig& c, double v) { c.receptor_density = v; }}},
      {"t_ox",
       {Dim::length, "m", [](RunConfig& c, double v) { c.transducer.oxide_thickness = v; }}},
      {"N_t",
       {Dim::trap_density, "1/eV/m^3",
        [](RunConfig& c, double v) { c.transducer.trap_density = v; }}},
      {"C_dl",
       {Dim::cap_area, "F/m^2",
        [](RunConfig& c, double v) { c.transducer.dl_capacitance_per_area = v; }}},
      {"C_s",
       {Dim::cap_area, "F/m^2",
        [](RunConfig& c, double v) { c.transducer.semiconductor_capacitance_per_area = v; }}},
      {"V_DS",
       {Dim::voltage, "V",
        [](RunConfig& c, double v) { c.transducer.drain_source_voltage = v; }}},
      {"R_layer",
       {Dim::resistance, "Ohm",
        [](RunConfig& c, double v) { c.transducer.layer_resistance = v; }}},
  };
  return table;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo * std::exp(step * i);
  return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + step * i;
  return v;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

RunMode parse_mode(const std::string& name) {
  if (name == "response") return RunMode::response;
  if (name == "sensitivity") return RunMode::sensitivity;
  if (name == "snr") return RunMode::snr;
  if (name == "lod") return RunMode::lod;
  if (name == "simulate") return RunMode::simulate;
  if (name == "validate") return RunMode::validate;
  throw ConfigError("unknown mode '" + name +
                    "' (expected response|sensitivity|snr|lod|simulate|validate)");
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::response: return "response";
    case RunMode::sensitivity: return "sensitivity";
    case RunMode::snr: return "snr";
    case RunMode::lod: return "lod";
    case RunMode::simulate: return "simulate";
    case RunMode::validate: return "validate";
  }
  return "?";
}

RecognitionLayer RunConfig::layer() const {
  return RecognitionLayer::from_density(receptor_density, transducer.width,
                                        transducer.length);
}

double RunConfig::operating_concentration() const { return concentration; }

void RunConfig::validate_all() const {
  environment.validate();
  pair.validate();
  transducer.validate();
  layer().validate();
  band.validate();
  schedule.validate();
  if (concentration < 0.0) throw ConfigError("run: concentration must be >= 0");
  if (!sweep.grid.empty()) {
    if (!std::is_sorted(sweep.grid.begin(), sweep.grid.end()))
      throw ConfigError("sweep: grid must be increasing");
    for (double v : sweep.grid)
      if (!std::isfinite(v)) throw ConfigError("sweep: grid values must be finite");
  }
  if (!is_sweep_axis(sweep.axis)) throw ConfigError("sweep: unknown axis '" + sweep.axis + "'");
  if (sweep.has_family() && !is_sweep_axis(sweep.family_axis))
    throw ConfigError("sweep: unknown family axis '" + sweep.family_axis + "'");
}

RunConfig default_config() {
  RunConfig c;
  // Table-I operating point: c_i = 4*K_D; one-symbol schedule at 20 tau_B.
  c.concentration = 4.0 * dissociation_constant(c.pair);
  c.schedule.levels = {c.concentration};
  c.schedule.symbol_rate = 1.0 / (20.0 * binding_timescale(c.concentration, c.pair));
  return c;
}

RunConfig parse_config(std::istream& in, const std::string& name) {
  const ParsedFile file = tokenize(in, name);
  RunConfig config = default_config();
  config.interferers.clear();
  config.interferers.resize(file.interferer_count);

  // Pass 1: the pair, so concentration units of "KD" can resolve.
  for (const auto& e : file.entries) {
    if (e.section != "pair") continue;
    const std::string& f = file.name;
    if (e.key == "k_on")
      config.pair.k_on = parse_scalar(e.value, Dim::assoc_rate, 0, f, e.line);
    else if (e.key == "k_off")
      config.pair.k_off = parse_scalar(e.value, Dim::rate, 0, f, e.line);
    else if (e.key == "receptor_length")
      config.pair.receptor_length = parse_scalar(e.value, Dim::length, 0, f, e.line);
    else if (e.key == "electrons_per_ligand")
      config.pair.electrons_per_ligand = parse_scalar(e.value, Dim::none, 0, f, e.line);
    else if (e.key == "receptor_capacitance")
      config.pair.receptor_capacitance = parse_scalar(e.value, Dim::capacitance, 0, f, e.line);
    else if (e.key == "ligand_capacitance")
      config.pair.ligand_capacitance = parse_scalar(e.value, Dim::capacitance, 0, f, e.line);
    else
      throw ConfigError(f, e.line, "unknown key 'pair." + e.key + "'");
  }
  try {
    config.pair.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(name + ": [pair] " + ex.what());
  }
  const double kd = dissociation_constant(config.pair);

  // Defaults that track the pair unless the file overrides them below.
  config.concentration = 4.0 * kd;
  config.schedule.levels = {config.concentration};
  config.schedule.symbol_rate = 1.0 / (20.0 * binding_timescale(config.concentration, config.pair));

  // Sweep keys are collected raw: their dimension depends on the axis.
  struct SweepRaw {
    std::string axis = "c", family_axis, scale = "log";
    std::string min_text, max_text, grid_text, family_text;
    int min_line = 0, max_line = 0, grid_line = 0, family_line = 0, points = 25;
    bool seen = false;
  } sweep_raw;

  for (const auto& e : file.entries) {
    const std::string& f = file.name;
    const std::string& k = e.key;
    if (e.section == "pair") continue;
    if (e.section == "environment") {
      if (k == "temperature")
        config.environment.temperature = parse_scalar(e.value, Dim::kelvin, kd, f, e.line);
      else if (k == "ionic_concentration" || k == "c_ion")
        config.environment.ionic_concentration =
            parse_scalar(e.value, Dim::molar_conc, kd, f, e.line);
      else if (k == "relative_permittivity")
        config.environment.relative_permittivity =
            parse_scalar(e.value, Dim::none, kd, f, e.line);
      else
        throw ConfigError(f, e.line, "unknown key 'environment." + k + "'");
    } else if (e.section == "transducer") {
      auto& t = config.transducer;
      if (k == "width") t.width = parse_scalar(e.value, Dim::length, kd, f, e.line);
      else if (k == "length") t.length = parse_scalar(e.value, Dim::length, kd, f, e.line);
      else if (k == "oxide_thickness")
        t.oxide_thickness = parse_scalar(e.value, Dim::length, kd, f, e.line);
      else if (k == "oxide_rel_permittivity")
        t.oxide_rel_permittivity = parse_scalar(e.value, Dim::none, kd, f, e.line);
      else if (k == "effective_mobility")
        t.effective_mobility = parse_scalar(e.value, Dim::mobility, kd, f, e.line);
      else if (k == "drain_source_voltage")
        t.drain_source_voltage = parse_scalar(e.value, Dim::voltage, kd, f, e.line);
      else if (k == "dl_capacitance_per_area")
        t.dl_capacitance_per_area = parse_scalar(e.value, Dim::cap_area, kd, f, e.line);
      else if (k == "semiconductor_capacitance_per_area")
        t.semiconductor_capacitance_per_area =
            parse_scalar(e.value, Dim::cap_area, kd, f, e.line);
      else if (k == "trap_density")
        t.trap_density = parse_scalar(e.value, Dim::trap_density, kd, f, e.line);
      else if (k == "tunneling_distance")
        t.tunneling_distance = parse_scalar(e.value, Dim::length, kd, f, e.line);
      else if (k == "layer_resistance")
        t.layer_resistance = parse_scalar(e.value, Dim::resistance, kd, f, e.line);
      else if (k == "gate_source_voltage")
        t.gate_source_voltage = parse_scalar(e.value, Dim::voltage, kd, f, e.line);
      else if (k == "baseline_threshold_voltage")
        t.baseline_threshold_voltage = parse_scalar(e.value, Dim::voltage, kd, f, e.line);
      else
        throw ConfigError(f, e.line, "unknown key 'transducer." + k + "'");
    } else if (e.section == "layer") {
      if (k == "receptor_density")
        config.receptor_density = parse_scalar(e.value, Dim::areal_density, kd, f, e.line);
      else
        throw ConfigError(f, e.line, "unknown key 'layer." + k + "'");
    } else if (e.section == "schedule") {
      if (k == "levels")
        config.schedule.levels = parse_list(e.value, Dim::molec_conc, kd, f, e.line);
      else if (k == "symbol_rate")
        config.schedule.symbol_rate = parse_scalar(e.value, Dim::frequency, kd, f, e.line);
      else if (k == "start_time")
        config.schedule.start_time = parse_scalar(e.value, Dim::time, kd, f, e.line);
      else
        throw ConfigError(f, e.line, "unknown key 'schedule." + k + "'");
    } else if (e.section == "band") {
      if (k == "f_min") config.band.f_min = parse_scalar(e.value, Dim::frequency, kd, f, e.line);
      else if (k == "f_max")
        config.band.f_max = parse_scalar(e.value, Dim::frequency, kd, f, e.line);
      else
        throw ConfigError(f, e.line, "unknown key 'band." + k + "'");
    } else if (e.section == "sweep") {
      sweep_raw.seen = true;
      if (k == "axis") sweep_raw.axis = e.value;
      else if (k == "family_axis") sweep_raw.family_axis = e.value;
      else if (k == "scale") sweep_raw.scale = e.value;
      else if (k == "min") { sweep_raw.min_text = e.value; sweep_raw.min_line = e.line; }
      else if (k == "max") { sweep_raw.max_text = e.value; sweep_raw.max_line = e.line; }
      else if (k == "grid") { sweep_raw.grid_text = e.value; sweep_raw.grid_line = e.line; }
      else if (k == "family") { sweep_raw.family_text = e.value; sweep_raw.family_line = e.line; }
      else if (k == "points") sweep_raw.points = parse_int(e.value, f, e.line);
      else throw ConfigError(f, e.line, "unknown key 'sweep." + k + "'");
    } else if (e.section == "lod") {
      if (k == "threshold_db") config.lod.threshold_db = parse_scalar(e.value, Dim::none, kd, f, e.line);
      else if (k == "c_min") config.lod.c_min = parse_scalar(e.value, Dim::molec_conc, kd, f, e.line);
      else if (k == "c_max") config.lod.c_max = parse_scalar(e.value, Dim::molec_conc, kd, f, e.line);
      else if (k == "points") config.lod.points = parse_int(e.value, f, e.line);
      else throw ConfigError(f, e.line, "unknown key 'lod." + k + "'");
    } else if (e.section == "validate") {
      if (k == "trace_tau") config.validate.trace_tau = parse_scalar(e.value, Dim::none, kd, f, e.line);
      else if (k == "receptor_count")
        config.validate.receptor_count = parse_scalar(e.value, Dim::none, kd, f, e.line);
      else throw ConfigError(f, e.line, "unknown key 'validate." + k + "'");
    } else if (e.section == "run") {
      if (k == "mode") config.mode = parse_mode(e.value);
      else if (k == "seed") config.seed = parse_u64(e.value, f, e.line);
      else if (k == "out") config.output_path = e.value;
      else if (k == "concentration")
        config.concentration = parse_scalar(e.value, Dim::molec_conc, kd, f, e.line);
      else if (k == "snr_signal") {
        if (e.value == "deviation") config.snr_signal = SignalModel::deviation;
        else if (e.value == "absolute") config.snr_signal = SignalModel::absolute_bias;
        else throw ConfigError(f, e.line, "snr_signal must be deviation|absolute");
      } else if (k == "dt")
        config.sim_dt = parse_scalar(e.value, Dim::time, kd, f, e.line);
      else if (k == "sim_binding_noise")
        config.sim_noise.binding = parse_int(e.value, f, e.line) != 0;
      else if (k == "sim_thermal_noise")
        config.sim_noise.thermal = parse_int(e.value, f, e.line) != 0;
      else if (k == "sim_flicker_noise")
        config.sim_noise.flicker = parse_int(e.value, f, e.line) != 0;
      else throw ConfigError(f, e.line, "unknown key 'run." + k + "'");
    } else if (e.section == "interferer") {
      auto& sp = config.interferers[e.interferer_index];
      if (k == "concentration")
        sp.concentration = parse_scalar(e.value, Dim::molec_conc, kd, f, e.line);
      else if (k == "k_on") sp.k_on = parse_scalar(e.value, Dim::assoc_rate, kd, f, e.line);
      else if (k == "k_off") sp.k_off = parse_scalar(e.value, Dim::rate, kd, f, e.line);
      else if (k == "electrons") sp.electrons = parse_scalar(e.value, Dim::none, kd, f, e.line);
      else if (k == "receptor_length_equivalent")
        sp.receptor_length_equivalent = parse_scalar(e.value, Dim::length, kd, f, e.line);
      else throw ConfigError(f, e.line, "unknown key 'interferer." + k + "'");
    } else {
      throw ConfigError(f, e.line, "unknown section '[" + e.section + "]'");
    }
  }

  // Resolve the sweep with axis-appropriate units.
  config.sweep.axis = sweep_raw.axis;
  config.sweep.family_axis = sweep_raw.family_axis;
  if (!is_sweep_axis(config.sweep.axis))
    throw ConfigError(name + ": sweep: unknown axis '" + config.sweep.axis + "'");
  const Dim axis_dim = axis_table().at(config.sweep.axis).dim;
  if (!sweep_raw.grid_text.empty()) {
    config.sweep.grid =
        parse_list(sweep_raw.grid_text, axis_dim, kd, name, sweep_raw.grid_line);
  } else if (!sweep_raw.min_text.empty() || !sweep_raw.max_text.empty()) {
    if (sweep_raw.min_text.empty() || sweep_raw.max_text.empty())
      throw ConfigError(name + ": sweep: min and max must both be given");
    const double lo = parse_scalar(sweep_raw.min_text, axis_dim, kd, name, sweep_raw.min_line);
    const double hi = parse_scalar(sweep_raw.max_text, axis_dim, kd, name, sweep_raw.max_line);
    if (!(hi > lo)) throw ConfigError(name + ": sweep: require max > min");
    if (sweep_raw.points < 2) throw ConfigError(name + ": sweep: points must be >= 2");
    if (sweep_raw.scale == "log") {
      if (!(lo > 0.0)) throw ConfigError(name + ": sweep: log scale needs min > 0");
      config.sweep.grid = logspace(lo, hi, sweep_raw.points);
    } else if (sweep_raw.scale == "linear") {
      config.sweep.grid = linspace(lo, hi, sweep_raw.points);
    } else {
      throw ConfigError(name + ": sweep: scale must be log|linear");
    }
  }
  if (!sweep_raw.family_text.empty()) {
    if (config.sweep.family_axis.empty())
      throw ConfigError(name + ": sweep: family given without family_axis");
    const Dim fam_dim = axis_table().at(config.sweep.family_axis).dim;
    config.sweep.family =
        parse_list(sweep_raw.family_text, fam_dim, kd, name, sweep_raw.family_line);
  }

  try {
    config.validate_all();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(name + ": " + ex.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[environment]\n";
  out << "temperature = " << num(c.environment.temperature) << " K\n";
  out << "ionic_concentration = " << num(c.environment.ionic_concentration) << " mol/m^3\n";
  out << "relative_permittivity = " << num(c.environment.relative_permittivity) << "\n";
  out << "\n[pair]\n";
  out << "k_on = " << num(c.pair.k_on) << " m^3/s\n";
  out << "k_off = " << num(c.pair.k_off) << " 1/s\n";
  out << "receptor_length = " << num(c.pair.receptor_length) << " m\n";
  out << "electrons_per_ligand = " << num(c.pair.electrons_per_ligand) << "\n";
  out << "receptor_capacitance = " << num(c.pair.receptor_capacitance) << " F\n";
  out << "ligand_capacitance = " << num(c.pair.ligand_capacitance) << " F\n";
  out << "\n[transducer]\n";
  out << "width = " << num(c.transducer.width) << " m\n";
  out << "length = " << num(c.transducer.length) << " m\n";
  out << "oxide_thickness = " << num(c.transducer.oxide_thickness) << " m\n";
  out << "oxide_rel_permittivity = " << num(c.transducer.oxide_rel_permittivity) << "\n";
  out << "effective_mobility = " << num(c.transducer.effective_mobility) << " m^2/Vs\n";
  out << "drain_source_voltage = " << num(c.transducer.drain_source_voltage) << " V\n";
  out << "dl_capacitance_per_area = " << num(c.transducer.dl_capacitance_per_area) << " F/m^2\n";
  out << "semiconductor_capacitance_per_area = "
      << num(c.transducer.semiconductor_capacitance_per_area) << " F/m^2\n";
  out << "trap_density = " << num(c.transducer.trap_density) << " 1/eV/m^3\n";
  out << "tunneling_distance = " << num(c.transducer.tunneling_distance) << " m\n";
  out << "layer_resistance = " << num(c.transducer.layer_resistance) << " Ohm\n";
  if (c.transducer.gate_source_voltage)
    out << "gate_source_voltage = " << num(*c.transducer.gate_source_voltage) << " V\n";
  out << "baseline_threshold_voltage = " << num(c.transducer.baseline_threshold_voltage)
      << " V\n";
  out << "\n[layer]\n";
  out << "receptor_density = " << num(c.receptor_density) << " 1/m^2\n";
  out << "\n[schedule]\n";
  out << "levels = ";
  for (std::size_t i = 0; i < c.schedule.levels.size(); ++i)
    out << (i ? ", " : "") << num(c.schedule.levels[i]);
  out << "\n";
  out << "symbol_rate = " << num(c.schedule.symbol_rate) << " Hz\n";
  out << "start_time = " << num(c.schedule.start_time) << " s\n";
  out << "\n[band]\n";
  out << "f_min = " << num(c.band.f_min) << " Hz\n";
  out << "f_max = " << num(c.band.f_max) << " Hz\n";
  out << "\n[sweep]\n";
  out << "axis = " << c.sweep.axis << "\n";
  if (!c.sweep.grid.empty()) {
    out << "grid = ";
    for (std::size_t i = 0; i < c.sweep.grid.size(); ++i)
      out << (i ? ", " : "") << num(c.sweep.grid[i]);
    out << "\n";
  }
  if (c.sweep.has_family()) {
    out << "family_axis = " << c.sweep.family_axis << "\n";
    out << "family = ";
    for (std::size_t i = 0; i < c.sweep.family.size(); ++i)
      out << (i ? ", " : "") << num(c.sweep.family[i]);
    out << "\n";
  }
  out << "\n[lod]\n";
  out << "threshold_db = " << num(c.lod.threshold_db) << "\n";
  if (c.lod.c_min > 0) out << "c_min = " << num(c.lod.c_min) << " 1/m^3\n";
  if (c.lod.c_max > 0) out << "c_max = " << num(c.lod.c_max) << " 1/m^3\n";
  out << "points = " << c.lod.points << "\n";
  out << "\n[validate]\n";
  out << "trace_tau = " << num(c.validate.trace_tau) << "\n";
  out << "receptor_count = " << num(c.validate.receptor_count) << "\n";
  for (const auto& sp : c.interferers) {
    out << "\n[interferer]\n";
    out << "concentration = " << num(sp.concentration) << " 1/m^3\n";
    out << "k_on = " << num(sp.k_on) << " m^3/s\n";
    out << "k_off = " << num(sp.k_off) << " 1/s\n";
    out << "electrons = " << num(sp.electrons) << "\n";
    out << "receptor_length_equivalent = " << num(sp.receptor_length_equivalent) << " m\n";
  }
  out << "\n[run]\n";
  out << "mode = " << mode_name(c.mode) << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.output_path.empty()) out << "out = " << c.output_path << "\n";
  out << "concentration = " << num(c.concentration) << " 1/m^3\n";
  out << "snr_signal = " << (c.snr_signal == SignalModel::deviation ? "deviation" : "absolute")
      << "\n";
  if (c.sim_dt > 0) out << "dt = " << num(c.sim_dt) << " s\n";
  out << "sim_binding_noise = " << (c.sim_noise.binding ? 1 : 0) << "\n";
  out << "sim_thermal_noise = " << (c.sim_noise.thermal ? 1 : 0) << "\n";
  out << "sim_flicker_noise = " << (c.sim_noise.flicker ? 1 : 0) << "\n";
  return out.str();
}

void apply_preset(RunConfig& config, const std::string& name) {
  const double kd = dissociation_constant(config.pair);
  auto sweep_c = [&](double lo_kd, double hi_kd) {
    config.sweep.axis = "c";
    config.sweep.grid = logspace(lo_kd * kd, hi_kd * kd, 25);
  };
  config.sweep.family_axis.clear();
  config.sweep.family.clear();

  if (name == "table1") {
    config.sweep.axis = "c";
    config.sweep.grid = {config.concentration};
  } else if (name == "fig7a") {
    config.mode = RunMode::response;
    sweep_c(0.4, 40.0);
    config.sweep.family_axis = "N_e";
    config.sweep.family = {1, 2, 4, 8};
  } else if (name == "fig7b") {
    config.mode = RunMode::response;
    sweep_c(0.4, 40.0);
    config.sweep.family_axis = "c_ion";
    config.sweep.family = {1, 10, 70, 150};
  } else if (name == "fig7c") {
    config.mode = RunMode::response;
    sweep_c(0.4, 40.0);
    config.sweep.family_axis = "c_R";
    config.sweep.family = {2e15, 2e16, 2e17};
  } else if (name == "fig7d") {
    config.mode = RunMode::response;
    sweep_c(0.4, 40.0);
    config.sweep.family_axis = "t_ox";
    config.sweep.family = {1.75e-9, 17.5e-9, 175e-9};
  } else if (name == "fig9a") {
    config.mode = RunMode::sensitivity;
    sweep_c(0.4, 40.0);
  } else if (name == "fig9b") {
    config.mode = RunMode::sensitivity;
    config.sweep.axis = "c_ion";
    config.sweep.grid = logspace(7.0, 700.0, 25);
  } else if (name == "fig9c") {
    config.mode = RunMode::sensitivity;
    config.sweep.axis = "L_R";
    config.sweep.grid = logspace(0.4e-9, 40e-9, 25);
  } else if (name == "fig9d") {
    config.mode = RunMode::sensitivity;
    config.sweep.axis = "t_ox";
    config.sweep.grid = logspace(1.75e-9, 175e-9, 25);
  } else if (name == "fig10a") {
    config.mode = RunMode::snr;
    sweep_c(0.5, 50.0);
  } else if (name == "fig10b") {
    config.mode = RunMode::snr;
    config.sweep.axis = "c_ion";
    config.sweep.grid = logspace(1.0, 300.0, 25);
  } else if (name == "fig10c") {
    config.mode = RunMode::snr;
    config.sweep.axis = "L_R";
    config.sweep.grid = linspace(1e-9, 8e-9, 8);
  } else if (name == "fig10d") {
    config.mode = RunMode::snr;
    config.sweep.axis = "N_t";
    config.sweep.grid = logspace(1e23, 1e25, 25);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
}

std::vector<std::string> preset_names() {
  return {"table1", "fig7a", "fig7b", "fig7c", "fig7d", "fig9a", "fig9b",
          "fig9c",  "fig9d", "fig10a", "fig10b", "fig10c", "fig10d"};
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string text = emit_config(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool is_sweep_axis(const std::string& name) { return axis_table().count(name) != 0; }

void apply_axis_value(RunConfig& config, const std::string& axis, double value) {
  axis_table().at(axis).set(config, value);
}

std::string axis_unit(const std::string& axis) { return axis_table().at(axis).unit; }

std::vector<std::string> sweep_axis_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : axis_table()) names.push_back(k);
  return names;
}

} // namespace biofet
