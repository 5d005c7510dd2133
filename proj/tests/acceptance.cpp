// Acceptance suite: one pass/fail line per criterion, with the measured
// values inline. Exit code is the number of failed criteria.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "biofet/config.hpp"
#include "biofet/noise.hpp"
#include "biofet/stosim.hpp"
#include "biofet/sweep.hpp"

using namespace biofet;

namespace {

const Environment env;
const LigandReceptorPair pair_t1;
const TransducerConfig cfg;
const RecognitionLayer layer = RecognitionLayer::from_density(2e16, cfg.width, cfg.length);
const double kd = dissociation_constant(pair_t1);
const Band band{1e-2, 1e3};

struct Reporter {
  int failed_criteria = 0;
  std::vector<std::string> lines;
  bool all_ok = true;

  void clause(bool ok, const std::string& text) {
    lines.push_back(std::string("    [") + (ok ? "pass" : "FAIL") + "] " + text);
    all_ok = all_ok && ok;
  }
  void note(const std::string& text) { lines.push_back("           " + text); }
  void finish(int index, const std::string& name) {
    std::string dots(52 > name.size() ? 52 - name.size() : 1, '.');
    std::printf("criterion %d: %s %s %s\n", index, name.c_str(), dots.c_str(),
                all_ok ? "PASS" : "FAIL");
    for (const auto& line : lines) std::printf("%s\n", line.c_str());
    if (!all_ok) ++failed_criteria;
    lines.clear();
    all_ok = true;
  }
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::exp(std::log(hi / lo) * i / (n - 1));
  return v;
}

double snr_at(double c, const LigandReceptorPair& p, const Environment& e,
              const TransducerConfig& t) {
  return snr_db(c, t, p, layer, e, band);
}

void criterion_debye(Reporter& rep) {
  const double lambda = debye_length(env);
  rep.clause(std::fabs(lambda - 1.15e-9) / 1.15e-9 <= 0.01,
             fmt("lambda_D(70 mol/m^3, 298 K, eps_R 78) = %.4f nm, target 1.15 nm within 1%%",
                 lambda * 1e9));
  bool below = true;
  double last = lambda;
  for (double c_ion : {100.0, 150.0, 200.0, 300.0}) {
    Environment e = env;
    e.ionic_concentration = c_ion;
    const double l = debye_length(e);
    below = below && l < 1e-9 && l < last;
    last = l;
  }
  rep.clause(below, "lambda_D < 1 nm for every c_ion >= 100 mol/m^3 (decreasing)");
  rep.finish(1, "debye screening length");
}

void criterion_fold_change(Reporter& rep) {
  Environment diluted = env;
  diluted.ionic_concentration = 1.0;
  const double c = 4.0 * kd;
  const double ratio = potential_shift(c, cfg, pair_t1, layer, diluted) /
                       potential_shift(c, cfg, pair_t1, layer, env);
  rep.clause(ratio >= 15.0 && ratio <= 27.0,
             fmt("dV_T(1 mM)/dV_T(70 mM) = %.2f, target range [15, 27]", ratio));
  rep.finish(2, "ionic dilution fold change");
}

void criterion_langmuir(Reporter& rep) {
  const double n_r = layer.receptor_count;
  const double f_half = mean_bound_steady(kd, pair_t1, layer) / n_r;
  const double f_4kd = mean_bound_steady(4.0 * kd, pair_t1, layer) / n_r;
  rep.clause(std::fabs(f_half - 0.5) <= 1e-12,
             fmt("occupancy fraction at K_D = %.15f, expected 0.5 within 1e-12", f_half));
  rep.clause(std::fabs(f_4kd - 0.8) <= 1e-12,
             fmt("occupancy fraction at 4 K_D = %.15f, expected 0.8 within 1e-12", f_4kd));
  rep.finish(3, "langmuir forced points");
}

void criterion_sensitivity(Reporter& rep) {
  double worst = 0.0;
  for (double c : {0.5 * kd, 2.0 * kd, 4.0 * kd, 8.0 * kd, 16.0 * kd}) {
    const double h = 1e-4 * c;
    const double numeric = (current_shift(c + h, cfg, pair_t1, layer, env) -
                            current_shift(c - h, cfg, pair_t1, layer, env)) /
                           (2.0 * h);
    const double analytic = sensitivity(c, cfg, pair_t1, layer, env);
    worst = std::max(worst, std::fabs(analytic - numeric) / std::fabs(numeric));
  }
  rep.clause(worst < 1e-3,
             fmt("analytic vs central-difference derivative: worst relative error %.2e "
                 "(tolerance 1e-3) at 5 concentrations",
                 worst));

  auto decreasing = [&](const char* label, auto setter, std::vector<double> grid) {
    double prev = 1e300;
    bool ok = true;
    for (double v : grid) {
      LigandReceptorPair p = pair_t1;
      Environment e = env;
      TransducerConfig t = cfg;
      double c = 4.0 * kd;
      setter(v, p, e, t, c);
      const double s = sensitivity(c, t, p, layer, e);
      ok = ok && s > 0.0 && s < prev;
      prev = s;
    }
    rep.clause(ok, std::string("sensitivity strictly decreasing in ") + label);
  };
  decreasing("c on [0.4, 40] K_D",
             [](double v, LigandReceptorPair&, Environment&, TransducerConfig&, double& c) { c = v; },
             logspace(0.4 * kd, 40.0 * kd, 15));
  decreasing("c_ion on [7, 700] mol/m^3",
             [](double v, LigandReceptorPair&, Environment& e, TransducerConfig&, double&) {
               e.ionic_concentration = v;
             },
             logspace(7.0, 700.0, 15));
  decreasing("L_R on [0.4, 40] nm",
             [](double v, LigandReceptorPair& p, Environment&, TransducerConfig&, double&) {
               p.receptor_length = v;
             },
             logspace(0.4e-9, 40e-9, 15));
  decreasing("t_ox on [1.75, 175] nm",
             [](double v, LigandReceptorPair&, Environment&, TransducerConfig& t, double&) {
               t.oxide_thickness = v;
             },
             logspace(1.75e-9, 175e-9, 15));
  rep.finish(4, "sensitivity-derivative oracle and trends");
}

void criterion_snr(Reporter& rep) {
  // monotone rise to a plateau over [0.5, 50] K_D
  const auto grid = logspace(0.5 * kd, 50.0 * kd, 15);
  bool monotone = true;
  double prev = -1e300, plateau = 0.0, last_step = 0.0;
  for (double c : grid) {
    const double s = snr_at(c, pair_t1, env, cfg);
    monotone = monotone && s > prev;
    last_step = s - prev;
    prev = s;
    plateau = s;
  }
  rep.clause(monotone && last_step < 1.0,
             fmt("SNR monotone increasing and saturating in c (final step %.2f dB)",
                 last_step));
  rep.clause(plateau >= 20.0 && plateau <= 30.0,
             fmt("plateau %.2f dB, target range [20, 30] dB", plateau));
  if (plateau > 30.0) {
    rep.note("the table1 signal chain and noise stack place the plateau near 46 dB for");
    rep.note("every admissible band: in-band thermal power is capped at 2kT/C_eq' and the");
    rep.note("flicker integral grows only logarithmically, so no band choice reaches the");
    rep.note("target from the table1 parameter set");
  }

  // affine-in-dB receptor-length dependence on [1, 8] nm
  std::vector<double> lengths, snrs;
  for (int i = 0; i < 8; ++i) {
    LigandReceptorPair p = pair_t1;
    p.receptor_length = 1e-9 * (1.0 + i);
    lengths.push_back(p.receptor_length * 1e9);
    snrs.push_back(snr_at(4.0 * kd, p, env, cfg));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = lengths.size();
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    sx += lengths[i];
    sy += snrs[i];
    sxx += lengths[i] * lengths[i];
    sxy += lengths[i] * snrs[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    max_dev = std::max(max_dev, std::fabs(snrs[i] - (intercept + slope * lengths[i])));
  rep.clause(max_dev <= 1.0,
             fmt("SNR(dB) vs L_R on [1, 8] nm: max deviation from the least-squares line "
                 "%.2f dB, target <= 1 dB",
                 max_dev));
  if (max_dev > 1.0) {
    rep.note("binding noise dominates below ~7 nm with the table1 occupancy statistics");
    rep.note("(>100x thermal+flicker at 1 nm); signal and binding noise both scale with");
    rep.note("q_eff^2, so the short-receptor end flattens instead of following the line;");
    rep.note("the affine law holds only where binding noise is negligible (see the");
    rep.note("screening checks in the unit suite)");
  }

  // strictly decreasing in the ionic concentration
  bool dec = true;
  prev = 1e300;
  for (double c_ion : logspace(1.0, 300.0, 15)) {
    Environment e = env;
    e.ionic_concentration = c_ion;
    const double s = snr_at(4.0 * kd, pair_t1, e, cfg);
    dec = dec && s < prev;
    prev = s;
  }
  rep.clause(dec, "SNR strictly decreasing in c_ion on [1, 300] mol/m^3");

  // trap-density degradation
  TransducerConfig clean = cfg, dirty = cfg;
  clean.trap_density = 1e23;
  dirty.trap_density = 1e25;
  const double drop =
      snr_at(4.0 * kd, pair_t1, env, clean) - snr_at(4.0 * kd, pair_t1, env, dirty);
  rep.clause(drop > 3.0,
             fmt("SNR degradation from N_t = 1e23 to 1e25: %.2f dB, target > 3 dB", drop));
  rep.finish(5, "snr trends");
}

void criterion_stochastic(Reporter& rep) {
  // the validate mode runs exactly this suite: N_R = 1e4, c in {K_D, 4 K_D},
  // trace length 1e4 tau_B; mean 3 SE / variance 10% / ACF 10% / PSD 20%
  RunConfig config = default_config();
  config.mode = RunMode::validate;
  const ResultTable table = run_validate(config);
  for (const auto& row : table.rows) {
    rep.clause(row.back() == "pass",
               row[0] + " at c = " + row[1] + " K_D: measured " + row[2] + ", expected " +
                   row[3] + " within " + row[4]);
  }
  rep.finish(6, "stochastic-analytic oracle equivalence");
}

void criterion_psd_bookkeeping(Reporter& rep) {
  using boost::math::quadrature::gauss_kronrod;
  const double quad =
      2.0 * gauss_kronrod<double, 15>::integrate(
                [&](double f) { return flicker_voltage_psd(f, cfg, env); }, band.f_min,
                band.f_max, 14, 1e-10);
  const double closed = flicker_band_power(band, cfg, env);
  const double flicker_err = std::fabs(quad - closed) / closed;
  rep.clause(flicker_err < 1e-4,
             fmt("flicker quadrature vs closed-form log integral: relative error %.2e "
                 "(tolerance 1e-4)",
                 flicker_err));

  const double c = 4.0 * kd;
  const auto caps = capacitances(mean_bound_steady(c, pair_t1, layer), cfg, pair_t1, layer);
  const double vm = ligand_charge(pair_t1, debye_length(env)) / caps.c_eq;
  const double expected = bound_variance(c, pair_t1, layer) * vm * vm;
  const double total = gauss_kronrod<double, 15>::integrate(
      [&](double f) { return binding_voltage_psd(f, c, cfg, pair_t1, layer, env); },
      -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 12,
      1e-9);
  const double binding_err = std::fabs(total - expected) / expected;
  rep.clause(binding_err < 5e-3,
             fmt("binding PSD full integral recovers the voltage variance: relative error "
                 "%.2e (tolerance 5e-3)",
                 binding_err));
  rep.finish(7, "psd bookkeeping");
}

void criterion_csk(Reporter& rep) {
  SerExperiment exp;
  exp.pair = pair_t1;
  exp.layer = layer;
  exp.transducer = cfg;
  exp.environment = env;

  // noiseless, well separated
  exp.alphabet = {kd, 16.0 * kd};
  exp.n_symbols = 1000;
  exp.noise = NoiseFlags::none();
  exp.seed = default_seed;
  const auto clean = estimate_ser(exp);
  rep.clause(clean.error_count == 0,
             fmt("noiseless separated binary CSK: %g errors in 1000 symbols",
                 static_cast<double>(clean.error_count)));

  // monotone in the level separation, full noise stack
  exp.noise = NoiseFlags::all();
  exp.n_symbols = 10000;
  const double c_lo = 2e-3 * kd;
  std::vector<SerResult> results;
  std::string summary = "SER vs separation";
  for (double ratio : {2.0, 4.0, 8.0, 16.0}) {
    exp.alphabet = {c_lo, ratio * c_lo};
    results.push_back(estimate_ser(exp));
    summary += fmt(" | x%.0f: %.4f", ratio, results.back().ser);
  }
  bool no_increase = true;
  for (std::size_t i = 0; i + 1 < results.size(); ++i)
    no_increase = no_increase && results[i + 1].ci_low <= results[i].ci_high;
  const bool overall_drop = results.back().ci_high < results.front().ci_low;
  rep.clause(no_increase && overall_drop,
             summary + " (no significant increase, significant overall decrease, 95% CIs)");

  exp.alphabet = {c_lo, 2.0 * c_lo};
  const auto repeat = estimate_ser(exp);
  rep.clause(repeat.ser == results.front().ser &&
                 repeat.error_count == results.front().error_count,
             "fixed seed reproduces the SER estimate exactly");
  rep.finish(8, "csk detection harness");
}

} // namespace

int main() {
  std::printf("acceptance suite: table1 defaults, band [1e-2, 1e3] Hz, seed %llu\n\n",
              static_cast<unsigned long long>(default_seed));
  Reporter rep;
  criterion_debye(rep);
  criterion_fold_change(rep);
  criterion_langmuir(rep);
  criterion_sensitivity(rep);
  criterion_snr(rep);
  criterion_stochastic(rep);
  criterion_psd_bookkeeping(rep);
  criterion_csk(rep);
  std::printf("\n%d of 8 criteria failed\n", rep.failed_criteria);
  return rep.failed_criteria;
}
