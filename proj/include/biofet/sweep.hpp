#pragma once

#include "biofet/config.hpp"
#include "biofet/result_table.hpp"

namespace biofet {

// Evaluates the mode's figure of merit over sweep grid x family. Per-point
// failures become row_errors; surviving rows keep grid order.
ResultTable run_sweep(const RunConfig& config);

// Stochastic-vs-analytic oracle suite: Monte-Carlo occupancy traces checked
// against the analytic mean/variance/ACF-timescale/PSD at the configured
// operating points. One pass/fail row per check.
ResultTable run_validate(const RunConfig& config);

// Trace simulation for the configured schedule, exported as CSV.
ResultTable run_simulate(const RunConfig& config, std::string& csv_out);

} // namespace biofet
