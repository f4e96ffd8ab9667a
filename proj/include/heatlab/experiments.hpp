/// @file experiments.hpp
/// @brief Experiment sweeps and the acceptance-criteria runner.
///
/// An ExperimentConfig describes one CSV-producing sweep (the `run` side of
/// the CLI); run_experiment builds the document in memory so reruns and
/// thread-count comparisons can diff bytes without touching the filesystem.
/// The acceptance runner executes the numbered criteria behind `check` and
/// the standalone gate binary, returning one measured verdict per criterion.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "heatlab/csvio.hpp"

namespace heatlab {

/// Initial-datum description as it appears in configs and CSV headers.
struct DatumSpec {
    std::string kind = "radial";  ///< radial | off-origin | point-mass
    double xi = 1.0;              ///< support radius
    double center = 0.0;          ///< center distance (off-origin, point-mass)
};

/// One experiment invocation; fields mirror the CLI flags one-to-one.
struct ExperimentConfig {
    std::string space = "Hr:3";
    std::string id = "kernel-eval";
    std::vector<double> t_grid = {10.0, 20.0, 40.0, 80.0, 160.0};
    double eps_exponent = 0.25;  ///< epsilon(t) = t^{-exponent}
    DatumSpec datum;
    double p = 0.0;       ///< optional Lp slot, 0 = skip, else in [1, 3]
    double radius = 2.0;  ///< evaluation radius / probe distance, id-dependent
    unsigned seed = 0;    ///< nonzero: deterministic multiplicative t-jitter
    bool stamp = false;   ///< forwarded to the CSV renderer

    std::string to_json() const;
};

/// The experiment ids run_experiment understands.
const std::vector<std::string>& experiment_ids();

/// Throws std::invalid_argument on malformed configs: unknown id or space,
/// non-increasing t-grid, datum inconsistent with the experiment, p outside
/// {0} U [1, 3], eps exponent outside (0, 1/2).
void validate_config(const ExperimentConfig& cfg);

/// Runs the sweep and returns the rendered document (no file I/O). Throws
/// std::invalid_argument for config errors and std::runtime_error family for
/// numerical failures.
CsvDoc run_experiment(const ExperimentConfig& cfg);

/// Table dumps behind the `dump` subcommand: kind is cfunction | phi | kernel.
/// `param` is the spectral parameter (phi) or the time (kernel); the grid runs
/// over [0, x_max] in steps of dx.
CsvDoc dump_table(const std::string& kind, const std::string& space, double param,
                  double x_max, double dx);

// --- acceptance gate -------------------------------------------------------

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;     ///< measured values, single line
    double seconds = 0.0;
};

/// Criterion numbers behind a named suite: unit {1,2}, envelopes {3,4},
/// thm12 {5,6}, sec34 {7}, sec4 {8}, all {1..9}. Throws on unknown names.
std::vector<int> suite_criteria(const std::string& suite);

/// Runs the given criteria in order. `fast` trims the most expensive sweeps
/// and marks every trimmed sub-check inside the detail string; bars are never
/// loosened. Unknown numbers throw.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& which, bool fast);

/// Machine-readable verdict for one acceptance run.
std::string verdict_json(const std::string& suite, const std::vector<CriterionResult>& rs);

}  // namespace heatlab
