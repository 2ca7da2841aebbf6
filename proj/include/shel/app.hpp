#pragma once

// Batch front end: named experiments writing CSV tables and heatmaps.
//
// Config files are flat `key = value` lines with dotted sections, `#`
// comments and repeatable keys:
//
//   experiment              moments | centroid | tilt-sweep | density-grid | verify
//   beam.kw0                k * w0
//   beam.sigma              helicity list, e.g. -1,0,1
//   beam.alpha_re / beam.alpha_im / beam.beta_re / beam.beta_im   Jones vector
//   beam.mode               n,m,re,im  (repeatable)
//   frame.theta / frame.phi tilt angle lists in radians
//   frame.z                 plane list in units of 1/k; a trailing L means Rayleigh ranges
//   quadrature.nodes        nodes per axis
//   quadrature.half_width_factor
//   quadrature.threads
//   grid.points / grid.extent   density-grid resolution and half-width in spot sizes
//   output.path

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shel/core_modes.hpp"
#include "shel/quadrature.hpp"

namespace shel::app {

enum class Experiment { moments, centroid, tilt_sweep, density_grid, verify };

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kIoFailure = 2 };

struct ModeTerm {
    int n = 0;
    int m = 0;
    double re = 0.0;
    double im = 0.0;
};

struct RunConfig {
    std::optional<Experiment> experiment;
    double kw0 = 200.0;
    std::vector<double> sigma{1.0};
    std::optional<Complex> alpha;
    std::optional<Complex> beta;
    std::vector<ModeTerm> modes;
    std::vector<double> theta{0.0};
    std::vector<double> phi{0.0};
    std::vector<std::string> z{"0"};
    QuadratureSpec quadrature;
    int grid_points = 129;
    double grid_extent = 3.0;
    std::string output;
};

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

/// Applies one `key = value` entry; repeatable keys append. Throws ValidationError on unknown keys or bad values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a config file into `config`. Throws IoError when the file cannot be read.
void load_config_file(RunConfig& config, const std::string& path);

/// Resolves a plane position: "12.5" in units of 1/k, "0.25L" in Rayleigh ranges.
double parse_length(const std::string& text, double rayleigh_range);

/// Re-validates every physical invariant of `config`; throws ValidationError.
void validate(const RunConfig& config);

/// Runs the experiment. CSV goes to `config.output`, or to `out` when no path is set.
/// Returns the process exit code.
int run(const RunConfig& config, std::ostream& out);

/// Full command-line entry point; `out` receives CSV written to stdout, `err` diagnostics.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17-significant-digit form used for every CSV number (round-trip exact).
std::string format_number(double v);

} // namespace shel::app
