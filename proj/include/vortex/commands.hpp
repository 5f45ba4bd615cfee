#pragma once

#include "vortex/cli_io.hpp"
#include "vortex/reconstruct.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vortex {

// Each command writes its artifacts into cfg.output and returns the report,
// which is also written there as <name>_report.txt. Solver failures surface
// as std::runtime_error after the report has been written where possible.

// profile.csv: ell, rho, drho and the cumulative integrals, every stride-th
// knot, closed by a row "inf, 1, 0, I1, I2".
Report run_profile(const RunConfig& cfg, int stride = 50);

struct SolveFlags {
    bool ansatz_only = false;
    bool balance = false; // root search over cfg.d_bracket (default [d/2, 2 d])
};

// <regime>_ansatz.vsf and, unless ansatz_only, <regime>_solution.vsf.
Report run_solve(const RunConfig& cfg, const SolveFlags& flags);

// reduce.csv: d, c_numeric, c_leading over `points` geometric samples of
// cfg.d_bracket (default [predict/2, 2 predict]).
Report run_reduce(const RunConfig& cfg, int points = 8);

// Diagnostics of a stored field, read with the model parameters of cfg. The
// vortex list covers the full plane (meridian plane for rings).
Report run_verify(const RunConfig& cfg, const std::string& field_path,
                  const std::optional<std::string>& ansatz_path = std::nullopt);

struct ReconstructFlags {
    std::optional<std::string> fine_path; // same domain, half the step: Richardson
    double spacing_fraction = 0.25;       // sample spacing of the CSV block, in units of h
    int levels = 4;                       // spacing halvings in the residual study
};

// samples.csv (t, tau, s1, s2, s3, m1, m2, m3) and residual norms at
// successive spacing halvings.
Report run_reconstruct(const RunConfig& cfg, const std::string& field_path, const ReconstructFlags& flags);

// sweep.csv: ansatz and corrector norms, Newton data and multiplier for each
// eps at the fixed d_hat of cfg.
Report run_sweep(const RunConfig& cfg, const std::vector<double>& eps_list = {0.1, 0.05, 0.025});

// Default residual window around the right-hand core.
SampleBlock default_block(const ModelParams& params, double spacing);

} // namespace vortex
