// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "dses/analysis.hpp"
#include "dses/experiment.hpp"

namespace dses::cli {

// Process exit codes shared by the command implementations and the binary.
enum ExitCode : int { kOk = 0, kUsage = 1, kDiverged = 2, kInfeasible = 3 };

// Runs the ensemble and writes the stats CSV plus a JSON sidecar holding the
// resolved config (re-runnable), the seed and divergence counts. When
// config.paths > 0 also writes the sampled trajectories. Emits a feasibility
// warning to `diag` when the parameters fail the theoretical conditions.
int cmd_simulate(const ExperimentConfig& config, const std::string& csv_path,
                 const std::string& sidecar_path, const std::string& paths_path,
                 std::ostream& diag);

// Propagates the expectation and the variance upper bound for a 1-D quadratic
// setup and writes k, mean_x_theory, sigma_x_theory (joined with empirical
// columns from a prior simulate CSV when join_csv is non-empty), plus the
// feasibility report as JSON.
int cmd_analyze(const ExperimentConfig& config, const std::string& csv_path,
                const std::string& report_path, const std::string& join_csv, std::ostream& diag);

// Prints the stability report as JSON. Multidimensional objectives are
// checked per coordinate with the diagonal curvature as the 1-D surrogate.
int cmd_feasible(const ExperimentConfig& config, std::ostream& out);

// Reports the largest feasible rho at fixed beta/eps/chi/psi/mu as JSON.
int cmd_sweep(double beta, double eps, double chi, double psi, double mu, double rho_hi,
              double tol, std::ostream& out);

std::string stability_report_json(const StabilityReport& report, int indent = 2);

}  // namespace dses::cli
