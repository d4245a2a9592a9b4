// SPDX-License-Identifier: Apache-2.0
#include "dses/commands.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "dses/errors.hpp"

namespace dses::cli {
namespace {

using nlohmann::json;

json report_to_json(const StabilityReport& report) {
  json conditions = json::array();
  for (const auto& c : report.reasons)
    conditions.push_back({{"name", c.name},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"holds", c.holds},
                          {"margin", c.margin}});
  return json{{"feasible", report.feasible},
              {"conditions", conditions},
              {"spectral_radius_ae", report.spectral_radius_ae},
              {"spectral_radius_ams", report.spectral_radius_ams},
              {"spectral_radius_ams_q2", report.spectral_radius_ams_q2},
              {"jury_quintic_pass", report.jury_quintic_pass}};
}

// Curvature at the study minimizer when one is available; nullopt otherwise.
std::optional<double> try_curvature(const Objective& obj) {
  try {
    return curvature_at_minimizer(obj);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::string stability_report_json(const StabilityReport& report, int indent) {
  return report_to_json(report).dump(indent);
}

int cmd_simulate(const ExperimentConfig& config, const std::string& csv_path,
                 const std::string& sidecar_path, const std::string& paths_path,
                 std::ostream& diag) {
  config.validate();
  const Objective obj = config.build_objective();

  if (obj.dim == 1) {
    if (const auto mu = try_curvature(obj)) {
      const StabilityReport report = check_feasibility(config.params, *mu);
      if (!report.feasible)
        diag << "warning: parameters fail the theoretical feasibility conditions "
                "(run `dses feasible` for details); simulating anyway\n";
    }
  }

  EnsembleStats stats;
  try {
    stats = run_ensemble(config.ensemble, config.params, obj);
  } catch (const AllDivergedError& e) {
    diag << "error: " << e.what() << "\n";
    return kDiverged;
  }
  write_stats_csv(csv_path, stats);

  json sidecar = json::parse(to_json_string(config));
  sidecar["result"] = {{"n_diverged", stats.n_diverged},
                       {"alive_final", stats.alive.back()},
                       {"y0_resolved", resolve_y0(config.ensemble, obj.dim)[0]}};
  if (obj.dim > 1) {
    json y0 = json::array();
    const Eigen::VectorXd v = resolve_y0(config.ensemble, obj.dim);
    for (Eigen::Index i = 0; i < v.size(); ++i) y0.push_back(v[i]);
    sidecar["result"]["y0_resolved"] = y0;
  }
  std::ofstream side(sidecar_path);
  if (!side) throw ConfigError("cannot open sidecar file: " + sidecar_path);
  side << sidecar.dump(2) << "\n";

  if (config.paths > 0) {
    const auto paths = sample_paths(config.ensemble, config.params, obj, config.paths);
    write_paths_csv(paths_path, paths);
  }
  return kOk;
}

int cmd_analyze(const ExperimentConfig& config, const std::string& csv_path,
                const std::string& report_path, const std::string& join_csv, std::ostream& diag) {
  config.validate();
  const Objective obj = config.build_objective();
  if (obj.dim != 1 || parse_objective_id(config.objective_id) != PaperObjectiveId::quad1d) {
    diag << "error: analyze requires a 1-D quadratic objective (the moment machinery is "
            "derived under that assumption)\n";
    return kUsage;
  }
  if (config.ensemble.x0.kind != InitialCondition::Kind::fixed) {
    diag << "error: analyze requires a fixed x0\n";
    return kUsage;
  }
  const double mu = curvature_at_minimizer(obj);
  const double x_tilde0 = config.ensemble.x0.value[0] - (*obj.minimizer)[0];
  const double y0 = resolve_y0(config.ensemble, 1)[0];

  const ExpectationMatrix ae = build_expectation_matrix(config.params, mu);
  const MomentMatrix mm = build_moment_matrix(config.params, mu);
  const InitialMoments im = initial_moments(x_tilde0, y0, config.params);
  const int k = config.ensemble.n_steps;

  // steps 1..k propagate from the bootstrap-consistent seeds; step 0 is the
  // deterministic initial condition
  const auto nu_tail = propagate_expectation(ae, im.nu1, k - 1);
  const auto bracket = propagate_moment_bounds(mm, im.zeta1, k - 1);
  const auto sigma_tail = sigma_upper_bound(bracket, nu_tail);

  std::vector<double> mean_theory(k + 1), sigma_theory(k + 1);
  const double xs = (*obj.minimizer)[0];
  mean_theory[0] = xs + x_tilde0;
  sigma_theory[0] = 0.0;
  for (int i = 1; i <= k; ++i) {
    mean_theory[i] = xs + nu_tail[i - 1][0];
    sigma_theory[i] = sigma_tail[i - 1];
  }

  StatsCsv joined;
  bool has_join = !join_csv.empty();
  if (has_join) {
    joined = read_stats_csv(join_csv);
    if (Eigen::Index(joined.k.size()) < k + 1)
      throw ConfigError("join CSV has fewer steps than the analysis horizon");
  }

  std::ofstream out(csv_path);
  if (!out) throw ConfigError("cannot open output file: " + csv_path);
  out << "k,mean_x_theory,sigma_x_theory";
  if (has_join) out << ",mean_x_emp,sigma_x_emp";
  out << "\n";
  for (int i = 0; i <= k; ++i) {
    out << i << ',' << format_double(mean_theory[i]) << ',' << format_double(sigma_theory[i]);
    if (has_join) out << ',' << format_double(joined.mean_x(i, 0)) << ','
                      << format_double(joined.sigma_x(i, 0));
    out << "\n";
  }

  const StabilityReport report = check_feasibility(config.params, mu);
  if (!report_path.empty()) {
    std::ofstream rep(report_path);
    if (!rep) throw ConfigError("cannot open report file: " + report_path);
    rep << stability_report_json(report) << "\n";
  }
  return kOk;
}

int cmd_feasible(const ExperimentConfig& config, std::ostream& out) {
  config.params.validate();
  const Objective obj = config.build_objective();
  if (obj.dim == 1) {
    const auto mu = try_curvature(obj);
    if (!mu) throw ConfigError("feasible: objective has no usable curvature at its minimizer");
    const StabilityReport report = check_feasibility(config.params, *mu);
    out << stability_report_json(report) << "\n";
    return report.feasible ? kOk : kInfeasible;
  }
  // per-coordinate 1-D surrogate checks with the diagonal curvatures
  const Eigen::VectorXd mus = coordinate_curvatures(obj);
  json coords = json::array();
  bool all = true;
  for (Eigen::Index j = 0; j < mus.size(); ++j) {
    const StabilityReport report = check_feasibility(config.params, mus[j]);
    all = all && report.feasible;
    json entry = json::parse(stability_report_json(report));
    entry["coordinate"] = j + 1;
    entry["mu"] = mus[j];
    coords.push_back(entry);
  }
  out << json{{"feasible", all}, {"coordinates", coords}}.dump(2) << "\n";
  return all ? kOk : kInfeasible;
}

int cmd_sweep(double beta, double eps, double chi, double psi, double mu, double rho_hi,
              double tol, std::ostream& out) {
  const RhoInterval interval = sweep_rho(beta, eps, chi, psi, mu, rho_hi, tol);
  out << json{{"beta", beta},
              {"eps", eps},
              {"chi", chi},
              {"psi", psi},
              {"mu", mu},
              {"rho_hi", rho_hi},
              {"feasible_interval_empty", interval.empty},
              {"rho_max", interval.rho_max}}
             .dump(2)
      << "\n";
  return kOk;
}

}  // namespace dses::cli
