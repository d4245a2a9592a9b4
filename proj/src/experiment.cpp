// SPDX-License-Identifier: Apache-2.0
#include "dses/experiment.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dses/errors.hpp"

namespace dses {
namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = j[i].get<double>();
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (j.empty()) return Eigen::MatrixXd();
  const Eigen::Index rows = Eigen::Index(j.size());
  const Eigen::Index cols = Eigen::Index(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[size_t(r)][size_t(c)].get<double>();
  return m;
}

json ic_to_json(const InitialCondition& ic) {
  if (ic.kind == InitialCondition::Kind::fixed)
    return json{{"kind", "fixed"}, {"value", vector_to_json(ic.value)}};
  return json{{"kind", "uniform"}, {"lo", ic.lo}, {"hi", ic.hi}};
}

InitialCondition ic_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fixed") return InitialCondition::fixed(vector_from_json(j.at("value")));
  if (kind == "uniform")
    return InitialCondition::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
  throw ConfigError("initial condition kind must be 'fixed' or 'uniform', got '" + kind + "'");
}

const Eigen::MatrixXd& paper_hessian() {
  static const Eigen::MatrixXd h = [] {
    Eigen::MatrixXd m(3, 3);
    m << 0.7, 0.1, 0.2,
         0.3, 0.4, 0.3,
         0.4, 0.0, 0.5;
    return m;
  }();
  return h;
}

ExperimentConfig base_1d_preset() {
  ExperimentConfig c;
  c.objective_id = "quad1d";
  c.x_star = Eigen::VectorXd::Constant(1, 25.0);
  c.params = AlgoParams{0.12, 0.75, 1e-7, DitherSpec{1.0, 121.0 / 4.0, 0.01}};
  c.ensemble.system = SystemKind::adaptive1d;
  c.ensemble.n_traj = 200000;
  c.ensemble.n_steps = 60;
  c.ensemble.seed = 1;
  c.ensemble.x0 = InitialCondition::fixed(-40.0);
  c.ensemble.y0 = InitialCondition::uniform(-5.0, 10.0);
  return c;
}

}  // namespace

Objective ExperimentConfig::build_objective() const {
  const PaperObjectiveId id = parse_objective_id(objective_id);
  return make_paper_objective(id, x_star, hessian);
}

void ExperimentConfig::validate() const {
  params.validate();
  const Objective obj = build_objective();
  ensemble.validate(obj.dim);
  if (paths < 0 || paths > ensemble.n_traj)
    throw ConfigError("paths must be in [0, n_traj]");
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig c = base_1d_preset();
  c.preset = name;
  if (name == "fig1" || name == "fig2") {
    return c;
  }
  if (name == "fig3" || name == "fig4") {
    c.paths = 5;
    return c;
  }
  if (name == "fig5") {
    c.objective_id = "x2cos";
    c.x_star = Eigen::VectorXd::Constant(1, 48.15);
    c.params.rho = 0.05;
    c.params.dither.chi = 0.09;
    c.ensemble.x0 = InitialCondition::fixed(40.0);
    c.ensemble.n_steps = 100;
    return c;
  }
  if (name == "fig6") {
    c.x_star = Eigen::VectorXd::Constant(1, 2.5e5);
    c.ensemble.x0 = InitialCondition::fixed(-4.0e5);
    return c;
  }
  if (name == "fig7") {
    // no step-size adaptation; x0 sits inside the (semi-global) stability
    // basin of the non-adaptive variant
    c.ensemble.system = SystemKind::nonadaptive1d;
    c.params.rho = 0.05;
    c.params.beta = 0.4;
    c.params.dither.chi = 0.81;
    c.ensemble.x0 = InitialCondition::fixed(20.0);
    c.ensemble.n_steps = 300;
    return c;
  }
  if (name == "fig8") {
    // first-order baseline, h_k = 1e-3 w_k and g_k = 9 w_k; rho/beta unused
    c.ensemble.system = SystemKind::firstorder;
    c.params.rho = 0.05;
    c.params.beta = 0.4;
    c.params.dither.chi = 1e-6;
    c.params.dither.psi = 81.0;
    c.ensemble.y0 = InitialCondition::fixed(0.0);
    c.ensemble.n_steps = 300;
    return c;
  }
  if (name == "fig9") {
    c.objective_id = "quadNd";
    c.x_star = Eigen::VectorXd(3);
    c.x_star << 5.2e5, 1.23e5, -3.2e5;
    c.hessian = paper_hessian();
    c.ensemble.system = SystemKind::multidim;
    c.params = AlgoParams{0.25, 0.93, 1e-7, DitherSpec{1.0, 0.2025, 0.01}};
    c.ensemble.n_traj = 100000;
    c.ensemble.n_steps = 5000;
    c.ensemble.x0 = InitialCondition::fixed(Eigen::VectorXd::Zero(3));
    c.ensemble.y0 = InitialCondition::fixed(Eigen::VectorXd::Zero(3));
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1..fig9)");
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

std::string to_json_string(const ExperimentConfig& c, int indent) {
  json j;
  j["version"] = c.version;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["objective"] = {{"id", c.objective_id}, {"x_star", vector_to_json(c.x_star)}};
  if (c.hessian.size() > 0) j["objective"]["hessian"] = matrix_to_json(c.hessian);
  j["system"] = to_string(c.ensemble.system);
  j["params"] = {{"rho", c.params.rho},       {"beta", c.params.beta},
                 {"eps", c.params.eps},       {"omega", c.params.dither.omega},
                 {"chi", c.params.dither.chi}, {"psi", c.params.dither.psi}};
  j["ensemble"] = {{"n_traj", c.ensemble.n_traj}, {"n_steps", c.ensemble.n_steps},
                   {"seed", c.ensemble.seed},     {"threads", c.ensemble.threads},
                   {"x0", ic_to_json(c.ensemble.x0)}, {"y0", ic_to_json(c.ensemble.y0)},
                   {"decay_gain", c.ensemble.decay_gain}};
  j["paths"] = c.paths;
  return j.dump(indent);
}

ExperimentConfig config_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    ExperimentConfig c;
    c.version = j.value("version", 1);
    if (c.version != 1) throw ConfigError("unsupported config version");
    c.preset = j.value("preset", std::string());
    const json& obj = j.at("objective");
    c.objective_id = obj.at("id").get<std::string>();
    c.x_star = vector_from_json(obj.at("x_star"));
    if (obj.contains("hessian")) c.hessian = matrix_from_json(obj.at("hessian"));
    c.ensemble.system = parse_system(j.at("system").get<std::string>());
    const json& p = j.at("params");
    c.params.rho = p.at("rho").get<double>();
    c.params.beta = p.at("beta").get<double>();
    c.params.eps = p.at("eps").get<double>();
    c.params.dither.omega = p.value("omega", 1.0);
    c.params.dither.chi = p.at("chi").get<double>();
    c.params.dither.psi = p.at("psi").get<double>();
    const json& e = j.at("ensemble");
    c.ensemble.n_traj = e.at("n_traj").get<std::int64_t>();
    c.ensemble.n_steps = e.at("n_steps").get<int>();
    c.ensemble.seed = e.at("seed").get<std::uint64_t>();
    c.ensemble.threads = e.value("threads", 0);
    c.ensemble.x0 = ic_from_json(e.at("x0"));
    c.ensemble.y0 = ic_from_json(e.at("y0"));
    c.ensemble.decay_gain = e.value("decay_gain", false);
    c.paths = j.value("paths", 0);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_string(buf.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_stats_csv(const std::string& path, const EnsembleStats& stats) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  const Eigen::Index dim = stats.mean_x.cols();
  out << "k";
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::string s = dim == 1 ? "" : std::to_string(j + 1);
    out << ",mean_x" << s << ",sigma_x" << s << ",mean_y" << s << ",sigma_y" << s;
  }
  out << "\n";
  for (Eigen::Index r = 0; r < stats.mean_x.rows(); ++r) {
    out << r;
    for (Eigen::Index j = 0; j < dim; ++j)
      out << ',' << format_double(stats.mean_x(r, j)) << ',' << format_double(stats.sigma_x(r, j))
          << ',' << format_double(stats.mean_y(r, j)) << ',' << format_double(stats.sigma_y(r, j));
    out << "\n";
  }
}

void write_paths_csv(const std::string& path, const std::vector<TrajectoryPath>& paths) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  const Eigen::Index dim = paths.empty() ? 1 : paths.front().x.cols();
  out << "k";
  for (size_t t = 0; t < paths.size(); ++t)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const std::string s = dim == 1 ? "" : "_" + std::to_string(j + 1);
      out << ",x" << t + 1 << s << ",y" << t + 1 << s;
    }
  out << "\n";
  const Eigen::Index rows = paths.empty() ? 0 : paths.front().x.rows();
  for (Eigen::Index r = 0; r < rows; ++r) {
    out << r;
    for (const auto& p : paths)
      for (Eigen::Index j = 0; j < dim; ++j)
        out << ',' << format_double(p.x(r, j)) << ',' << format_double(p.y(r, j));
    out << "\n";
  }
}

StatsCsv read_stats_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty CSV file: " + path);
  Eigen::Index cols = std::count(header.begin(), header.end(), ',');
  if (cols < 4 || cols % 4 != 0) throw ConfigError("unexpected CSV header: " + header);
  const Eigen::Index dim = cols / 4;
  std::vector<std::array<std::vector<double>, 4>> data(static_cast<size_t>(dim));
  StatsCsv out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    out.k.push_back(std::stod(cell));
    for (Eigen::Index j = 0; j < dim; ++j)
      for (int f = 0; f < 4; ++f) {
        if (!std::getline(ss, cell, ',')) throw ConfigError("short CSV row: " + line);
        data[size_t(j)][size_t(f)].push_back(std::stod(cell));
      }
  }
  const Eigen::Index rows = Eigen::Index(out.k.size());
  out.mean_x.resize(rows, dim);
  out.sigma_x.resize(rows, dim);
  out.mean_y.resize(rows, dim);
  out.sigma_y.resize(rows, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index r = 0; r < rows; ++r) {
      out.mean_x(r, j) = data[size_t(j)][0][size_t(r)];
      out.sigma_x(r, j) = data[size_t(j)][1][size_t(r)];
      out.mean_y(r, j) = data[size_t(j)][2][size_t(r)];
      out.sigma_y(r, j) = data[size_t(j)][3][size_t(r)];
    }
  return out;
}

}  // namespace dses
