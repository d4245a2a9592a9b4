// SPDX-License-Identifier: Apache-2.0
#include "dses/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dses/errors.hpp"

namespace dses {
namespace {

constexpr std::int64_t kChunk = 1024;  // trajectories per accumulation chunk

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Per-chunk accumulator: one slot per (step, coordinate) for each tracked
// quantity, plus per-step alive counts. Merge order is fixed by chunk index,
// which is what makes the ensemble thread-count invariant.
struct Accumulator {
  int n_rows = 0, dim = 0;
  bool moments = false;
  std::vector<KahanSum> sx, sxx, sy, syy;          // x, x^2, y, y^2
  std::vector<KahanSum> sx2, sx4, sy2, sy4, sxy, sx2y2;  // centered moment block
  std::vector<std::int64_t> alive;
  std::int64_t diverged = 0;

  Accumulator(int rows, int d, bool m) : n_rows(rows), dim(d), moments(m) {
    const size_t n = size_t(rows) * d;
    sx.resize(n); sxx.resize(n); sy.resize(n); syy.resize(n);
    if (moments) {
      sx2.resize(n); sx4.resize(n); sy2.resize(n); sy4.resize(n);
      sxy.resize(n); sx2y2.resize(n);
    }
    alive.assign(rows, 0);
  }

  size_t at(int row, int col) const { return size_t(row) * dim + col; }

  void record(int row, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
              const Eigen::VectorXd& center) {
    ++alive[row];
    for (int j = 0; j < dim; ++j) {
      const size_t i = at(row, j);
      sx[i].add(x[j]); sxx[i].add(x[j] * x[j]);
      sy[i].add(y[j]); syy[i].add(y[j] * y[j]);
      if (moments) {
        const double xt = x[j] - center[j];
        const double x2 = xt * xt, y2 = y[j] * y[j], xy = xt * y[j];
        sx2[i].add(x2); sx4[i].add(x2 * x2);
        sy2[i].add(y2); sy4[i].add(y2 * y2);
        sxy[i].add(xy); sx2y2[i].add(xy * xy);
      }
    }
  }

  void merge(const Accumulator& o) {
    auto merge_vec = [](std::vector<KahanSum>& a, const std::vector<KahanSum>& b) {
      for (size_t i = 0; i < a.size(); ++i) {
        a[i].add(b[i].s);
        a[i].add(b[i].c);
      }
    };
    merge_vec(sx, o.sx); merge_vec(sxx, o.sxx); merge_vec(sy, o.sy); merge_vec(syy, o.syy);
    if (moments) {
      merge_vec(sx2, o.sx2); merge_vec(sx4, o.sx4); merge_vec(sy2, o.sy2);
      merge_vec(sy4, o.sy4); merge_vec(sxy, o.sxy); merge_vec(sx2y2, o.sx2y2);
    }
    for (int r = 0; r < n_rows; ++r) alive[r] += o.alive[r];
    diverged += o.diverged;
  }
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DSES_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

Eigen::VectorXd resolve_x0(const EnsembleConfig& config, int dim, RandomStream& stream) {
  if (config.x0.kind == InitialCondition::Kind::fixed) return config.x0.value;
  Eigen::VectorXd v(dim);
  for (int j = 0; j < dim; ++j) v[j] = stream.uniform(config.x0.lo, config.x0.hi);
  return v;
}

// Simulates trajectory `traj`, recording each step into `acc`. Returns false
// if the trajectory diverged before the final step.
template <typename Record>
bool run_trajectory(std::int64_t traj, const EnsembleConfig& config, const AlgoParams& params,
                    const Objective& obj, const Eigen::VectorXd& y0, Record&& record) {
  RandomStream stream(config.seed, std::uint64_t(traj));
  const int dim = obj.dim;
  Eigen::VectorXd x0 = resolve_x0(config, dim, stream);
  TrajectoryState s = init_state(x0, y0, obj, params.dither, stream);
  record(0, s.x, s.y);
  for (int k = 1; k <= config.n_steps; ++k) {
    try {
      switch (config.system) {
        case SystemKind::adaptive1d:
          s = step_adaptive_1d(std::move(s), params, obj, stream);
          break;
        case SystemKind::nonadaptive1d:
          s = step_nonadaptive_1d(std::move(s), params, obj, stream);
          break;
        case SystemKind::firstorder:
          s = step_first_order(std::move(s), params.dither, obj, stream,
                               FirstOrderOptions{config.decay_gain});
          break;
        case SystemKind::multidim:
          s = step_multidim(std::move(s), params, obj, stream);
          break;
      }
    } catch (const NumericalError&) {
      return false;
    }
    record(k, s.x, s.y);
  }
  return true;
}

}  // namespace

SystemKind parse_system(const std::string& id) {
  if (id == "adaptive1d") return SystemKind::adaptive1d;
  if (id == "nonadaptive1d") return SystemKind::nonadaptive1d;
  if (id == "firstorder") return SystemKind::firstorder;
  if (id == "multidim") return SystemKind::multidim;
  throw std::invalid_argument("unknown system id: " + id);
}

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::adaptive1d: return "adaptive1d";
    case SystemKind::nonadaptive1d: return "nonadaptive1d";
    case SystemKind::firstorder: return "firstorder";
    case SystemKind::multidim: return "multidim";
  }
  return "?";
}

InitialCondition InitialCondition::fixed(const Eigen::VectorXd& v) {
  InitialCondition ic;
  ic.kind = Kind::fixed;
  ic.value = v;
  return ic;
}

InitialCondition InitialCondition::fixed(double v) {
  return fixed(Eigen::VectorXd::Constant(1, v));
}

InitialCondition InitialCondition::uniform(double lo, double hi) {
  InitialCondition ic;
  ic.kind = Kind::uniform;
  ic.lo = lo;
  ic.hi = hi;
  return ic;
}

void EnsembleConfig::validate(int dim) const {
  if (n_traj < 1) throw std::invalid_argument("EnsembleConfig: n_traj must be >= 1");
  if (n_steps < 1) throw std::invalid_argument("EnsembleConfig: n_steps must be >= 1");
  auto check_ic = [&](const InitialCondition& ic, const char* name) {
    if (ic.kind == InitialCondition::Kind::fixed && ic.value.size() != dim)
      throw std::invalid_argument(std::string("EnsembleConfig: ") + name +
                                  " dimension does not match the objective");
    if (ic.kind == InitialCondition::Kind::uniform && !(ic.lo < ic.hi))
      throw std::invalid_argument(std::string("EnsembleConfig: ") + name +
                                  " uniform bounds must satisfy lo < hi");
  };
  check_ic(x0, "x0");
  check_ic(y0, "y0");
  if ((system == SystemKind::multidim) != (dim > 1) && dim > 1)
    throw std::invalid_argument("EnsembleConfig: multidimensional objectives need system=multidim");
  if (track_moments && dim != 1)
    throw std::invalid_argument("EnsembleConfig: moment tracking is 1-D only");
}

Eigen::VectorXd resolve_y0(const EnsembleConfig& config, int dim) {
  if (config.y0.kind == InitialCondition::Kind::fixed) return config.y0.value;
  // drawn once from the master stream, shared by all trajectories
  RandomStream master = RandomStream::master(config.seed);
  Eigen::VectorXd v(dim);
  for (int j = 0; j < dim; ++j) v[j] = master.uniform(config.y0.lo, config.y0.hi);
  return v;
}

EnsembleStats run_ensemble(const EnsembleConfig& config, const AlgoParams& params,
                           const Objective& obj) {
  params.validate();
  config.validate(obj.dim);
  const int dim = obj.dim;
  const int rows = config.n_steps + 1;
  Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);
  if (obj.minimizer) center = *obj.minimizer;

  const Eigen::VectorXd y0 = resolve_y0(config, dim);
  const std::int64_t n_chunks = (config.n_traj + kChunk - 1) / kChunk;
  const int n_threads = std::min<std::int64_t>(resolve_threads(config.threads), n_chunks);

  Accumulator total(rows, dim, config.track_moments);
  std::atomic<std::int64_t> next_chunk{0};
  std::mutex merge_mutex;
  std::map<std::int64_t, Accumulator> pending;
  std::int64_t merged = 0;

  auto worker = [&]() {
    for (;;) {
      const std::int64_t chunk = next_chunk.fetch_add(1);
      if (chunk >= n_chunks) return;
      const std::int64_t lo = chunk * kChunk;
      const std::int64_t hi = std::min(lo + kChunk, config.n_traj);
      Accumulator acc(rows, dim, config.track_moments);
      for (std::int64_t t = lo; t < hi; ++t) {
        const bool ok = run_trajectory(
            t, config, params, obj, y0,
            [&](int k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
              acc.record(k, x, y, center);
            });
        if (!ok) ++acc.diverged;
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      pending.emplace(chunk, std::move(acc));
      while (!pending.empty() && pending.begin()->first == merged) {
        total.merge(pending.begin()->second);
        pending.erase(pending.begin());
        ++merged;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (total.alive[rows - 1] == 0)
    throw AllDivergedError("run_ensemble: every trajectory diverged before the final step");

  EnsembleStats stats;
  auto alloc = [&](Eigen::MatrixXd& m) { m.setZero(rows, dim); };
  alloc(stats.mean_x); alloc(stats.var_x); alloc(stats.sigma_x);
  alloc(stats.mean_y); alloc(stats.var_y); alloc(stats.sigma_y);
  stats.alive = total.alive;
  stats.n_diverged = total.diverged;
  stats.has_moments = config.track_moments;
  if (config.track_moments) {
    alloc(stats.m_x2); alloc(stats.m_y2); alloc(stats.m_xy);
    alloc(stats.se_x2); alloc(stats.se_y2); alloc(stats.se_xy);
  }

  auto mean_var = [](const KahanSum& s, const KahanSum& ss, std::int64_t n, double& mean,
                     double& var) {
    mean = s.value() / double(n);
    var = n > 1 ? std::max(0.0, (ss.value() - double(n) * mean * mean) / double(n - 1)) : 0.0;
  };
  for (int r = 0; r < rows; ++r) {
    const std::int64_t n = total.alive[r];
    for (int j = 0; j < dim; ++j) {
      const size_t i = total.at(r, j);
      double m, v;
      mean_var(total.sx[i], total.sxx[i], n, m, v);
      stats.mean_x(r, j) = m; stats.var_x(r, j) = v; stats.sigma_x(r, j) = std::sqrt(v);
      mean_var(total.sy[i], total.syy[i], n, m, v);
      stats.mean_y(r, j) = m; stats.var_y(r, j) = v; stats.sigma_y(r, j) = std::sqrt(v);
      if (config.track_moments) {
        auto mom = [&](const KahanSum& s, const KahanSum& ss, double& mean, double& se) {
          double var;
          mean_var(s, ss, n, mean, var);
          se = n > 1 ? std::sqrt(var / double(n)) : 0.0;
        };
        mom(total.sx2[i], total.sx4[i], stats.m_x2(r, j), stats.se_x2(r, j));
        mom(total.sy2[i], total.sy4[i], stats.m_y2(r, j), stats.se_y2(r, j));
        mom(total.sxy[i], total.sx2y2[i], stats.m_xy(r, j), stats.se_xy(r, j));
      }
    }
  }
  return stats;
}

std::vector<TrajectoryPath> sample_paths(const EnsembleConfig& config, const AlgoParams& params,
                                         const Objective& obj, int count) {
  params.validate();
  config.validate(obj.dim);
  if (count < 0 || count > config.n_traj)
    throw std::invalid_argument("sample_paths: count must be in [0, n_traj]");
  const int rows = config.n_steps + 1;
  const Eigen::VectorXd y0 = resolve_y0(config, obj.dim);
  std::vector<TrajectoryPath> paths;
  paths.reserve(count);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int t = 0; t < count; ++t) {
    TrajectoryPath path;
    path.x.setConstant(rows, obj.dim, nan);
    path.y.setConstant(rows, obj.dim, nan);
    const bool ok = run_trajectory(
        t, config, params, obj, y0,
        [&](int k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
          path.x.row(k) = x.transpose();
          path.y.row(k) = y.transpose();
        });
    path.diverged = !ok;
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace dses
