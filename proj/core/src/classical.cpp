#include "qms/classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "qms/error.hpp"

namespace qms::classical {

TransitionMatrix::TransitionMatrix(std::size_t n, std::vector<std::size_t> row_ptr,
                                   std::vector<std::size_t> cols, std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || cols_.size() != values_.size() ||
      row_ptr_.back() != cols_.size())
    throw Error(ErrorCode::DimensionError, "malformed sparse transition matrix");
}

double TransitionMatrix::at(std::size_t i, std::size_t j) const {
  auto c = row_columns(i);
  auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + static_cast<std::size_t>(it - c.begin())];
}

std::span<const std::size_t> TransitionMatrix::row_columns(std::size_t i) const {
  return std::span(cols_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
}

std::span<const double> TransitionMatrix::row_values(std::size_t i) const {
  return std::span(values_).subspan(row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
}

double TransitionMatrix::max_row_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (double v : row_values(i)) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

Distribution TransitionMatrix::apply(std::span<const double> p) const {
  if (p.size() != n_) throw Error(ErrorCode::DimensionError, "distribution size mismatch");
  Distribution out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double pi = p[i];
    if (pi == 0.0) continue;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[cols_[k]] += pi * values_[k];
  }
  return out;
}

TransitionMatrix transition_matrix(const ProblemSpec& spec, const DeltaTable& delta) {
  const std::size_t n = spec.size();
  if (n > kMaxExactStates)
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(n) + " states exceed the exact-evolution limit of " +
                    std::to_string(kMaxExactStates));
  if (delta.states() != n || delta.moves() != spec.move_count())
    throw Error(ErrorCode::DimensionError, "delta table does not match the problem");

  const std::size_t moves = spec.move_count();
  const double share = moves > 0 ? 1.0 / static_cast<double>(moves) : 0.0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> cols;
  std::vector<double> values;
  std::map<std::size_t, double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    double leaving = 0.0;
    for (std::size_t m = 0; m < moves; ++m) {
      const std::size_t j = spec.successor(i, m);
      if (!spec.move_valid(i, m) || j == i) continue;
      const double p = share * delta(i, m);
      if (p == 0.0) continue;
      row[j] += p;
      leaving += p;
    }
    row[i] = 1.0 - leaving;
    for (auto [j, p] : row) {
      cols.push_back(j);
      values.push_back(p);
    }
    row_ptr.push_back(cols.size());
  }
  return TransitionMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

TransitionMatrix transition_matrix(const ProblemSpec& spec, double beta) {
  return transition_matrix(spec, build_delta_table(spec, beta));
}

Distribution evolve(const TransitionMatrix& P, std::span<const double> pi0, int t) {
  if (pi0.size() != P.size()) throw Error(ErrorCode::DimensionError, "distribution size mismatch");
  Distribution p(pi0.begin(), pi0.end());
  for (int k = 0; k < t; ++k) p = P.apply(p);
  return p;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::DimensionError, "distribution size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

namespace {

bool connected(const TransitionMatrix& P) {
  const std::size_t n = P.size();
  // Undirected reachability over non-zero off-diagonal entries.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c = P.row_columns(i);
    auto v = P.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == i || v[k] == 0.0) continue;
      adj[i].push_back(c[k]);
      adj[c[k]].push_back(i);
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      ++count;
      stack.push_back(j);
    }
  }
  return count == n;
}

}  // namespace

Distribution stationary_distribution(const TransitionMatrix& P, double tolerance,
                                     int max_iterations) {
  const std::size_t n = P.size();
  if (n == 0) throw Error(ErrorCode::DimensionError, "empty chain");
  if (!connected(P)) throw Error(ErrorCode::NotErgodic, "move graph is disconnected");
  Distribution p(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < max_iterations; ++it) {
    Distribution next = P.apply(p);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - p[i]);
    p = std::move(next);
    if (change < tolerance) return p;
  }
  throw Error(ErrorCode::NotErgodic, "power iteration did not converge");
}

int mixing_time(const TransitionMatrix& P, double epsilon, int max_steps) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "epsilon must be positive");
  if (epsilon >= 1.0) return 0;
  const Distribution pi = stationary_distribution(P);
  const std::size_t n = P.size();

  std::vector<Distribution> rows(n, Distribution(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) rows[x][x] = 1.0;
  for (int t = 0; t <= max_steps; ++t) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, tv_distance(r, pi));
    if (worst < epsilon) return t;
    for (auto& r : rows) r = P.apply(r);
  }
  throw Error(ErrorCode::NotErgodic, "chain did not mix within the step bound");
}

namespace {

/// One proposal/acceptance round. Returns the next state index.
std::size_t mh_step(std::mt19937_64& rng, const ProblemSpec& spec, const DeltaTable& delta,
                    std::size_t i) {
  const std::size_t moves = spec.move_count();
  if (moves == 0) return i;
  std::uniform_int_distribution<std::size_t> pick(0, moves - 1);
  const std::size_t m = pick(rng);
  const double r = std::generate_canonical<double, 53>(rng);
  return r < delta(i, m) ? spec.successor(i, m) : i;
}

std::size_t draw_initial(std::mt19937_64& rng, const ProblemSpec& spec, const InitialState& init) {
  if (init.kind == InitialState::Kind::fixed) return initial_index(spec, init);
  std::uniform_int_distribution<std::size_t> pick(0, spec.size() - 1);
  return pick(rng);
}

}  // namespace

std::vector<Label> mh_run(const ProblemSpec& spec, const DeltaSchedule& deltas,
                          const InitialState& init, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t i = draw_initial(rng, spec, init);
  std::vector<Label> trajectory{spec.label(i)};
  trajectory.reserve(static_cast<std::size_t>(deltas.steps()) + 1);
  for (int t = 1; t <= deltas.steps(); ++t) {
    i = mh_step(rng, spec, deltas.at_step(t), i);
    trajectory.push_back(spec.label(i));
  }
  return trajectory;
}

std::vector<Label> mh_run(const ProblemSpec& spec, const Schedule& schedule,
                          const InitialState& init, std::uint64_t seed) {
  return mh_run(spec, DeltaSchedule(spec, schedule), init, seed);
}

std::string_view to_string(HitMode mode) {
  return mode == HitMode::at_step ? "at_step" : "ever_hit";
}

std::string_view to_string(EstimateMethod method) {
  return method == EstimateMethod::exact ? "exact" : "sampled";
}

namespace {

void check_horizon(const DeltaSchedule& deltas, int t_max) {
  if (t_max < 0 || t_max > deltas.steps())
    throw Error(ErrorCode::InvalidParameter, "requested step beyond the schedule");
}

}  // namespace

SuccessCurve success_curve_exact(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                 const InitialState& init, int t_max, HitMode mode) {
  check_horizon(deltas, t_max);
  const std::size_t n = spec.size();
  if (n > kMaxExactStates)
    throw Error(ErrorCode::CapacityExceeded, "state space too large for exact evolution");

  std::vector<TransitionMatrix> matrices;
  matrices.reserve(deltas.distinct_tables());
  for (std::size_t k = 0; k < deltas.distinct_tables(); ++k)
    matrices.push_back(transition_matrix(spec, deltas.table(k)));

  Distribution p(n, 0.0);
  if (init.kind == InitialState::Kind::fixed) {
    p[initial_index(spec, init)] = 1.0;
  } else {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
  }

  const auto ground_mass = [&](const Distribution& d) {
    double s = 0.0;
    for (std::size_t g : spec.ground_states()) s += d[g];
    return s;
  };

  SuccessCurve curve;
  curve.method = EstimateMethod::exact;
  curve.hit_mode = mode;
  curve.std_error.assign(static_cast<std::size_t>(t_max) + 1, 0.0);
  curve.p.reserve(static_cast<std::size_t>(t_max) + 1);

  if (mode == HitMode::at_step) {
    curve.p.push_back(ground_mass(p));
    for (int t = 1; t <= t_max; ++t) {
      p = matrices[deltas.table_index(t)].apply(p);
      curve.p.push_back(ground_mass(p));
    }
    return curve;
  }

  // Ever-hit: carry only the mass that has not touched a ground state yet.
  double hit = ground_mass(p);
  for (std::size_t g : spec.ground_states()) p[g] = 0.0;
  curve.p.push_back(hit);
  for (int t = 1; t <= t_max; ++t) {
    p = matrices[deltas.table_index(t)].apply(p);
    hit += ground_mass(p);
    for (std::size_t g : spec.ground_states()) p[g] = 0.0;
    curve.p.push_back(std::min(1.0, hit));
  }
  return curve;
}

SuccessCurve success_curve_sampled(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                   const InitialState& init, int t_max, int runs,
                                   std::uint64_t seed, HitMode mode) {
  check_horizon(deltas, t_max);
  if (runs < 1) throw Error(ErrorCode::InvalidParameter, "need at least one sampled run");
  const auto steps = static_cast<std::size_t>(t_max) + 1;
  std::vector<std::uint64_t> hits(steps, 0);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < runs; ++r) {
    std::size_t i = draw_initial(rng, spec, init);
    bool ever = spec.is_ground(i);
    if (ever) ++hits[0];
    for (int t = 1; t <= t_max; ++t) {
      i = mh_step(rng, spec, deltas.at_step(t), i);
      const bool now = spec.is_ground(i);
      ever = ever || now;
      if (mode == HitMode::at_step ? now : ever) ++hits[static_cast<std::size_t>(t)];
    }
  }
  SuccessCurve curve;
  curve.method = EstimateMethod::sampled;
  curve.hit_mode = mode;
  for (std::uint64_t h : hits) {
    const double p = static_cast<double>(h) / runs;
    curve.p.push_back(p);
    curve.std_error.push_back(std::sqrt(p * (1.0 - p) / runs));
  }
  return curve;
}

SuccessCurve success_curve(const ProblemSpec& spec, const DeltaSchedule& deltas,
                           const InitialState& init, int t_max, HitMode mode, int runs,
                           std::uint64_t seed) {
  if (spec.size() <= kMaxExactStates) return success_curve_exact(spec, deltas, init, t_max, mode);
  SuccessCurve curve = success_curve_sampled(spec, deltas, init, t_max, runs, seed, mode);
  curve.warning = std::to_string(spec.size()) +
                  " states exceed the exact-evolution limit; classical p(t) is sampled over " +
                  std::to_string(runs) + " runs";
  return curve;
}

double classical_success_prob(const ProblemSpec& spec, const Schedule& schedule,
                              const InitialState& init, int t, HitMode mode) {
  if (t < 0 || t > schedule.steps)
    throw Error(ErrorCode::InvalidParameter, "t must lie within the schedule");
  return success_curve(spec, DeltaSchedule(spec, schedule), init, t, mode).p.back();
}

}  // namespace qms::classical
