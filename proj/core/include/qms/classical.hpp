#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qms/problem.hpp"
#include "qms/schedule.hpp"

namespace qms::classical {

using Distribution = std::vector<double>;

/// Largest state space evolved exactly; bigger problems fall back to sampling.
inline constexpr std::size_t kMaxExactStates = std::size_t{1} << 16;

/// Sparse row-stochastic matrix; distributions are row vectors (p' = p P).
class TransitionMatrix {
 public:
  TransitionMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                   std::vector<double> values);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const;
  std::span<const std::size_t> row_columns(std::size_t i) const;
  std::span<const double> row_values(std::size_t i) const;
  /// max_i |sum_j P[i][j] - 1|
  double max_row_defect() const;
  Distribution apply(std::span<const double> p) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// P[i][j] = (1/M) * delta(i, m) summed over moves m taking i to j; the
/// diagonal takes the rejected mass. Throws CapacityExceeded above
/// kMaxExactStates.
TransitionMatrix transition_matrix(const ProblemSpec& spec, const DeltaTable& delta);
TransitionMatrix transition_matrix(const ProblemSpec& spec, double beta);

Distribution evolve(const TransitionMatrix& P, std::span<const double> pi0, int t);

/// Half the L1 distance. Throws DimensionError on size mismatch.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// Fixed point of P by power iteration from the uniform distribution.
/// Throws NotErgodic for disconnected chains or when iteration does not settle.
Distribution stationary_distribution(const TransitionMatrix& P, double tolerance = 1e-12,
                                     int max_iterations = 1'000'000);

/// First t with max over basis starts of D(e_x P^t, pi) < epsilon.
int mixing_time(const TransitionMatrix& P, double epsilon, int max_steps = 1'000'000);

/// Algorithm 1 trajectory x_0..x_steps with Metropolis acceptance read from
/// the delta tables. Deterministic for a given seed.
std::vector<Label> mh_run(const ProblemSpec& spec, const DeltaSchedule& deltas,
                          const InitialState& init, std::uint64_t seed);
std::vector<Label> mh_run(const ProblemSpec& spec, const Schedule& schedule,
                          const InitialState& init, std::uint64_t seed);

enum class HitMode { at_step, ever_hit };
enum class EstimateMethod { exact, sampled };

std::string_view to_string(HitMode mode);
std::string_view to_string(EstimateMethod method);

/// Ground-state probability p(t) for t = 0..t_max.
struct SuccessCurve {
  std::vector<double> p;
  /// Binomial standard error per t (zero for exact curves).
  std::vector<double> std_error;
  EstimateMethod method = EstimateMethod::exact;
  HitMode hit_mode = HitMode::at_step;
  std::string warning;
};

SuccessCurve success_curve_exact(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                 const InitialState& init, int t_max,
                                 HitMode mode = HitMode::at_step);
SuccessCurve success_curve_sampled(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                   const InitialState& init, int t_max, int runs,
                                   std::uint64_t seed, HitMode mode = HitMode::at_step);
/// Exact when the state space permits, sampled otherwise (with a warning).
SuccessCurve success_curve(const ProblemSpec& spec, const DeltaSchedule& deltas,
                           const InitialState& init, int t_max, HitMode mode = HitMode::at_step,
                           int runs = 10'000, std::uint64_t seed = 0);

/// p(t) from the exact curve (or sampled fallback).
double classical_success_prob(const ProblemSpec& spec, const Schedule& schedule,
                              const InitialState& init, int t, HitMode mode = HitMode::at_step);

}  // namespace qms::classical
