#include "qms/schedule.hpp"

#include <cmath>
#include <string>

#include "qms/error.hpp"

namespace qms {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::geometric: return "geometric";
  }
  return "unknown";
}

void Schedule::validate() const {
  if (steps < 1) throw Error(ErrorCode::InvalidParameter, "schedule needs at least one step");
  if (!(beta_start >= 0.0) || !(beta_end >= 0.0) || !std::isfinite(beta_start) ||
      !std::isfinite(beta_end))
    throw Error(ErrorCode::InvalidParameter, "beta must be finite and non-negative");
  if (kind == ScheduleKind::geometric && (beta_start == 0.0 || beta_end == 0.0))
    throw Error(ErrorCode::InvalidParameter, "geometric schedule needs positive endpoints");
}

double Schedule::beta(int t) const {
  if (t < 1 || t > steps)
    throw Error(ErrorCode::InvalidParameter,
                "step " + std::to_string(t) + " outside schedule [1, " + std::to_string(steps) + "]");
  if (kind == ScheduleKind::constant || steps == 1) return beta_start;
  const double frac = static_cast<double>(t - 1) / static_cast<double>(steps - 1);
  if (kind == ScheduleKind::linear) return beta_start + (beta_end - beta_start) * frac;
  return beta_start * std::pow(beta_end / beta_start, frac);
}

DeltaSchedule::DeltaSchedule(const ProblemSpec& spec, const Schedule& schedule) {
  schedule.validate();
  step_table_.reserve(static_cast<std::size_t>(schedule.steps));
  for (int t = 1; t <= schedule.steps; ++t) {
    const double b = schedule.beta(t);
    if (tables_.empty() || tables_.back().beta() != b) tables_.push_back(build_delta_table(spec, b));
    step_table_.push_back(tables_.size() - 1);
  }
}

std::size_t DeltaSchedule::table_index(int t) const {
  if (t < 1 || t > steps())
    throw Error(ErrorCode::InvalidParameter, "step " + std::to_string(t) + " outside schedule");
  return step_table_[static_cast<std::size_t>(t - 1)];
}

const DeltaTable& DeltaSchedule::at_step(int t) const { return tables_[table_index(t)]; }

std::uint64_t DeltaSchedule::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t k : step_table_) {
    h ^= tables_[k].checksum();
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace qms
