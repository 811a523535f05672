#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qms/problem.hpp"

namespace qms {

enum class ScheduleKind { constant, linear, geometric };

std::string_view to_string(ScheduleKind kind);

/// Inverse temperature per step t in [1, steps].
struct Schedule {
  double beta_start = 1.0;
  double beta_end = 1.0;
  ScheduleKind kind = ScheduleKind::constant;
  int steps = 1;

  /// Throws InvalidParameter on negative betas, steps < 1, or a geometric
  /// schedule with a zero endpoint.
  void validate() const;
  double beta(int t) const;
};

/// Delta tables for every step of a schedule; steps sharing a beta share a
/// table. Both engines read their acceptances from here.
class DeltaSchedule {
 public:
  DeltaSchedule(const ProblemSpec& spec, const Schedule& schedule);

  int steps() const { return static_cast<int>(step_table_.size()); }
  const DeltaTable& at_step(int t) const;
  std::size_t table_index(int t) const;
  std::size_t distinct_tables() const { return tables_.size(); }
  const DeltaTable& table(std::size_t k) const { return tables_[k]; }
  /// Combined checksum over the per-step table sequence.
  std::uint64_t checksum() const;

 private:
  std::vector<DeltaTable> tables_;
  std::vector<std::size_t> step_table_;
};

}  // namespace qms
