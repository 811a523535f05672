#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qms/error.hpp"
#include "qms/metrics.hpp"
#include "qms/problem.hpp"
#include "qms/qwalk.hpp"
#include "qms/schedule.hpp"

namespace qms::cli {

enum class RunMode { solve, tts, distribution, compare, orderings };

std::string_view to_string(RunMode mode);

/// Every configurable knob. Keys in config files use these field names.
struct RunConfig {
  std::string problem;
  RunMode mode = RunMode::tts;
  int initial_step = 1;
  int final_step = 30;
  double beta_start = 1.0;
  double beta_end = 1.0;
  ScheduleKind schedule = ScheduleKind::constant;
  InitialState init = InitialState::uniform();
  qwalk::Ordering ordering = qwalk::Ordering::lemieux;
  double tts_delta = metrics::kDefaultDelta;
  std::uint64_t seed = 0;
  int max_bits = qwalk::kDefaultMaxBits;
  std::string out = "qms_report";

  /// Throws InvalidParameter when the combination is unusable.
  void validate() const;
  Schedule make_schedule() const;
};

/// Set one key; throws InvalidParameter for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` lines; `#` starts a comment. Settings are applied on
/// top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// `nqueens:<n>[:fixed=<col>,<row>]` or a path to a problem file.
ProblemSpec resolve_problem(const std::string& source);

struct Report {
  std::string csv;
  std::string json;
  /// One human-readable line.
  std::string summary;
};

/// Runs one configuration. Pure: nothing is written to disk.
Report run(const RunConfig& config);

/// Writes `<out>.csv` and `<out>.json`.
void write_report(const Report& report, const std::string& out);

struct ResourceEstimate {
  qwalk::RegisterLayout layout;
  int qubits = 0;
  double memory_bytes = 0.0;
};

ResourceEstimate estimate_resources(const std::string& source);

/// Every single-pin variant of an n-queens board, column-major, optionally
/// truncated to `limit` entries.
std::vector<std::string> fixed_queen_sources(int n, std::size_t limit = 0);

/// Runs compare on every source and fits the classical-vs-quantum min-TTS
/// scaling law. Instances without a finite min-TTS on both sides are listed
/// as skipped.
Report run_sweep(const RunConfig& base, const std::vector<std::string>& sources);

/// Process exit status for a library error: 1 validation, 2 capacity,
/// 3 numeric failure.
int exit_status(const Error& error);

}  // namespace qms::cli
