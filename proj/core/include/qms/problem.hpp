#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qms {

using Label = std::uint64_t;

/// Smallest b with 2^b >= value (0 for value <= 1).
int ceil_log2(std::uint64_t value);

enum class MoveKind { sequential_circular, sequential_noncircular, swap };

std::string_view to_string(MoveKind kind);

/// How candidate states are generated from a state register code.
///
/// The code is split into `coordinate_count` fields of `coordinate_bits`
/// bits each, coordinate 0 in the most significant field. Sequential moves
/// are numbered coordinate-major then direction (+1 before -1); swap moves
/// are the unordered coordinate pairs in lexicographic order.
struct MoveModel {
  MoveKind kind = MoveKind::sequential_circular;
  int coordinate_count = 1;
  std::uint64_t coordinate_range = 2;
  int coordinate_bits = 1;
  /// Moves that would change this coordinate are invalid.
  std::optional<int> pinned_coordinate;

  std::size_t move_count() const;
  /// Move id that undoes `move_id` (direction flip for sequential moves).
  std::size_t inverse_move(std::size_t move_id) const;
  int code_bits() const { return coordinate_count * coordinate_bits; }
};

struct Move {
  std::size_t id = 0;
  std::uint64_t successor = 0;
  bool valid = false;
};

std::vector<std::uint64_t> decode_coordinates(std::uint64_t code, const MoveModel& model);
std::uint64_t encode_coordinates(std::span<const std::uint64_t> coordinates,
                                 const MoveModel& model);

/// Moves from `code` in canonical id order. Invalid moves keep successor == code.
/// Throws EncodingError when a coordinate is outside coordinate_range.
std::vector<Move> enumerate_moves(std::uint64_t code, const MoveModel& model);

/// What the quantum state register holds for each problem state.
enum class StateCoding {
  label,  // the label itself (structured problems such as N-Queens)
  index,  // the canonical state index (generic problem files)
};

/// Finite state space with costs and a move graph. Immutable after construction.
class ProblemSpec {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Labels need not be sorted; they are stored in ascending order.
  /// Throws DuplicateState, MalformedEntry or EncodingError on bad input.
  ProblemSpec(std::vector<Label> labels, std::vector<double> costs, int label_bits,
              MoveModel moves, StateCoding coding);

  std::size_t size() const { return labels_.size(); }
  Label label(std::size_t i) const { return labels_[i]; }
  double cost(std::size_t i) const { return costs_[i]; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const double> costs() const { return costs_; }
  int label_bits() const { return label_bits_; }
  std::string label_string(std::size_t i) const;

  const MoveModel& move_model() const { return moves_; }
  StateCoding coding() const { return coding_; }
  std::size_t move_count() const { return move_count_; }

  int register_bits() const { return register_bits_; }
  std::uint64_t code(std::size_t i) const { return codes_[i]; }
  std::size_t index_of_code(std::uint64_t code) const;
  std::size_t index_of_label(Label label) const;

  /// Successor state index; equals i for invalid moves.
  std::size_t successor(std::size_t i, std::size_t move) const {
    return successors_[i * move_count_ + move];
  }
  bool move_valid(std::size_t i, std::size_t move) const {
    return valid_[i * move_count_ + move] != 0;
  }

  double min_cost() const { return min_cost_; }
  bool is_ground(std::size_t i) const { return costs_[i] == min_cost_; }
  const std::vector<std::size_t>& ground_states() const { return ground_; }

  /// True when every valid move i->j has a valid move j->i.
  bool move_graph_symmetric() const;

 private:
  std::vector<Label> labels_;
  std::vector<double> costs_;
  int label_bits_;
  MoveModel moves_;
  StateCoding coding_;
  std::size_t move_count_ = 0;
  int register_bits_ = 0;
  std::vector<std::uint64_t> codes_;
  std::vector<std::size_t> successors_;
  std::vector<std::uint8_t> valid_;
  double min_cost_ = 0.0;
  std::vector<std::size_t> ground_;
};

/// Parses `{ "101": 65.53, "000": 1.0 }`. States are indexed in label order
/// and connected by circular +-1 moves over that order.
ProblemSpec parse_problem(std::string_view text);
ProblemSpec load_problem_file(const std::string& path);

/// Metropolis acceptance min(1, exp(-beta * (cost_j - cost_i))).
double acceptance(double cost_i, double cost_j, double beta);

/// Per-(state, move) acceptance probabilities at one inverse temperature.
/// Invalid moves hold 0. Downhill moves hold exactly 1.
class DeltaTable {
 public:
  DeltaTable(double beta, std::size_t states, std::size_t moves, std::vector<double> entries);

  double beta() const { return beta_; }
  std::size_t states() const { return states_; }
  std::size_t moves() const { return moves_; }
  double operator()(std::size_t state, std::size_t move) const {
    return entries_[state * moves_ + move];
  }
  std::span<const double> entries() const { return entries_; }
  /// FNV-1a over beta and the entry bit patterns.
  std::uint64_t checksum() const;

 private:
  double beta_;
  std::size_t states_;
  std::size_t moves_;
  std::vector<double> entries_;
};

DeltaTable build_delta_table(const ProblemSpec& spec, double beta);

/// Where a run starts: one chosen label, or uniformly over every state.
struct InitialState {
  enum class Kind { uniform, fixed };
  Kind kind = Kind::uniform;
  Label label = 0;

  static InitialState uniform() { return {}; }
  static InitialState fixed(Label l) { return {Kind::fixed, l}; }
};

/// State index for a fixed start; throws EncodingError for unknown labels.
std::size_t initial_index(const ProblemSpec& spec, const InitialState& init);

}  // namespace qms
