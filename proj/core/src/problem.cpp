#include "qms/problem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qms/error.hpp"

namespace qms {

int ceil_log2(std::uint64_t value) {
  if (value <= 1) return 0;
  return 64 - std::countl_zero(value - 1);
}

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::sequential_circular: return "sequential_circular";
    case MoveKind::sequential_noncircular: return "sequential_noncircular";
    case MoveKind::swap: return "swap";
  }
  return "unknown";
}

std::size_t MoveModel::move_count() const {
  const auto n = static_cast<std::size_t>(coordinate_count);
  if (kind == MoveKind::swap) return n * (n - (n > 0 ? 1 : 0)) / 2;
  return 2 * n;
}

std::size_t MoveModel::inverse_move(std::size_t move_id) const {
  return kind == MoveKind::swap ? move_id : (move_id ^ 1U);
}

std::vector<std::uint64_t> decode_coordinates(std::uint64_t code, const MoveModel& model) {
  std::vector<std::uint64_t> coords(static_cast<std::size_t>(model.coordinate_count));
  const std::uint64_t mask =
      model.coordinate_bits >= 64 ? ~0ULL : ((1ULL << model.coordinate_bits) - 1);
  for (int c = model.coordinate_count - 1; c >= 0; --c) {
    coords[static_cast<std::size_t>(c)] = code & mask;
    code >>= model.coordinate_bits;
  }
  return coords;
}

std::uint64_t encode_coordinates(std::span<const std::uint64_t> coordinates,
                                 const MoveModel& model) {
  std::uint64_t code = 0;
  for (std::uint64_t v : coordinates) code = (code << model.coordinate_bits) | v;
  return code;
}

std::vector<Move> enumerate_moves(std::uint64_t code, const MoveModel& model) {
  if (model.coordinate_bits < 0 || model.code_bits() > 63)
    throw Error(ErrorCode::EncodingError, "state code wider than 63 bits");
  auto coords = decode_coordinates(code, model);
  for (std::uint64_t v : coords) {
    if (v >= model.coordinate_range)
      throw Error(ErrorCode::EncodingError,
                  "coordinate " + std::to_string(v) + " outside range " +
                      std::to_string(model.coordinate_range));
  }
  const auto pinned = [&](int c) { return model.pinned_coordinate && *model.pinned_coordinate == c; };

  std::vector<Move> moves;
  moves.reserve(model.move_count());
  if (model.kind == MoveKind::swap) {
    for (int a = 0; a < model.coordinate_count; ++a) {
      for (int b = a + 1; b < model.coordinate_count; ++b) {
        Move m{moves.size(), code, false};
        if (!pinned(a) && !pinned(b)) {
          auto next = coords;
          std::swap(next[static_cast<std::size_t>(a)], next[static_cast<std::size_t>(b)]);
          m.successor = encode_coordinates(next, model);
          m.valid = true;
        }
        moves.push_back(m);
      }
    }
    return moves;
  }

  const std::uint64_t range = model.coordinate_range;
  for (int c = 0; c < model.coordinate_count; ++c) {
    const std::uint64_t v = coords[static_cast<std::size_t>(c)];
    for (int dir = 0; dir < 2; ++dir) {
      Move m{moves.size(), code, false};
      if (!pinned(c)) {
        std::optional<std::uint64_t> nv;
        if (model.kind == MoveKind::sequential_circular) {
          nv = dir == 0 ? (v + 1) % range : (v + range - 1) % range;
        } else if (dir == 0 && v + 1 < range) {
          nv = v + 1;
        } else if (dir == 1 && v > 0) {
          nv = v - 1;
        }
        if (nv) {
          auto next = coords;
          next[static_cast<std::size_t>(c)] = *nv;
          m.successor = encode_coordinates(next, model);
          m.valid = true;
        }
      }
      moves.push_back(m);
    }
  }
  return moves;
}

ProblemSpec::ProblemSpec(std::vector<Label> labels, std::vector<double> costs, int label_bits,
                         MoveModel moves, StateCoding coding)
    : label_bits_(label_bits), moves_(std::move(moves)), coding_(coding) {
  if (labels.empty()) throw Error(ErrorCode::MalformedEntry, "empty state set");
  if (labels.size() != costs.size())
    throw Error(ErrorCode::MalformedEntry, "every state needs exactly one cost");
  if (label_bits < 1 || label_bits > 63)
    throw Error(ErrorCode::EncodingError, "label width must be in [1, 63] bits");
  if (labels.size() > (1ULL << 32))
    throw Error(ErrorCode::CapacityExceeded, "too many states");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
  labels_.reserve(labels.size());
  costs_.reserve(labels.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Label l = labels[order[k]];
    if (k > 0 && l == labels_.back())
      throw Error(ErrorCode::DuplicateState, "label " + std::to_string(l) + " appears twice");
    if (l >> label_bits)
      throw Error(ErrorCode::EncodingError, "label wider than declared bit width");
    const double c = costs[order[k]];
    if (!std::isfinite(c)) throw Error(ErrorCode::MalformedEntry, "cost must be finite");
    labels_.push_back(l);
    costs_.push_back(c);
  }

  if (coding_ == StateCoding::label) {
    register_bits_ = label_bits_;
    codes_ = labels_;
  } else {
    register_bits_ = std::max(1, ceil_log2(labels_.size()));
    codes_.resize(labels_.size());
    std::iota(codes_.begin(), codes_.end(), std::uint64_t{0});
  }
  if (moves_.code_bits() != register_bits_)
    throw Error(ErrorCode::EncodingError, "move model does not match the state register width");

  move_count_ = moves_.move_count();
  successors_.resize(size() * move_count_);
  valid_.resize(size() * move_count_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const Move& m : enumerate_moves(codes_[i], moves_)) {
      std::size_t j = m.valid ? index_of_code(m.successor) : npos;
      const std::size_t slot = i * move_count_ + m.id;
      valid_[slot] = j != npos;
      successors_[slot] = j != npos ? j : i;
    }
  }

  min_cost_ = *std::min_element(costs_.begin(), costs_.end());
  for (std::size_t i = 0; i < size(); ++i)
    if (costs_[i] == min_cost_) ground_.push_back(i);
}

std::string ProblemSpec::label_string(std::size_t i) const {
  std::string s(static_cast<std::size_t>(label_bits_), '0');
  for (int b = 0; b < label_bits_; ++b)
    if ((labels_[i] >> b) & 1U) s[static_cast<std::size_t>(label_bits_ - 1 - b)] = '1';
  return s;
}

std::size_t ProblemSpec::index_of_code(std::uint64_t code) const {
  if (coding_ == StateCoding::index) return code < size() ? code : npos;
  return index_of_label(code);
}

std::size_t ProblemSpec::index_of_label(Label label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return npos;
  return static_cast<std::size_t>(it - labels_.begin());
}

bool ProblemSpec::move_graph_symmetric() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t m = 0; m < move_count_; ++m) {
      if (!move_valid(i, m)) continue;
      const std::size_t j = successor(i, m);
      bool back = false;
      for (std::size_t r = 0; r < move_count_ && !back; ++r)
        back = move_valid(j, r) && successor(j, r) == i;
      if (!back) return false;
    }
  }
  return true;
}

ProblemSpec parse_problem(std::string_view text) {
  using nlohmann::json;
  std::set<std::string> seen;
  std::string duplicate;
  json::parser_callback_t check_keys = [&](int depth, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::key && depth == 1) {
      const auto key = parsed.get<std::string>();
      if (!seen.insert(key).second && duplicate.empty()) duplicate = key;
    }
    return true;
  };

  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), check_keys);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedEntry, std::string("problem file is not valid: ") + e.what());
  }
  if (!duplicate.empty()) throw Error(ErrorCode::DuplicateState, "label \"" + duplicate + "\" appears twice");
  if (!doc.is_object()) throw Error(ErrorCode::MalformedEntry, "problem file must be one object");
  if (doc.empty()) throw Error(ErrorCode::MalformedEntry, "empty state set");

  std::vector<Label> labels;
  std::vector<double> costs;
  std::size_t width = 0;
  for (const auto& [key, value] : doc.items()) {
    if (key.empty() || key.size() > 63 || key.find_first_not_of("01") != std::string::npos)
      throw Error(ErrorCode::MalformedEntry, "label \"" + key + "\" is not a binary string");
    if (width == 0) width = key.size();
    if (key.size() != width)
      throw Error(ErrorCode::MalformedEntry, "labels must share one bit length");
    if (!value.is_number())
      throw Error(ErrorCode::MalformedEntry, "label \"" + key + "\" has no numeric cost");
    labels.push_back(std::stoull(key, nullptr, 2));
    costs.push_back(value.get<double>());
  }

  const std::size_t n = labels.size();
  MoveModel moves;
  moves.kind = MoveKind::sequential_circular;
  moves.coordinate_count = 1;
  moves.coordinate_range = n;
  moves.coordinate_bits = std::max(1, ceil_log2(n));
  return ProblemSpec(std::move(labels), std::move(costs), static_cast<int>(width), moves,
                     StateCoding::index);
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedEntry, "cannot open problem file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

double acceptance(double cost_i, double cost_j, double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidParameter, "beta must be non-negative");
  if (cost_j < cost_i) return 1.0;
  return std::min(1.0, std::exp(-beta * (cost_j - cost_i)));
}

DeltaTable::DeltaTable(double beta, std::size_t states, std::size_t moves,
                       std::vector<double> entries)
    : beta_(beta), states_(states), moves_(moves), entries_(std::move(entries)) {
  if (entries_.size() != states_ * moves_)
    throw Error(ErrorCode::DimensionError, "delta table size mismatch");
}

std::uint64_t DeltaTable::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](std::uint64_t word) {
    for (int k = 0; k < 8; ++k) {
      h ^= (word >> (8 * k)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  };
  mix(std::bit_cast<std::uint64_t>(beta_));
  mix(states_);
  mix(moves_);
  for (double e : entries_) mix(std::bit_cast<std::uint64_t>(e));
  return h;
}

DeltaTable build_delta_table(const ProblemSpec& spec, double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidParameter, "beta must be non-negative");
  const std::size_t moves = spec.move_count();
  std::vector<double> entries(spec.size() * moves, 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t m = 0; m < moves; ++m) {
      if (!spec.move_valid(i, m)) continue;
      entries[i * moves + m] = acceptance(spec.cost(i), spec.cost(spec.successor(i, m)), beta);
    }
  }
  return DeltaTable(beta, spec.size(), moves, std::move(entries));
}

std::size_t initial_index(const ProblemSpec& spec, const InitialState& init) {
  const std::size_t i = spec.index_of_label(init.label);
  if (i == ProblemSpec::npos)
    throw Error(ErrorCode::EncodingError,
                "initial label " + std::to_string(init.label) + " is not a problem state");
  return i;
}

}  // namespace qms
