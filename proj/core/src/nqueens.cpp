#include "qms/nqueens.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <string>

#include "qms/error.hpp"

namespace qms::nqueens {

double heuristic(const Board& board) {
  const auto& r = board.rows;
  const std::size_t n = r.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    int gamma = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const int same_row = r[i] == r[j] ? 1 : 0;
      const int same_diag = std::abs(r[i] - r[j]) == static_cast<int>(j - i) ? 1 : 0;
      const int hits = same_row + same_diag;
      if (hits == 0) continue;
      ++gamma;
      total += hits * gamma;
    }
  }
  return total;
}

int bits_per_queen(int n) { return std::max(1, ceil_log2(static_cast<std::uint64_t>(n))); }

std::uint64_t encode(const Board& board) {
  const int bits = bits_per_queen(static_cast<int>(board.rows.size()));
  std::uint64_t code = 0;
  for (int row : board.rows) code = (code << bits) | static_cast<std::uint64_t>(row);
  return code;
}

Board decode(std::uint64_t code, int n) {
  const int bits = bits_per_queen(n);
  Board b{std::vector<int>(static_cast<std::size_t>(n))};
  for (int c = n - 1; c >= 0; --c) {
    b.rows[static_cast<std::size_t>(c)] = static_cast<int>(code & ((1ULL << bits) - 1));
    code >>= bits;
  }
  return b;
}

NQueensInstance generate_instance(int n, std::optional<QueenPin> fixed) {
  if (n < kMinSize || n > kMaxSize)
    throw Error(ErrorCode::InvalidParameter,
                "board size must be in [" + std::to_string(kMinSize) + ", " +
                    std::to_string(kMaxSize) + "]");
  if (fixed && (fixed->column < 0 || fixed->column >= n || fixed->row < 0 || fixed->row >= n))
    throw Error(ErrorCode::InvalidParameter, "pinned queen lies outside the board");

  std::vector<Label> labels;
  std::vector<double> costs;
  Board board{std::vector<int>(static_cast<std::size_t>(n))};
  std::iota(board.rows.begin(), board.rows.end(), 0);
  do {
    if (fixed && board.rows[static_cast<std::size_t>(fixed->column)] != fixed->row) continue;
    labels.push_back(encode(board));
    costs.push_back(heuristic(board));
  } while (std::next_permutation(board.rows.begin(), board.rows.end()));

  MoveModel moves;
  moves.kind = MoveKind::swap;
  moves.coordinate_count = n;
  moves.coordinate_range = static_cast<std::uint64_t>(n);
  moves.coordinate_bits = bits_per_queen(n);
  if (fixed) moves.pinned_coordinate = fixed->column;

  ProblemSpec spec(std::move(labels), std::move(costs), n * moves.coordinate_bits, moves,
                   StateCoding::label);
  return NQueensInstance{n, fixed, std::move(spec)};
}

std::uint64_t count_solutions(int n) {
  if (n < kMinSize || n > kMaxSize)
    throw Error(ErrorCode::InvalidParameter, "board size out of range");
  Board board{std::vector<int>(static_cast<std::size_t>(n))};
  std::iota(board.rows.begin(), board.rows.end(), 0);
  std::uint64_t count = 0;
  do {
    if (heuristic(board) == 0.0) ++count;
  } while (std::next_permutation(board.rows.begin(), board.rows.end()));
  return count;
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidParameter,
                "bad " + std::string(what) + " '" + std::string(text) + "' in nqueens descriptor");
  return value;
}

}  // namespace

std::optional<Descriptor> parse_descriptor(std::string_view source) {
  constexpr std::string_view prefix = "nqueens:";
  if (!source.starts_with(prefix)) return std::nullopt;
  source.remove_prefix(prefix.size());

  Descriptor d;
  const auto colon = source.find(':');
  d.n = parse_int(source.substr(0, colon), "board size");
  if (colon != std::string_view::npos) {
    std::string_view pin = source.substr(colon + 1);
    constexpr std::string_view key = "fixed=";
    if (!pin.starts_with(key))
      throw Error(ErrorCode::InvalidParameter, "expected fixed=<col>,<row> in nqueens descriptor");
    pin.remove_prefix(key.size());
    const auto comma = pin.find(',');
    if (comma == std::string_view::npos)
      throw Error(ErrorCode::InvalidParameter, "expected fixed=<col>,<row> in nqueens descriptor");
    QueenPin p;
    p.column = parse_int(pin.substr(0, comma), "pin column");
    p.row = parse_int(pin.substr(comma + 1), "pin row");
    d.fixed = p;
  }
  return d;
}

}  // namespace qms::nqueens
