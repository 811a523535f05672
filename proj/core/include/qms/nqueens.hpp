#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qms/problem.hpp"

namespace qms::nqueens {

/// rows[c] is the row of the queen in column c.
struct Board {
  std::vector<int> rows;
};

struct QueenPin {
  int column = 0;
  int row = 0;
};

struct NQueensInstance {
  int n = 0;
  std::optional<QueenPin> fixed;
  ProblemSpec spec;
};

inline constexpr int kMinSize = 2;
inline constexpr int kMaxSize = 8;

/// Attack count weighted by a per-queen running counter: queen i's k-th
/// attacked queen j > i contributes k (row and diagonal indicators summed).
double heuristic(const Board& board);

int bits_per_queen(int n);
std::uint64_t encode(const Board& board);
Board decode(std::uint64_t code, int n);

/// Permutation boards with swap moves. With a pin, only boards holding the
/// pinned queen are states and swaps touching its column are invalid.
NQueensInstance generate_instance(int n, std::optional<QueenPin> fixed = std::nullopt);

/// Exhaustive count of permutation boards with zero heuristic.
std::uint64_t count_solutions(int n);

struct Descriptor {
  int n = 0;
  std::optional<QueenPin> fixed;
};

/// Parses `nqueens:<n>[:fixed=<col>,<row>]`; nullopt when the prefix is absent.
std::optional<Descriptor> parse_descriptor(std::string_view source);

}  // namespace qms::nqueens
