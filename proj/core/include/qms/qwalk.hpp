#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qms/problem.hpp"
#include "qms/schedule.hpp"

namespace qms::qwalk {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxBits = 26;
inline constexpr int kAncillaBits = 3;
inline constexpr int kDenseMaxBits = 12;

/// Qubit partition. Bit order of a global amplitude index, low to high:
/// coin | move value | move id | state | ancilla.
struct RegisterLayout {
  int state_bits = 0;
  int move_id_bits = 0;
  int move_value_bits = 1;
  int coin_bits = 1;
  int ancilla_bits = kAncillaBits;

  int total() const { return state_bits + move_id_bits + move_value_bits + coin_bits + ancilla_bits; }
  int coin_offset() const { return 0; }
  int move_value_offset() const { return coin_bits; }
  int move_id_offset() const { return coin_bits + move_value_bits; }
  int state_offset() const { return move_id_offset() + move_id_bits; }
  int ancilla_offset() const { return state_offset() + state_bits; }

  /// Move slots addressable by (move id, move value).
  std::size_t move_slots() const { return std::size_t{1} << (move_id_bits + move_value_bits); }
  std::size_t dimension() const { return std::size_t{1} << total(); }
  /// Bytes for 2^total complex<double> amplitudes.
  double memory_bytes() const;

  std::size_t index(std::uint64_t ancilla, std::uint64_t state, std::size_t slot,
                    unsigned coin) const {
    return (((static_cast<std::size_t>(ancilla) << state_bits | state) << (move_id_bits + 1) | slot)
            << 1) |
           coin;
  }
};

/// Register sizes for a problem without any capacity check. The move id
/// register indexes coordinates: max(1, ceil(log2(coordinate_count))) bits.
RegisterLayout compute_layout(const ProblemSpec& spec);
/// As compute_layout; throws CapacityExceeded above `max_bits` total.
RegisterLayout layout(const ProblemSpec& spec, int max_bits = kDefaultMaxBits);

enum class Ordering { lemieux, qubitization, alternative };
std::string_view to_string(Ordering ordering);

/// Amplitudes over the full register product space.
///
/// Every walk operator acts as the identity on the ancilla register, so each
/// ancilla slice evolves on its own. Slices that were never populated are
/// tracked and skipped. Likewise, a vector produced by initialize() only ever
/// holds amplitude on state codes of its problem (V and R act within a state
/// block, B and F map problem states to problem states), and the operators
/// visit only those blocks.
class StateVector {
 public:
  explicit StateVector(const RegisterLayout& layout);
  /// Throws DimensionError unless amplitudes.size() == 2^total.
  StateVector(const RegisterLayout& layout, std::vector<Amplitude> amplitudes);

  const RegisterLayout& layout() const { return layout_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

  std::size_t slice_size() const { return std::size_t{1} << (layout_.total() - layout_.ancilla_bits); }
  std::size_t slice_count() const { return std::size_t{1} << layout_.ancilla_bits; }
  bool slice_live(std::size_t a) const { return live_[a] != 0; }
  bool problem_states_only() const { return problem_states_only_; }
  std::span<const Amplitude> slice(std::size_t a) const {
    return std::span(amps_).subspan(a * slice_size(), slice_size());
  }

 private:
  friend class WalkOperators;
  friend StateVector initialize(const ProblemSpec&, const RegisterLayout&, const InitialState&);

  std::span<Amplitude> slice(std::size_t a) {
    return std::span(amps_).subspan(a * slice_size(), slice_size());
  }

  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
  std::vector<char> live_;
  bool problem_states_only_ = false;
};

/// Fixed: basis state |label>_S with every other register at 0. Uniform:
/// equal amplitude over all problem states in S.
StateVector initialize(const ProblemSpec& spec, const RegisterLayout& layout,
                       const InitialState& init);

/// Acceptance quantized to the ancilla grid: round(q * 2^3) / 2^3.
double quantize_acceptance(double q);

/// The four walk operators V, B, F, R for one problem, applied matrix-free.
///
/// V is the Householder reflection exchanging |0> and the uniform
/// superposition over the M move slots, so V = V^dagger. B rotates the coin
/// by arcsin(sqrt(q)) with q the quantized acceptance of (state, move).
/// F applies the move on coin=1 components and writes the inverse move into
/// the move registers; invalid moves and non-problem codes are left alone.
/// R negates everything outside move=0, coin=0.
class WalkOperators {
 public:
  WalkOperators(const ProblemSpec& spec, const RegisterLayout& layout);

  const RegisterLayout& layout() const { return layout_; }
  const ProblemSpec& spec() const { return *spec_; }

  /// Load coin angles from a delta table (throws DimensionError on mismatch).
  void set_delta(const DeltaTable& delta);

  void apply_V(StateVector& sv) const;
  void apply_V_dagger(StateVector& sv) const { apply_V(sv); }
  void apply_B(StateVector& sv) const { rotate_coin(sv, false); }
  void apply_B_dagger(StateVector& sv) const { rotate_coin(sv, true); }
  void apply_F(StateVector& sv) const;
  void apply_R(StateVector& sv) const;

  /// Sine of the coin angle for state code `code` and slot; 0 when inert.
  double coin_sin(std::uint64_t code, std::size_t slot) const;

 private:
  void rotate_coin(StateVector& sv, bool inverse) const;

  const ProblemSpec* spec_;
  RegisterLayout layout_;
  std::size_t moves_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  /// Per (state index, move): F partner as (code << slot_bits | slot), or self.
  std::vector<std::uint64_t> partner_;
  double householder_u_;
  double householder_scale_;
};

/// One application of the ordering's operator product (right to left):
/// lemieux R V' B' F B V, qubitization F V B R B' V', alternative V B R B' V' F.
void walk_step(StateVector& sv, const WalkOperators& ops, Ordering ordering);

/// Probability mass on minimum-cost states, marginalizing all other registers.
double ground_state_probability(const StateVector& sv, const ProblemSpec& spec);
/// Marginal probability of each problem state (in spec index order).
std::vector<double> state_distribution(const StateVector& sv, const ProblemSpec& spec);

/// Throws CapacityExceeded when the problem has more moves than the move
/// registers can address.
void check_move_capacity(const ProblemSpec& spec, const RegisterLayout& layout);

/// Walk t steps, rebuilding coin angles whenever the step's table changes.
StateVector run_walk(const ProblemSpec& spec, const DeltaSchedule& deltas, Ordering ordering,
                     const InitialState& init, int t, int max_bits = kDefaultMaxBits);
StateVector run_walk(const ProblemSpec& spec, const Schedule& schedule, Ordering ordering,
                     const InitialState& init, int t, int max_bits = kDefaultMaxBits);

/// p(t) for t = 0..t_max. Walk steps are deterministic, so the walk of length
/// t is a prefix of the walk of length t_max and one pass yields every p(t).
std::vector<double> success_curve(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                  Ordering ordering, const InitialState& init, int t_max,
                                  int max_bits = kDefaultMaxBits);

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<Amplitude> data;

  Amplitude& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  Amplitude operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

/// max |(U^dagger U - I)_{ij}|, exploiting column sparsity.
double unitarity_defect(const DenseMatrix& u);

/// The walk operator as a matrix, built by applying walk_step to every basis
/// vector. Throws CapacityExceeded above kDenseMaxBits and NumericFailure
/// when the result is not unitary to 1e-9.
DenseMatrix dense_unitary(const ProblemSpec& spec, const RegisterLayout& layout,
                          const DeltaTable& delta, Ordering ordering);

}  // namespace qms::qwalk
