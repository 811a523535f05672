#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "qms/nqueens.hpp"
#include "qms/problem.hpp"
#include "qms/qwalk.hpp"

namespace qms_test {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex, Eigen::ColMajor, std::ptrdiff_t>;
using Vec = Eigen::VectorXcd;

inline std::string binary(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int b = 0; b < width; ++b)
    if ((v >> b) & 1U) s[static_cast<std::size_t>(width - 1 - b)] = '1';
  return s;
}

/// Problem file text with `states` distinct random labels of `width` bits and
/// costs drawn from a small integer grid so ties occur.
inline std::string random_problem_text(std::mt19937_64& rng, std::size_t states, int width) {
  std::set<std::uint64_t> labels;
  std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << width) - 1);
  while (labels.size() < states) labels.insert(pick(rng));
  std::uniform_int_distribution<int> cost(0, 6);
  std::string text = "{";
  for (auto l : labels) {
    if (text.size() > 1) text += ", ";
    text += "\"" + binary(l, width) + "\": " + std::to_string(cost(rng) * 0.5);
  }
  return text + "}";
}

inline qms::ProblemSpec random_problem(std::mt19937_64& rng, std::size_t states) {
  int width = std::max(1, qms::ceil_log2(states)) + 1;
  return qms::parse_problem(random_problem_text(rng, states, width));
}

inline qms::ProblemSpec two_state(double e0, double e1) {
  return qms::parse_problem("{\"0\": " + std::to_string(e0) + ", \"1\": " + std::to_string(e1) + "}");
}

/// Labels {0, 1}, one coordinate, non-circular: each state has one valid
/// move out of two, so at beta = 0 every transition probability is 1/2.
inline qms::ProblemSpec lazy_two_state(double e0, double e1) {
  qms::MoveModel m;
  m.kind = qms::MoveKind::sequential_noncircular;
  m.coordinate_count = 1;
  m.coordinate_range = 2;
  m.coordinate_bits = 1;
  return qms::ProblemSpec({0, 1}, {e0, e1}, 1, m, qms::StateCoding::index);
}

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (auto& x : p) x = e(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

inline std::vector<Complex> random_amplitudes(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(n);
  double s = 0.0;
  for (auto& z : v) {
    z = {g(rng), g(rng)};
    s += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(s);
  return v;
}

inline double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline std::vector<Complex> amplitudes_of(const qms::qwalk::StateVector& sv) {
  return {sv.amplitudes().begin(), sv.amplitudes().end()};
}

// N-Queens pair-scan oracle.

inline bool attacks(const std::vector<int>& rows, std::size_t i, std::size_t j) {
  const int dr = rows[i] - rows[j];
  const int dc = static_cast<int>(j) - static_cast<int>(i);
  return dr == 0 || dr == dc || dr == -dc;
}

inline bool conflict_free(const std::vector<int>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (attacks(rows, i, j)) return false;
  return true;
}

/// Weighted attack sum written from the definition: for queen i, the k-th
/// attacked queen to its right contributes k times its indicator sum.
inline double weighted_attacks(const std::vector<int>& rows) {
  double h = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    int attacked = 0;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const int same_row = rows[i] == rows[j] ? 1 : 0;
      const int dist = static_cast<int>(j - i);
      const int same_diag = std::abs(rows[i] - rows[j]) == dist ? 1 : 0;
      if (same_row + same_diag == 0) continue;
      ++attacked;
      h += attacked * (same_row + same_diag);
    }
  }
  return h;
}

// Walk operators as sparse matrices, assembled from the register definitions
// without going through qwalk::WalkOperators.

class WalkOracle {
 public:
  WalkOracle(const qms::ProblemSpec& spec, const qms::qwalk::RegisterLayout& layout,
             const qms::DeltaTable& delta)
      : spec_(spec), l_(layout), delta_(delta) {
    slot_bits_ = l_.move_id_bits + l_.move_value_bits;
    slots_ = std::size_t{1} << slot_bits_;
    states_ = std::size_t{1} << l_.state_bits;
    anc_ = std::size_t{1} << l_.ancilla_bits;
    dim_ = std::size_t{1} << l_.total();
    moves_ = spec.move_count();
    build();
  }

  std::size_t dim() const { return dim_; }
  const SparseOp& V() const { return V_; }
  const SparseOp& B() const { return B_; }
  const SparseOp& F() const { return F_; }
  const SparseOp& R() const { return R_; }

  SparseOp product(qms::qwalk::Ordering o) const {
    SparseOp Vd = V_.adjoint();
    SparseOp Bd = B_.adjoint();
    switch (o) {
      case qms::qwalk::Ordering::lemieux: return SparseOp(R_ * Vd * Bd * F_ * B_ * V_);
      case qms::qwalk::Ordering::qubitization: return SparseOp(F_ * V_ * B_ * R_ * Bd * Vd);
      case qms::qwalk::Ordering::alternative: return SparseOp(V_ * B_ * R_ * Bd * Vd * F_);
    }
    return {};
  }

  std::size_t index(std::size_t anc, std::size_t state, std::size_t slot, std::size_t coin) const {
    return coin + 2 * (slot + slots_ * (state + states_ * anc));
  }

 private:
  using Triplet = Eigen::Triplet<Complex, std::ptrdiff_t>;

  static SparseOp assemble(std::size_t dim, const std::vector<Triplet>& t) {
    SparseOp m(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim));
    m.setFromTriplets(t.begin(), t.end());
    m.prune(Complex{0.0, 0.0});
    return m;
  }

  std::ptrdiff_t at(std::size_t a, std::size_t s, std::size_t m, std::size_t c) const {
    return static_cast<std::ptrdiff_t>(index(a, s, m, c));
  }

  void build() {
    // V: reflection across the bisector of |0> and the uniform move state.
    std::vector<double> u(slots_, 0.0);
    for (std::size_t m = 0; m < moves_; ++m) u[m] = 1.0 / std::sqrt(static_cast<double>(moves_));
    std::vector<double> w(slots_, 0.0);
    for (std::size_t m = 0; m < slots_; ++m) w[m] = (m == 0 ? 1.0 : 0.0) - u[m];
    double ww = 0.0;
    for (double x : w) ww += x * x;
    std::vector<Triplet> tv, tb, tf, tr;
    for (std::size_t a = 0; a < anc_; ++a) {
      for (std::size_t s = 0; s < states_; ++s) {
        for (std::size_t c = 0; c < 2; ++c) {
          for (std::size_t r = 0; r < slots_; ++r) {
            for (std::size_t k = 0; k < slots_; ++k) {
              double h = (r == k ? 1.0 : 0.0);
              if (ww > 0.0) h -= 2.0 * w[r] * w[k] / ww;
              if (h != 0.0) tv.emplace_back(at(a, s, r, c), at(a, s, k, c), h);
            }
          }
        }
      }
    }
    // B: coin rotation by arcsin(sqrt(q)) on problem states, q on the 1/8 grid.
    for (std::size_t a = 0; a < anc_; ++a) {
      for (std::size_t s = 0; s < states_; ++s) {
        const std::size_t i = spec_.index_of_code(s);
        for (std::size_t m = 0; m < slots_; ++m) {
          double q = 0.0;
          if (i != qms::ProblemSpec::npos && m < moves_) q = std::round(delta_(i, m) * 8.0) / 8.0;
          const double cs = std::sqrt(1.0 - q);
          const double sn = std::sqrt(q);
          tb.emplace_back(at(a, s, m, 0), at(a, s, m, 0), cs);
          tb.emplace_back(at(a, s, m, 1), at(a, s, m, 0), sn);
          tb.emplace_back(at(a, s, m, 0), at(a, s, m, 1), -sn);
          tb.emplace_back(at(a, s, m, 1), at(a, s, m, 1), cs);
        }
      }
    }
    // F: coin=1 components move the state and record the inverse move.
    for (std::size_t a = 0; a < anc_; ++a) {
      for (std::size_t s = 0; s < states_; ++s) {
        const std::size_t i = spec_.index_of_code(s);
        for (std::size_t m = 0; m < slots_; ++m) {
          tf.emplace_back(at(a, s, m, 0), at(a, s, m, 0), 1.0);
          std::size_t s2 = s;
          std::size_t m2 = m;
          if (i != qms::ProblemSpec::npos && m < moves_ && spec_.move_valid(i, m)) {
            s2 = spec_.code(spec_.successor(i, m));
            m2 = spec_.move_model().inverse_move(m);
          }
          tf.emplace_back(at(a, s2, m2, 1), at(a, s, m, 1), 1.0);
        }
      }
    }
    // R: +1 on move slot 0 with coin 0, -1 elsewhere.
    for (std::size_t a = 0; a < anc_; ++a)
      for (std::size_t s = 0; s < states_; ++s)
        for (std::size_t m = 0; m < slots_; ++m)
          for (std::size_t c = 0; c < 2; ++c)
            tr.emplace_back(at(a, s, m, c), at(a, s, m, c), (m == 0 && c == 0) ? 1.0 : -1.0);
    V_ = assemble(dim_, tv);
    B_ = assemble(dim_, tb);
    F_ = assemble(dim_, tf);
    R_ = assemble(dim_, tr);
  }

  const qms::ProblemSpec& spec_;
  qms::qwalk::RegisterLayout l_;
  const qms::DeltaTable& delta_;
  int slot_bits_ = 0;
  std::size_t slots_ = 0, states_ = 0, anc_ = 0, dim_ = 0, moves_ = 0;
  SparseOp V_, B_, F_, R_;
};

inline std::vector<Complex> apply(const SparseOp& op, const std::vector<Complex>& v) {
  Vec x = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  Vec y = op * x;
  return {y.data(), y.data() + y.size()};
}

/// Every problem the walk can simulate within the dense-matrix bound.
inline std::vector<qms::ProblemSpec> small_walk_problems() {
  std::vector<qms::ProblemSpec> out;
  out.push_back(two_state(0.0, 1.0));
  out.push_back(lazy_two_state(0.0, 1.0));
  out.push_back(qms::nqueens::generate_instance(2).spec);
  out.push_back(qms::nqueens::generate_instance(2, qms::nqueens::QueenPin{0, 1}).spec);
  std::mt19937_64 rng(7);
  for (std::size_t n : {3, 4, 5, 8, 11, 16, 23, 32, 64}) out.push_back(random_problem(rng, n));
  return out;
}

}  // namespace qms_test
