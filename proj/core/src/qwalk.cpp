#include "qms/qwalk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include "qms/error.hpp"

namespace qms::qwalk {

namespace {

std::string format_bytes(double bytes) {
  const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB", "PiB"};
  int u = 0;
  while (bytes >= 1024.0 && u < 5) {
    bytes /= 1024.0;
    ++u;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f %s", bytes, units[u]);
  return buf;
}

}  // namespace

double RegisterLayout::memory_bytes() const {
  return std::ldexp(static_cast<double>(sizeof(Amplitude)), total());
}

RegisterLayout compute_layout(const ProblemSpec& spec) {
  RegisterLayout l;
  l.state_bits = spec.register_bits();
  l.move_id_bits =
      std::max(1, ceil_log2(static_cast<std::uint64_t>(spec.move_model().coordinate_count)));
  return l;
}

RegisterLayout layout(const ProblemSpec& spec, int max_bits) {
  RegisterLayout l = compute_layout(spec);
  if (l.total() > max_bits)
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(l.total()) + " qubits exceed the simulator cap of " +
                    std::to_string(max_bits) + " (statevector needs " +
                    format_bytes(l.memory_bytes()) + ")");
  return l;
}

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::lemieux: return "lemieux";
    case Ordering::qubitization: return "qubitization";
    case Ordering::alternative: return "alternative";
  }
  return "unknown";
}

StateVector::StateVector(const RegisterLayout& layout)
    : layout_(layout), amps_(layout.dimension()), live_(slice_count(), 0) {}

StateVector::StateVector(const RegisterLayout& layout, std::vector<Amplitude> amplitudes)
    : layout_(layout), amps_(std::move(amplitudes)), live_(slice_count(), 0) {
  if (amps_.size() != layout_.dimension())
    throw Error(ErrorCode::DimensionError, "amplitude count must be 2^total");
  for (std::size_t a = 0; a < slice_count(); ++a) {
    auto s = std::as_const(*this).slice(a);
    live_[a] = std::any_of(s.begin(), s.end(), [](Amplitude z) { return z != Amplitude{}; });
  }
}

double StateVector::norm() const {
  double s = 0.0;
  for (Amplitude z : amps_) s += std::norm(z);
  return std::sqrt(s);
}

StateVector initialize(const ProblemSpec& spec, const RegisterLayout& layout,
                       const InitialState& init) {
  if (layout.state_bits != spec.register_bits())
    throw Error(ErrorCode::DimensionError, "layout does not match the problem");
  StateVector sv(layout);
  sv.live_[0] = 1;
  sv.problem_states_only_ = true;
  if (init.kind == InitialState::Kind::fixed) {
    sv.amps_[layout.index(0, spec.code(initial_index(spec, init)), 0, 0)] = 1.0;
    return sv;
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(spec.size()));
  for (std::size_t i = 0; i < spec.size(); ++i) sv.amps_[layout.index(0, spec.code(i), 0, 0)] = amp;
  return sv;
}

double quantize_acceptance(double q) {
  constexpr double levels = 1 << kAncillaBits;
  return std::clamp(std::nearbyint(q * levels) / levels, 0.0, 1.0);
}

void check_move_capacity(const ProblemSpec& spec, const RegisterLayout& layout) {
  if (spec.move_count() > layout.move_slots())
    throw Error(ErrorCode::CapacityExceeded,
                std::to_string(spec.move_count()) + " moves do not fit in " +
                    std::to_string(layout.move_slots()) + " move-register slots");
}

WalkOperators::WalkOperators(const ProblemSpec& spec, const RegisterLayout& layout)
    : spec_(&spec), layout_(layout), moves_(spec.move_count()) {
  if (layout_.state_bits != spec.register_bits())
    throw Error(ErrorCode::DimensionError, "layout does not match the problem");
  check_move_capacity(spec, layout_);

  const int slot_bits = layout_.move_id_bits + layout_.move_value_bits;
  const MoveModel& model = spec.move_model();
  partner_.resize(spec.size() * moves_);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t m = 0; m < moves_; ++m) {
      std::uint64_t key = spec.code(i) << slot_bits | m;
      if (spec.move_valid(i, m))
        key = spec.code(spec.successor(i, m)) << slot_bits | model.inverse_move(m);
      partner_[i * moves_ + m] = key;
    }
  }

  cos_.assign(spec.size() * moves_, 1.0);
  sin_.assign(spec.size() * moves_, 0.0);

  // w = e0 - u with u uniform over the first M slots; H = I - w w^T / (1 - u0).
  householder_u_ = moves_ > 0 ? 1.0 / std::sqrt(static_cast<double>(moves_)) : 1.0;
  householder_scale_ = moves_ > 1 ? 1.0 / (1.0 - householder_u_) : 0.0;
}

void WalkOperators::set_delta(const DeltaTable& delta) {
  if (delta.states() != spec_->size() || delta.moves() != moves_)
    throw Error(ErrorCode::DimensionError, "delta table does not match the problem");
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double q = quantize_acceptance(delta.entries()[k]);
    cos_[k] = std::sqrt(1.0 - q);
    sin_[k] = std::sqrt(q);
  }
}

double WalkOperators::coin_sin(std::uint64_t code, std::size_t slot) const {
  const std::size_t i = spec_->index_of_code(code);
  if (i == ProblemSpec::npos || slot >= moves_) return 0.0;
  return sin_[i * moves_ + slot];
}

void WalkOperators::apply_V(StateVector& sv) const {
  if (moves_ <= 1) return;
  const std::size_t block = 2 * layout_.move_slots();
  const double u = householder_u_;
  const double scale = householder_scale_;
  const auto reflect = [&](Amplitude* x) {
    Amplitude sum{};
    for (std::size_t j = 0; j < moves_; ++j) sum += x[2 * j];
    const Amplitude d = x[0] - u * sum;
    if (d == Amplitude{}) return;
    const Amplitude step = scale * d;
    x[0] -= (1.0 - u) * step;
    for (std::size_t j = 1; j < moves_; ++j) x[2 * j] += u * step;
  };
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    if (sv.problem_states_only()) {
      for (std::size_t i = 0; i < spec_->size(); ++i) {
        Amplitude* x = amps.data() + spec_->code(i) * block;
        reflect(x);
        reflect(x + 1);
      }
      continue;
    }
    for (std::size_t base = 0; base < amps.size(); base += block) {
      reflect(amps.data() + base);
      reflect(amps.data() + base + 1);
    }
  }
}

void WalkOperators::rotate_coin(StateVector& sv, bool inverse) const {
  const std::size_t block = 2 * layout_.move_slots();
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    for (std::size_t i = 0; i < spec_->size(); ++i) {
      Amplitude* x = amps.data() + spec_->code(i) * block;
      const double* c = cos_.data() + i * moves_;
      const double* s = sin_.data() + i * moves_;
      for (std::size_t m = 0; m < moves_; ++m) {
        if (s[m] == 0.0) continue;
        const Amplitude a0 = x[2 * m];
        const Amplitude a1 = x[2 * m + 1];
        const double sn = sign * s[m];
        x[2 * m] = c[m] * a0 - sn * a1;
        x[2 * m + 1] = sn * a0 + c[m] * a1;
      }
    }
  }
}

void WalkOperators::apply_F(StateVector& sv) const {
  const int slot_bits = layout_.move_id_bits + layout_.move_value_bits;
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    for (std::size_t i = 0; i < spec_->size(); ++i) {
      const std::uint64_t code = spec_->code(i);
      for (std::size_t m = 0; m < moves_; ++m) {
        const std::uint64_t self = code << slot_bits | m;
        const std::uint64_t other = partner_[i * moves_ + m];
        // F is an involution on (state, slot); each pair is swapped once.
        if (other > self) std::swap(amps[self << 1 | 1], amps[other << 1 | 1]);
      }
    }
  }
}

void WalkOperators::apply_R(StateVector& sv) const {
  const std::size_t block = 2 * layout_.move_slots();
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    if (sv.problem_states_only()) {
      for (std::size_t i = 0; i < spec_->size(); ++i) {
        Amplitude* x = amps.data() + spec_->code(i) * block;
        for (std::size_t k = 1; k < block; ++k) x[k] = -x[k];
      }
      continue;
    }
    for (std::size_t k = 0; k < amps.size(); ++k)
      if (k % block != 0) amps[k] = -amps[k];
  }
}

void walk_step(StateVector& sv, const WalkOperators& ops, Ordering ordering) {
  switch (ordering) {
    case Ordering::lemieux:
      ops.apply_V(sv);
      ops.apply_B(sv);
      ops.apply_F(sv);
      ops.apply_B_dagger(sv);
      ops.apply_V_dagger(sv);
      ops.apply_R(sv);
      return;
    case Ordering::qubitization:
      ops.apply_V_dagger(sv);
      ops.apply_B_dagger(sv);
      ops.apply_R(sv);
      ops.apply_B(sv);
      ops.apply_V(sv);
      ops.apply_F(sv);
      return;
    case Ordering::alternative:
      ops.apply_F(sv);
      ops.apply_V_dagger(sv);
      ops.apply_B_dagger(sv);
      ops.apply_R(sv);
      ops.apply_B(sv);
      ops.apply_V(sv);
      return;
  }
}

std::vector<double> state_distribution(const StateVector& sv, const ProblemSpec& spec) {
  const RegisterLayout& l = sv.layout();
  if (l.state_bits != spec.register_bits())
    throw Error(ErrorCode::DimensionError, "layout does not match the problem");
  const std::size_t block = 2 * l.move_slots();
  std::vector<double> p(spec.size(), 0.0);
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Amplitude* x = amps.data() + spec.code(i) * block;
      double s = 0.0;
      for (std::size_t k = 0; k < block; ++k) s += std::norm(x[k]);
      p[i] += s;
    }
  }
  return p;
}

double ground_state_probability(const StateVector& sv, const ProblemSpec& spec) {
  const RegisterLayout& l = sv.layout();
  if (l.state_bits != spec.register_bits())
    throw Error(ErrorCode::DimensionError, "layout does not match the problem");
  const std::size_t block = 2 * l.move_slots();
  double total = 0.0;
  for (std::size_t a = 0; a < sv.slice_count(); ++a) {
    if (!sv.slice_live(a)) continue;
    auto amps = sv.slice(a);
    for (std::size_t g : spec.ground_states()) {
      const Amplitude* x = amps.data() + spec.code(g) * block;
      for (std::size_t k = 0; k < block; ++k) total += std::norm(x[k]);
    }
  }
  return total;
}

StateVector run_walk(const ProblemSpec& spec, const DeltaSchedule& deltas, Ordering ordering,
                     const InitialState& init, int t, int max_bits) {
  if (t < 0 || t > deltas.steps())
    throw Error(ErrorCode::InvalidParameter, "walk length outside the schedule");
  const RegisterLayout l = layout(spec, max_bits);
  WalkOperators ops(spec, l);
  StateVector sv = initialize(spec, l, init);
  std::size_t loaded = static_cast<std::size_t>(-1);
  for (int step = 1; step <= t; ++step) {
    const std::size_t k = deltas.table_index(step);
    if (k != loaded) {
      ops.set_delta(deltas.table(k));
      loaded = k;
    }
    walk_step(sv, ops, ordering);
  }
  return sv;
}

StateVector run_walk(const ProblemSpec& spec, const Schedule& schedule, Ordering ordering,
                     const InitialState& init, int t, int max_bits) {
  return run_walk(spec, DeltaSchedule(spec, schedule), ordering, init, t, max_bits);
}

std::vector<double> success_curve(const ProblemSpec& spec, const DeltaSchedule& deltas,
                                  Ordering ordering, const InitialState& init, int t_max,
                                  int max_bits) {
  if (t_max < 0 || t_max > deltas.steps())
    throw Error(ErrorCode::InvalidParameter, "walk length outside the schedule");
  const RegisterLayout l = layout(spec, max_bits);
  WalkOperators ops(spec, l);
  StateVector sv = initialize(spec, l, init);
  std::vector<double> p{ground_state_probability(sv, spec)};
  p.reserve(static_cast<std::size_t>(t_max) + 1);
  std::size_t loaded = static_cast<std::size_t>(-1);
  for (int step = 1; step <= t_max; ++step) {
    const std::size_t k = deltas.table_index(step);
    if (k != loaded) {
      ops.set_delta(deltas.table(k));
      loaded = k;
    }
    walk_step(sv, ops, ordering);
    p.push_back(ground_state_probability(sv, spec));
  }
  return p;
}

double unitarity_defect(const DenseMatrix& u) {
  const std::size_t n = u.dim;
  std::vector<std::vector<std::pair<std::size_t, Amplitude>>> rows(n), cols(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Amplitude z = u(r, c);
      if (z == Amplitude{}) continue;
      rows[r].emplace_back(c, z);
      cols[c].emplace_back(r, z);
    }
  }
  double worst = 0.0;
  std::vector<Amplitude> acc(n);
  std::vector<std::size_t> touched;
  for (std::size_t c = 0; c < n; ++c) {
    touched.clear();
    for (auto [r, z] : cols[c]) {
      for (auto [j, w] : rows[r]) {
        if (acc[j] == Amplitude{}) touched.push_back(j);
        acc[j] += std::conj(w) * z;
      }
    }
    acc[c] -= 1.0;
    touched.push_back(c);
    for (std::size_t j : touched) {
      worst = std::max(worst, std::abs(acc[j]));
      acc[j] = Amplitude{};
    }
  }
  return worst;
}

DenseMatrix dense_unitary(const ProblemSpec& spec, const RegisterLayout& layout,
                          const DeltaTable& delta, Ordering ordering) {
  if (layout.total() > kDenseMaxBits)
    throw Error(ErrorCode::CapacityExceeded,
                "dense walk matrix limited to " + std::to_string(kDenseMaxBits) + " qubits");
  WalkOperators ops(spec, layout);
  ops.set_delta(delta);
  const std::size_t dim = layout.dimension();
  DenseMatrix u{dim, std::vector<Amplitude>(dim * dim)};
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Amplitude> basis(dim);
    basis[c] = 1.0;
    StateVector sv(layout, std::move(basis));
    walk_step(sv, ops, ordering);
    for (std::size_t r = 0; r < dim; ++r) u(r, c) = sv[r];
  }
  const double defect = unitarity_defect(u);
  if (!(defect < 1e-9))
    throw Error(ErrorCode::NumericFailure,
                "walk matrix is not unitary (defect " + std::to_string(defect) + ")");
  return u;
}

}  // namespace qms::qwalk
