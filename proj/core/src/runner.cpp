#include "qms/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qms/classical.hpp"
#include "qms/nqueens.hpp"

namespace qms::cli {

using nlohmann::json;

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::solve: return "solve";
    case RunMode::tts: return "tts";
    case RunMode::distribution: return "distribution";
    case RunMode::compare: return "compare";
    case RunMode::orderings: return "orderings";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::InvalidParameter,
              "invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  std::string s(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (used != s.size()) bad_value(key, value);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string init_to_string(const InitialState& init) {
  if (init.kind == InitialState::Kind::uniform) return "uniform";
  return "fixed:" + std::to_string(init.label);
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "problem") {
    c.problem = std::string(value);
  } else if (key == "mode") {
    if (value == "solve") c.mode = RunMode::solve;
    else if (value == "tts") c.mode = RunMode::tts;
    else if (value == "distribution") c.mode = RunMode::distribution;
    else if (value == "compare") c.mode = RunMode::compare;
    else if (value == "orderings") c.mode = RunMode::orderings;
    else bad_value(key, value);
  } else if (key == "initial_step") {
    c.initial_step = parse_number<int>(key, value);
  } else if (key == "final_step") {
    c.final_step = parse_number<int>(key, value);
  } else if (key == "beta_start") {
    c.beta_start = parse_real(key, value);
  } else if (key == "beta_end") {
    c.beta_end = parse_real(key, value);
  } else if (key == "schedule") {
    if (value == "constant") c.schedule = ScheduleKind::constant;
    else if (value == "linear") c.schedule = ScheduleKind::linear;
    else if (value == "geometric") c.schedule = ScheduleKind::geometric;
    else bad_value(key, value);
  } else if (key == "init") {
    if (value == "uniform") {
      c.init = InitialState::uniform();
    } else if (value.starts_with("fixed:")) {
      auto bits = value.substr(6);
      if (bits.empty() || bits.size() > 63 || bits.find_first_not_of("01") != std::string_view::npos)
        bad_value(key, value);
      c.init = InitialState::fixed(std::stoull(std::string(bits), nullptr, 2));
    } else {
      bad_value(key, value);
    }
  } else if (key == "ordering") {
    if (value == "lemieux") c.ordering = qwalk::Ordering::lemieux;
    else if (value == "qubitization") c.ordering = qwalk::Ordering::qubitization;
    else if (value == "alternative") c.ordering = qwalk::Ordering::alternative;
    else bad_value(key, value);
  } else if (key == "tts_delta") {
    c.tts_delta = parse_real(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "max_bits") {
    c.max_bits = parse_number<int>(key, value);
  } else if (key == "out") {
    c.out = std::string(value);
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::InvalidParameter,
                  "config line " + std::to_string(line_no) + " is not key = value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

void RunConfig::validate() const {
  if (problem.empty()) throw Error(ErrorCode::InvalidParameter, "no problem given");
  if (initial_step < 1)
    throw Error(ErrorCode::InvalidParameter, "initial_step must be at least 1");
  if (final_step < initial_step)
    throw Error(ErrorCode::InvalidParameter, "final_step must not be below initial_step");
  if (!(tts_delta > 0.0 && tts_delta < 1.0))
    throw Error(ErrorCode::InvalidParameter, "tts_delta must lie in (0, 1)");
  if (max_bits < 1 || max_bits > 40)
    throw Error(ErrorCode::InvalidParameter, "max_bits must lie in [1, 40]");
  if (out.empty()) throw Error(ErrorCode::InvalidParameter, "out must name an output path");
  make_schedule().validate();
}

Schedule RunConfig::make_schedule() const {
  Schedule s;
  s.beta_start = beta_start;
  s.beta_end = beta_end;
  s.kind = schedule;
  s.steps = final_step;
  return s;
}

ProblemSpec resolve_problem(const std::string& source) {
  if (auto d = nqueens::parse_descriptor(source))
    return nqueens::generate_instance(d->n, d->fixed).spec;
  return load_problem_file(source);
}

ResourceEstimate estimate_resources(const std::string& source) {
  ResourceEstimate e;
  if (auto d = nqueens::parse_descriptor(source)) {
    if (d->n < nqueens::kMinSize || d->n > nqueens::kMaxSize)
      throw Error(ErrorCode::InvalidParameter, "board size out of range");
    // Register sizes depend only on n; skip materializing n! boards.
    e.layout.state_bits = d->n * nqueens::bits_per_queen(d->n);
    e.layout.move_id_bits = std::max(1, ceil_log2(static_cast<std::uint64_t>(d->n)));
  } else {
    e.layout = qwalk::compute_layout(load_problem_file(source));
  }
  e.qubits = e.layout.total();
  e.memory_bytes = e.layout.memory_bytes();
  return e;
}

namespace {

struct Prepared {
  ProblemSpec spec;
  qwalk::RegisterLayout layout;
  DeltaSchedule deltas;
};

Prepared prepare(const RunConfig& c) {
  c.validate();
  ProblemSpec spec = resolve_problem(c.problem);
  qwalk::RegisterLayout l = qwalk::layout(spec, c.max_bits);
  qwalk::check_move_capacity(spec, l);
  if (c.init.kind == InitialState::Kind::fixed) initial_index(spec, c.init);
  DeltaSchedule deltas(spec, c.make_schedule());
  return {std::move(spec), l, std::move(deltas)};
}

json header(const RunConfig& c, const Prepared& p) {
  json h;
  h["problem"] = c.problem;
  h["mode"] = std::string(to_string(c.mode));
  h["states"] = p.spec.size();
  h["ground_states"] = p.spec.ground_states().size();
  h["min_cost"] = p.spec.min_cost();
  h["moves"] = p.spec.move_count();
  h["move_model"] = std::string(to_string(p.spec.move_model().kind));
  h["qubits"] = p.layout.total();
  h["memory_bytes"] = p.layout.memory_bytes();
  h["initial_step"] = c.initial_step;
  h["final_step"] = c.final_step;
  h["schedule"] = {{"kind", std::string(to_string(c.schedule))},
                   {"beta_start", c.beta_start},
                   {"beta_end", c.beta_end}};
  h["init"] = init_to_string(c.init);
  h["ordering"] = std::string(qwalk::to_string(c.ordering));
  h["tts_delta"] = c.tts_delta;
  h["seed"] = c.seed;
  h["delta_checksum"] = fmt::format("{:016x}", p.deltas.checksum());
  h["conventions"] = {
      {"hit_mode", "at_step"},
      {"reflection_registers", "move_id,move_value,coin"},
      {"coin_angle", "arcsin(sqrt(q))"},
      {"acceptance_bits", qwalk::kAncillaBits},
      {"move_preparation", "householder"},
      {"quantum_p_of_t", "fresh walk per t"},
  };
  return h;
}

json min_tts_json(const metrics::TtsCurve& curve) {
  try {
    const auto m = metrics::min_tts(curve);
    return {{"t", m.t}, {"tts", m.tts}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSolutionSignal) throw;
    return nullptr;
  }
}

std::string describe_min(const json& m) {
  if (m.is_null()) return "none";
  return fmt::format("{} at t={}", num(m["tts"].get<double>()), m["t"].get<int>());
}

std::span<const double> window(const std::vector<double>& p, const RunConfig& c) {
  return std::span(p).subspan(static_cast<std::size_t>(c.initial_step),
                              static_cast<std::size_t>(c.final_step - c.initial_step + 1));
}

Report run_tts(const RunConfig& c, Prepared& p) {
  const auto pq = qwalk::success_curve(p.spec, p.deltas, c.ordering, c.init, c.final_step,
                                       c.max_bits);
  const auto curve = metrics::make_tts_curve(c.initial_step, window(pq, c), c.tts_delta);
  std::string csv = "t,p,TTS\n";
  for (const auto& e : curve.entries) csv += fmt::format("{},{},{}\n", e.t, num(e.p), num(e.tts));
  json j = header(c, p);
  j["min_tts"] = min_tts_json(curve);
  j["p0"] = pq.front();
  return {csv, j.dump(2) + "\n", "min TTS " + describe_min(j["min_tts"])};
}

Report run_compare(const RunConfig& c, Prepared& p) {
  const auto pc = classical::success_curve(p.spec, p.deltas, c.init, c.final_step,
                                           classical::HitMode::at_step, 10'000, c.seed);
  const auto pq = qwalk::success_curve(p.spec, p.deltas, c.ordering, c.init, c.final_step,
                                       c.max_bits);
  const auto cc = metrics::make_tts_curve(c.initial_step, window(pc.p, c), c.tts_delta);
  const auto qc = metrics::make_tts_curve(c.initial_step, window(pq, c), c.tts_delta);
  std::string csv = "t,p_c,TTS_c,p_q,TTS_q\n";
  for (std::size_t k = 0; k < cc.entries.size(); ++k) {
    const auto& a = cc.entries[k];
    const auto& b = qc.entries[k];
    csv += fmt::format("{},{},{},{},{}\n", a.t, num(a.p), num(a.tts), num(b.p), num(b.tts));
  }
  json j = header(c, p);
  j["classical"] = {{"min_tts", min_tts_json(cc)},
                    {"method", std::string(classical::to_string(pc.method))},
                    {"hit_mode", std::string(classical::to_string(pc.hit_mode))}};
  if (!pc.warning.empty()) j["classical"]["warning"] = pc.warning;
  j["quantum"] = {{"min_tts", min_tts_json(qc)}};
  j["p0"] = pq.front();
  return {csv, j.dump(2) + "\n",
          "min TTS classical " + describe_min(j["classical"]["min_tts"]) + ", quantum " +
              describe_min(j["quantum"]["min_tts"])};
}

Report run_orderings(const RunConfig& c, Prepared& p) {
  constexpr qwalk::Ordering all[] = {qwalk::Ordering::lemieux, qwalk::Ordering::qubitization,
                                     qwalk::Ordering::alternative};
  std::vector<metrics::TtsCurve> curves;
  for (auto o : all) {
    const auto pq = qwalk::success_curve(p.spec, p.deltas, o, c.init, c.final_step, c.max_bits);
    curves.push_back(metrics::make_tts_curve(c.initial_step, window(pq, c), c.tts_delta));
  }
  std::string csv = "t";
  for (auto o : all) csv += fmt::format(",p_{0},TTS_{0}", qwalk::to_string(o));
  csv += "\n";
  for (std::size_t k = 0; k < curves[0].entries.size(); ++k) {
    csv += std::to_string(curves[0].entries[k].t);
    for (const auto& cv : curves) csv += fmt::format(",{},{}", num(cv.entries[k].p), num(cv.entries[k].tts));
    csv += "\n";
  }
  json j = header(c, p);
  json mins = json::object();
  std::optional<std::pair<double, std::string>> lowest;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const std::string name(qwalk::to_string(all[k]));
    mins[name] = min_tts_json(curves[k]);
    if (!mins[name].is_null()) {
      const double v = mins[name]["tts"].get<double>();
      if (!lowest || v < lowest->first) lowest = {v, name};
    }
  }
  j["min_tts"] = mins;
  j["lowest_ordering"] = lowest ? json(lowest->second) : json(nullptr);
  std::string summary = "min TTS";
  for (auto o : all) {
    const std::string name(qwalk::to_string(o));
    summary += fmt::format(" {} {};", name, describe_min(mins[name]));
  }
  summary.pop_back();
  return {csv, j.dump(2) + "\n", summary};
}

Report run_distribution(const RunConfig& c, Prepared& p) {
  const auto sv = qwalk::run_walk(p.spec, p.deltas, c.ordering, c.init, c.final_step, c.max_bits);
  const auto pq = qwalk::state_distribution(sv, p.spec);
  std::vector<double> pc;
  std::string classical_method = "exact";
  if (p.spec.size() <= classical::kMaxExactStates) {
    classical::Distribution d(p.spec.size(), 1.0 / static_cast<double>(p.spec.size()));
    if (c.init.kind == InitialState::Kind::fixed) {
      std::fill(d.begin(), d.end(), 0.0);
      d[initial_index(p.spec, c.init)] = 1.0;
    }
    std::vector<classical::TransitionMatrix> mats;
    for (std::size_t k = 0; k < p.deltas.distinct_tables(); ++k)
      mats.push_back(classical::transition_matrix(p.spec, p.deltas.table(k)));
    for (int t = 1; t <= c.final_step; ++t) d = mats[p.deltas.table_index(t)].apply(d);
    pc = std::move(d);
  }
  std::string csv = "label,cost,p_quantum,p_classical\n";
  for (std::size_t i = 0; i < p.spec.size(); ++i) {
    csv += fmt::format("{},{},{},{}\n", p.spec.label_string(i), num(p.spec.cost(i)), num(pq[i]),
                       pc.empty() ? std::string("nan") : num(pc[i]));
  }
  json j = header(c, p);
  j["t"] = c.final_step;
  j["ground_probability_quantum"] = qwalk::ground_state_probability(sv, p.spec);
  j["classical_method"] = pc.empty() ? "unavailable" : classical_method;
  return {csv, j.dump(2) + "\n",
          fmt::format("ground probability at t={}: {}", c.final_step,
                      num(j["ground_probability_quantum"].get<double>()))};
}

Report run_solve(const RunConfig& c, Prepared& p) {
  qwalk::WalkOperators ops(p.spec, p.layout);
  auto sv = qwalk::initialize(p.spec, p.layout, c.init);
  std::string csv = "t,label,cost,probability\n";
  struct Pick {
    int t;
    std::size_t state;
    double prob;
  };
  std::optional<Pick> best;
  std::size_t loaded = static_cast<std::size_t>(-1);
  for (int t = 1; t <= c.final_step; ++t) {
    const std::size_t k = p.deltas.table_index(t);
    if (k != loaded) {
      ops.set_delta(p.deltas.table(k));
      loaded = k;
    }
    qwalk::walk_step(sv, ops, c.ordering);
    if (t < c.initial_step) continue;
    const auto dist = qwalk::state_distribution(sv, p.spec);
    // Most likely measurement at step t; ties go to the cheaper state.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < dist.size(); ++i) {
      if (dist[i] > dist[arg] || (dist[i] == dist[arg] && p.spec.cost(i) < p.spec.cost(arg)))
        arg = i;
    }
    csv += fmt::format("{},{},{},{}\n", t, p.spec.label_string(arg), num(p.spec.cost(arg)),
                       num(dist[arg]));
    if (!best || p.spec.cost(arg) < p.spec.cost(best->state)) best = Pick{t, arg, dist[arg]};
  }
  json j = header(c, p);
  j["solution"] = {{"label", p.spec.label_string(best->state)},
                   {"cost", p.spec.cost(best->state)},
                   {"t", best->t},
                   {"probability", best->prob},
                   {"is_ground", p.spec.is_ground(best->state)}};
  return {csv, j.dump(2) + "\n",
          fmt::format("solution {} cost {}", p.spec.label_string(best->state),
                      num(p.spec.cost(best->state)))};
}

}  // namespace

Report run(const RunConfig& config) {
  Prepared p = prepare(config);
  switch (config.mode) {
    case RunMode::solve: return run_solve(config, p);
    case RunMode::tts: return run_tts(config, p);
    case RunMode::distribution: return run_distribution(config, p);
    case RunMode::compare: return run_compare(config, p);
    case RunMode::orderings: return run_orderings(config, p);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown mode");
}

void write_report(const Report& report, const std::string& out) {
  for (const auto& [ext, body] : {std::pair{".csv", &report.csv}, std::pair{".json", &report.json}}) {
    std::ofstream f(out + ext, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidParameter, "cannot write " + out + ext);
    f << *body;
  }
}

std::vector<std::string> fixed_queen_sources(int n, std::size_t limit) {
  std::vector<std::string> out;
  for (int col = 0; col < n; ++col)
    for (int row = 0; row < n; ++row)
      out.push_back(fmt::format("nqueens:{}:fixed={},{}", n, col, row));
  if (limit > 0 && out.size() > limit) out.resize(limit);
  return out;
}

Report run_sweep(const RunConfig& base, const std::vector<std::string>& sources) {
  std::vector<std::pair<double, double>> points;
  std::string csv = "instance,states,ground_states,t_c,TTS_c,t_q,TTS_q\n";
  json skipped = json::array();
  for (const auto& source : sources) {
    RunConfig c = base;
    c.problem = source;
    c.mode = RunMode::compare;
    Prepared p = prepare(c);
    const auto pc = classical::success_curve(p.spec, p.deltas, c.init, c.final_step,
                                             classical::HitMode::at_step, 10'000, c.seed);
    const auto pq = qwalk::success_curve(p.spec, p.deltas, c.ordering, c.init, c.final_step,
                                         c.max_bits);
    const auto cc = metrics::make_tts_curve(c.initial_step, window(pc.p, c), c.tts_delta);
    const auto qc = metrics::make_tts_curve(c.initial_step, window(pq, c), c.tts_delta);
    const json mc = min_tts_json(cc);
    const json mq = min_tts_json(qc);
    if (mc.is_null() || mq.is_null()) {
      skipped.push_back(source);
      continue;
    }
    const double ct = mc["tts"].get<double>();
    const double qt = mq["tts"].get<double>();
    csv += fmt::format("{},{},{},{},{},{},{}\n", csv_field(source), p.spec.size(),
                       p.spec.ground_states().size(), mc["t"].get<int>(), num(ct),
                       mq["t"].get<int>(), num(qt));
    points.emplace_back(ct, qt);
  }

  json j;
  j["mode"] = "sweep";
  j["instances"] = sources.size();
  j["fitted_instances"] = points.size();
  j["skipped"] = skipped;
  j["initial_step"] = base.initial_step;
  j["final_step"] = base.final_step;
  j["schedule"] = {{"kind", std::string(to_string(base.schedule))},
                   {"beta_start", base.beta_start},
                   {"beta_end", base.beta_end}};
  j["ordering"] = std::string(qwalk::to_string(base.ordering));
  j["tts_delta"] = base.tts_delta;
  const auto fit = metrics::fit_scaling(points);
  j["fit"] = {{"exponent", json_num(fit.exponent)},
              {"prefactor", json_num(fit.prefactor)},
              {"residual", json_num(fit.residual)},
              {"regime", std::string(metrics::to_string(fit.regime))}};
  return {csv, j.dump(2) + "\n",
          fmt::format("exponent {} over {} instances ({})", num(fit.exponent), points.size(),
                      metrics::to_string(fit.regime))};
}

int exit_status(const Error& error) {
  switch (error.code()) {
    case ErrorCode::CapacityExceeded: return 2;
    case ErrorCode::NotErgodic:
    case ErrorCode::NoSolutionSignal:
    case ErrorCode::DegenerateFit:
    case ErrorCode::NumericFailure:
    case ErrorCode::DimensionError: return 3;
    default: return 1;
  }
}

}  // namespace qms::cli
