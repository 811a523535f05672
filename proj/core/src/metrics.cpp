#include "qms/metrics.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "qms/error.hpp"

namespace qms::metrics {

double tts(int t, double p, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorCode::InvalidParameter, "delta must lie in (0, 1)");
  if (t < 1) throw Error(ErrorCode::InvalidParameter, "t must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidParameter, "p must lie in [0, 1]");
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  if (p == 1.0) return static_cast<double>(t);
  return t * (std::log1p(-delta) / std::log1p(-p));
}

TtsCurve make_tts_curve(int first_t, std::span<const double> p, double delta) {
  TtsCurve curve;
  curve.delta = delta;
  curve.entries.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const int t = first_t + static_cast<int>(k);
    curve.entries.push_back({t, p[k], tts(t, p[k], delta)});
  }
  return curve;
}

MinTts min_tts(const TtsCurve& curve) {
  if (curve.entries.empty()) throw Error(ErrorCode::InvalidParameter, "empty TTS curve");
  const TtsEntry* best = nullptr;
  for (const TtsEntry& e : curve.entries) {
    if (!std::isfinite(e.tts)) continue;
    if (!best || e.tts < best->tts || (e.tts == best->tts && e.t < best->t)) best = &e;
  }
  if (!best) throw Error(ErrorCode::NoSolutionSignal, "ground state never observed");
  return {best->t, best->tts};
}

std::string_view to_string(ScalingRegime regime) {
  switch (regime) {
    case ScalingRegime::quantum_favorable: return "quantum_favorable";
    case ScalingRegime::parity: return "parity";
    case ScalingRegime::classical_favorable: return "classical_favorable";
  }
  return "unknown";
}

ScalingRegime classify_exponent(double a) {
  constexpr double tol = 1e-9;
  if (a < 1.0 - tol) return ScalingRegime::quantum_favorable;
  if (a > 1.0 + tol) return ScalingRegime::classical_favorable;
  return ScalingRegime::parity;
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
  std::set<double> abscissae;
  for (auto [c, q] : points) {
    if (!(c > 0.0 && q > 0.0) || !std::isfinite(c) || !std::isfinite(q))
      throw Error(ErrorCode::InvalidParameter, "TTS points must be positive and finite");
    abscissae.insert(c);
  }
  if (abscissae.size() < 2)
    throw Error(ErrorCode::DegenerateFit, "need at least two distinct classical TTS values");

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (auto [c, q] : points) {
    mx += std::log(c);
    my += std::log(q);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (auto [c, q] : points) {
    const double dx = std::log(c) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(q) - my);
  }

  ScalingFit fit;
  fit.exponent = sxy / sxx;
  const double log_b = my - fit.exponent * mx;
  fit.prefactor = std::exp(log_b);
  for (auto [c, q] : points) {
    const double r = std::log(q) - (log_b + fit.exponent * std::log(c));
    fit.residual += r * r;
  }
  fit.points.assign(points.begin(), points.end());
  fit.regime = classify_exponent(fit.exponent);
  return fit;
}

}  // namespace qms::metrics
