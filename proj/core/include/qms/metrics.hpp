#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qms::metrics {

inline constexpr double kDefaultDelta = 0.9;

/// Time to solution t * ln(1 - delta) / ln(1 - p). Infinite for p == 0;
/// exactly t for p == 1 (a single run is the floor).
double tts(int t, double p, double delta = kDefaultDelta);

struct TtsEntry {
  int t = 0;
  double p = 0.0;
  double tts = 0.0;
};

struct TtsCurve {
  std::vector<TtsEntry> entries;
  double delta = kDefaultDelta;
};

/// Curve over t = first_t, first_t + 1, ... from consecutive p values.
TtsCurve make_tts_curve(int first_t, std::span<const double> p, double delta = kDefaultDelta);

struct MinTts {
  int t = 0;
  double tts = 0.0;
};

/// Smallest TTS, ties toward smaller t. Throws NoSolutionSignal when every
/// entry is infinite.
MinTts min_tts(const TtsCurve& curve);

enum class ScalingRegime { quantum_favorable, parity, classical_favorable };
std::string_view to_string(ScalingRegime regime);

/// log(qTTS) = log(b) + a log(cTTS) by ordinary least squares.
struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> points;
  ScalingRegime regime = ScalingRegime::parity;
};

/// a < 1 means quantum TTS grows more slowly than classical TTS.
ScalingRegime classify_exponent(double a);

/// Points are (cTTS, qTTS), all positive and finite. Throws DegenerateFit
/// with fewer than two distinct cTTS values.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

}  // namespace qms::metrics
