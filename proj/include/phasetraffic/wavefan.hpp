#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "phasetraffic/model.hpp"

namespace phasetraffic {

enum class WaveKind { Contact, Shock1, Rarefaction1, PhaseTransition, StationaryJump };

std::string to_string(WaveKind k);
WaveKind wave_kind_from_string(std::string_view s);

// Discontinuities carry speed_lo == speed_hi.
struct Wave {
  WaveKind kind = WaveKind::Contact;
  State left;
  State right;
  double speed_lo = 0.0;
  double speed_hi = 0.0;
  double marker = std::numeric_limits<double>::quiet_NaN();  // rarefactions only

  double speed() const { return speed_lo; }
  bool is_rarefaction() const { return kind == WaveKind::Rarefaction1; }
};

struct WaveFan {
  State left_state;
  State right_state;
  std::vector<Wave> waves;

  bool empty() const { return waves.empty(); }
};

// which trace to return when a discontinuity sits exactly at xi
enum class Trace { Minus, Plus };

State eval(const Model& m, const WaveFan& fan, double xi, Trace side = Trace::Plus);

struct AdmissibilityReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

AdmissibilityReport check_admissible(const Model& m, const WaveFan& fan);

enum class Coord { V, W };
double tv_of(const Model& m, const WaveFan& fan, Coord c);

// one header line, then one line per wave, 17 significant digits
std::string serialize(const WaveFan& fan);
WaveFan parse_fan(std::string_view text);

std::string format_g17(double x);

}  // namespace phasetraffic
