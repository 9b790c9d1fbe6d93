#pragma once

#include <string>
#include <vector>

namespace spinbath {

// Ideal instantaneous pi pulses on the central spin's tracked two-level
// subspace. Pulse times are fractions of the total evolution time.
struct PulseSequence {
  enum class Kind { fid, hahn, cpmg, xy4 };

  Kind kind = Kind::hahn;
  int repetitions = 1;             // CPMG N or XY4 repeat count
  std::vector<double> fractions;   // ascending, in (0, 1)
  std::vector<double> phases_rad;  // rotation axis phase per pulse

  static PulseSequence fid();
  static PulseSequence hahn_echo();
  static PulseSequence cpmg(int n);
  static PulseSequence xy4(int reps = 1);
  static PulseSequence from_string(const std::string& name);

  int num_pulses() const { return static_cast<int>(fractions.size()); }
  std::vector<double> segment_durations(double total_time) const;
  std::string name() const;
};

}  // namespace spinbath
