#include "spinbath/pulses.hpp"

#include "spinbath/errors.hpp"
#include "spinbath/units.hpp"

#include <sstream>

namespace spinbath {

PulseSequence PulseSequence::fid() {
  PulseSequence s;
  s.kind = Kind::fid;
  return s;
}

PulseSequence PulseSequence::hahn_echo() {
  PulseSequence s;
  s.kind = Kind::hahn;
  s.fractions = {0.5};
  s.phases_rad = {0.0};
  return s;
}

PulseSequence PulseSequence::cpmg(int n) {
  if (n < 1) throw ConfigError("CPMG repetition count must be >= 1");
  PulseSequence s;
  s.kind = Kind::cpmg;
  s.repetitions = n;
  for (int k = 1; k <= n; ++k) {
    s.fractions.push_back((2.0 * k - 1.0) / (2.0 * n));
    s.phases_rad.push_back(kPi / 2.0);  // Y pulses
  }
  return s;
}

PulseSequence PulseSequence::xy4(int reps) {
  if (reps < 1) throw ConfigError("XY4 repeat count must be >= 1");
  PulseSequence s;
  s.kind = Kind::xy4;
  s.repetitions = reps;
  const int n = 4 * reps;
  for (int k = 1; k <= n; ++k) {
    s.fractions.push_back((2.0 * k - 1.0) / (2.0 * n));
    s.phases_rad.push_back((k % 2 == 1) ? 0.0 : kPi / 2.0);  // X,Y,X,Y
  }
  return s;
}

PulseSequence PulseSequence::from_string(const std::string& name) {
  if (name == "fid") return fid();
  if (name == "hahn") return hahn_echo();
  if (name == "xy4") return xy4();
  if (name.rfind("cpmg", 0) == 0) {
    const std::string arg = name.substr(4);
    return cpmg(arg.empty() ? 1 : std::stoi(arg));
  }
  if (name.rfind("xy4x", 0) == 0) return xy4(std::stoi(name.substr(4)));
  throw ConfigError("unknown pulse sequence '" + name +
                    "' (fid|hahn|cpmgN|xy4)");
}

std::vector<double> PulseSequence::segment_durations(double total_time) const {
  std::vector<double> d;
  double prev = 0.0;
  for (double f : fractions) {
    d.push_back((f - prev) * total_time);
    prev = f;
  }
  d.push_back((1.0 - prev) * total_time);
  return d;
}

std::string PulseSequence::name() const {
  switch (kind) {
    case Kind::fid: return "fid";
    case Kind::hahn: return "hahn";
    case Kind::cpmg: {
      std::ostringstream os;
      os << "cpmg" << repetitions;
      return os.str();
    }
    case Kind::xy4: return repetitions == 1 ? "xy4" : "xy4x" + std::to_string(repetitions);
  }
  return "?";
}

}  // namespace spinbath
