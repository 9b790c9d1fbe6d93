#pragma once

#include "spinbath/experiment.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spinbath {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  int workers = 0;
  std::uint64_t seed = 20260808;
  std::string scratch_dir;  // empty = no files written
};

// Acceptance criteria, numbered 1..15. Each runs a desk-scale version of
// the published setup at the stated tolerance.
CriterionResult run_criterion(int number, const AcceptanceOptions& opt);
int criterion_count();
std::string criterion_name(int number);

}  // namespace spinbath
