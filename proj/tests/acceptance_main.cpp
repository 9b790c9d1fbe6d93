// Acceptance suite: one pass/fail line per criterion. Exit code 0 when all
// requested criteria pass, 1 otherwise.

#include "spinbath/acceptance.hpp"

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  using namespace spinbath;

  std::vector<int> requested;
  AcceptanceOptions opt;
  opt.scratch_dir = "acceptance_scratch";

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      requested.push_back(std::atoi(argv[++i]));
    } else if (arg == "--workers" && i + 1 < argc) {
      opt.workers = std::atoi(argv[++i]);
    } else if (arg == "--seed" && i + 1 < argc) {
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--out" && i + 1 < argc) {
      opt.scratch_dir = argv[++i];
    } else if (arg == "--list") {
      for (int n = 1; n <= criterion_count(); ++n)
        std::printf("%2d  %s\n", n, criterion_name(n).c_str());
      return 0;
    } else {
      std::fprintf(stderr,
                   "usage: %s [--criterion N]... [--workers N] [--seed N] "
                   "[--out DIR] [--list]\n",
                   argv[0]);
      return 2;
    }
  }
  if (requested.empty())
    for (int n = 1; n <= criterion_count(); ++n) requested.push_back(n);

  bool all_pass = true;
  for (int n : requested) {
    CriterionResult res;
    try {
      res = run_criterion(n, opt);
    } catch (const std::exception& e) {
      res.number = n;
      res.name = criterion_name(n);
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d (%s): %s\n", res.pass ? "PASS" : "FAIL",
                n, criterion_name(n).c_str(), res.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && res.pass;
  }
  return all_pass ? 0 : 1;
}
