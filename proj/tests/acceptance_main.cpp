#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "stable_ergo/acceptance.hpp"

// Prints one line per acceptance criterion; exit status 0 iff none failed.
// --quick skips the long-running criteria.
int main(int argc, char** argv) {
  stable_ergo::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  }
  const auto results = stable_ergo::run_acceptance(opt, [](const stable_ergo::CriterionResult& r) {
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
  });
  return stable_ergo::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
