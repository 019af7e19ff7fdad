// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <string>

#include "ricci/validation/acceptance.hpp"

int main(int argc, char** argv) {
  ricci::validation::ValidationOptions options;
  if (argc > 1) options.filter = argv[1];
  bool ok = true;
  for (const auto& r : ricci::validation::run_validation(options)) {
    std::printf("%s\n", ricci::validation::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
