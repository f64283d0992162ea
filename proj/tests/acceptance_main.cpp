// Runs every acceptance criterion at full size and prints one line per criterion.
// Usage: acceptance [seed]

#include <cstdlib>
#include <iostream>
#include <string>

#include "qcompat/acceptance.hpp"

int main(int argc, char** argv) {
  qcompat::AcceptanceOptions options;
  if (argc > 1) options.seed = std::stoull(argv[1]);
  const qcompat::AcceptanceReport report = qcompat::run_acceptance(options, &std::cout);
  std::cout << (report.all_pass() ? "all criteria passed" : "some criteria failed") << std::endl;
  return report.all_pass() ? EXIT_SUCCESS : EXIT_FAILURE;
}
