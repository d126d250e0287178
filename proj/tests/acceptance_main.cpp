// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is 0 only if all criteria pass.

#include <iostream>
#include <string_view>

#include "qmsd/acceptance.hpp"

int main(int argc, char** argv) {
  qmsd::acceptance::Options opts;
  for (int i = 1; i < argc; ++i)
    if (std::string_view(argv[i]) == "--fast") opts.fast = true;
  const auto results = qmsd::acceptance::run_all(opts);
  qmsd::acceptance::print_results(std::cout, results);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
