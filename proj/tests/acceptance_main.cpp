#include <iostream>

#include "msflow/acceptance.hpp"

int main() {
  const auto results = msflow::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << msflow::format_line(r) << "\n";
    if (!r.pass) ++failed;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
