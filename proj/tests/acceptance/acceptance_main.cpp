#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

// Usage: acceptance [id ...]; no ids runs every criterion.
int main(int argc, char** argv) {
  namespace acc = polylip::acceptance;
  bool all_pass = true;
  int ran = 0;
  auto run = [&](int id) {
    acc::Result r = acc::run_criterion(id);
    std::cout << acc::format_line(r) << std::endl;
    all_pass = all_pass && r.pass;
    ++ran;
  };
  for (int i = 1; i < argc; ++i) {
    int id = std::atoi(argv[i]);
    if (id < 1 || id > acc::criterion_count()) {
      std::cerr << "acceptance: unknown criterion " << argv[i] << "\n";
      return 2;
    }
    run(id);
  }
  if (argc == 1)
    for (int id = 1; id <= acc::criterion_count(); ++id) run(id);
  std::cout << (all_pass ? "ALL PASS" : "FAILURES") << " (" << ran << " criteria)" << std::endl;
  return all_pass ? 0 : 1;
}
