#pragma once

#include <string>
#include <vector>

namespace polylip::acceptance {

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

int criterion_count();
Result run_criterion(int id);
std::vector<Result> run_all();

// "[PASS] 1 title (0.12 s): detail"
std::string format_line(const Result& r);

}  // namespace polylip::acceptance
