#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "cornex/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (int id = 1; id <= 9; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto r = cornex::run_criterion(id);
    std::printf("%s\n", cornex::summary_line(r).c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : 1;
}
