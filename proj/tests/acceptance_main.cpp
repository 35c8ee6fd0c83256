#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hrde/acceptance.hpp"

int main(int argc, char** argv) {
  bool quiet = false;
  std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quiet") == 0) {
      quiet = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      ids.clear();
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) ids.push_back(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--quiet] [--only 1,2,...]\n";
      return 2;
    }
  }
  int failed = 0;
  for (const auto& r : hrde::run_acceptance_suite(ids)) {
    failed += r.passed ? 0 : 1;
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title;
    if (!quiet) {
      std::cout << ": " << r.detail << '\n';
      for (const auto& n : r.notes) std::cout << "       note: " << n << '\n';
    } else {
      std::cout << '\n';
    }
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << '\n';
  return failed ? 1 : 0;
}
