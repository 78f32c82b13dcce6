// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
//
//   acceptance [--skip-slow] [testdata-dir]

#include <iostream>
#include <string>

#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
  bool skip_slow = false;
  std::string testdata = CASIMIR_TESTDATA_DIR;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--skip-slow") {
      skip_slow = true;
    } else {
      testdata = a;
    }
  }
  int failed = 0;
  casimir::acceptance::run(testdata, skip_slow, [&](const casimir::acceptance::Outcome& o) {
    std::cout << o.line() << std::endl;
    if (!o.pass && !o.skipped) ++failed;
  });
  std::cout << (failed ? "acceptance: FAIL (" + std::to_string(failed) + " criteria)" : "acceptance: all criteria pass")
            << std::endl;
  return failed ? 1 : 0;
}
