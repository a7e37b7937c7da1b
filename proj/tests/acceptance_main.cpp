// Acceptance-suite driver: runs all criteria (or one, with --criterion k) and
// prints a pass/fail line per criterion. Exit code is the failure count.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "fluctlab/acceptance.hpp"

int main(int argc, char** argv) {
  int criterion = 0;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion k] [--threads n]\n", argv[0]);
      return 64;
    }
  }
  if (threads <= 0) {
    if (const char* env = std::getenv("FLUCTLAB_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }

  int failures = 0;
  if (criterion > 0) {
    const auto r = fluctlab::run_acceptance_criterion(criterion, threads);
    std::printf("[%s] criterion %d: %s -- %s\n", r.pass ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.detail.c_str());
    failures = r.pass ? 0 : 1;
  } else {
    for (const auto& r : fluctlab::run_acceptance_suite(threads, stdout))
      if (!r.pass) ++failures;
  }
  return failures;
}
