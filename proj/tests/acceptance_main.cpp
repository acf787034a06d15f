// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. `--reduction N` divides the workloads for smoke runs; the
// default runs the full stated counts.

#include "selftest.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

int main(int argc, char** argv) {
  crpt::selftest::Options opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--reduction") == 0 && i + 1 < argc) {
      opts.reduction = std::atoi(argv[++i]);
      if (opts.reduction < 1) opts.reduction = 1;
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    }
  }
  if (const char* env = std::getenv("CRPOINT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0 && opts.threads <= 1) opts.threads = v;
  }

  bool all = true;
  double total = 0;
  for (int id = 1; id <= 8; ++id) {
    crpt::selftest::CriterionResult r = crpt::selftest::run_criterion(id, opts);
    std::printf("[%s] criterion %d: %s (%.2fs) — %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
    total += r.seconds;
  }
  std::printf("%s in %.1fs\n", all ? "ALL CRITERIA PASS" : "CRITERIA FAILED", total);
  return all ? 0 : 1;
}
