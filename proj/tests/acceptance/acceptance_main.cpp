// Release gate. Runs every statistical and exactness criterion at full
// sample size and prints one verdict line per criterion. Exit code 0 only
// when all of them hold.
#include <cstdio>
#include <cstdlib>
#include <exception>

#include "levysv/validation.hpp"

int main(int argc, char** argv) {
  unsigned workers = 0;
  if (argc > 1) workers = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));

  std::vector<levysv::CheckResult> results;
  try {
    results = levysv::validate_full(workers);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
    return 2;
  }

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    all = all && r.pass;
    std::printf("criterion %zu %s  %s  [%s]\n", i + 1,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s (%zu criteria)\n", all ? "ALL PASS" : "FAILURES PRESENT",
              results.size());
  return all ? 0 : 1;
}
