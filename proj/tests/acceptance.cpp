// One line per acceptance criterion: [PASS] or [FAIL], id, suite, detail.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "harness/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  std::uint64_t seed = tiltlab::harness::kDefaultSeed;
  bool json_out = false;
  app.add_option("--criterion", criterion, "criterion number; 0 runs all")
      ->check(CLI::Range(0, static_cast<int>(tiltlab::harness::suite_ids().size())));
  app.add_option("--seed", seed, "base seed");
  app.add_flag("--json", json_out, "also print metrics as JSON");
  CLI11_PARSE(app, argc, argv);

  const auto& ids = tiltlab::harness::suite_ids();
  bool ok = true;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (criterion != 0 && static_cast<std::size_t>(criterion) != i + 1) continue;
    const auto r = tiltlab::harness::run_suite(ids[i], seed);
    ok = ok && r.pass;
    std::printf("[%s] %2d %-20s %s (%.2f s, budget %.0f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.suite.c_str(),
                r.detail.c_str(), r.seconds, r.budget_seconds);
    if (json_out) std::cout << r.metrics.dump(2) << '\n';
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
