// Acceptance runner: executes every criterion of the validation suite at the
// full profile and prints one pass/fail line per criterion.

#include <cstdio>
#include <cstring>

#include "ftl/harness.hpp"

int main(int argc, char** argv) {
  ftl::SuiteConfig cfg;
  cfg.seed = 7;
  cfg.profile.seed = 7;
  cfg.sweep_graphs = 200;
  cfg.euler_instances = 1000;
  cfg.tz_graphs = 24;
  cfg.tz_n_max = 50;
  cfg.pack_samples = 50;
  cfg.determinism_graphs = 3;
  cfg.progress = true;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) {
      cfg.sweep_graphs = 4;
      cfg.euler_instances = 50;
      cfg.tz_graphs = 3;
      cfg.tz_n_max = 16;
      cfg.pack_samples = 5;
      cfg.determinism_graphs = 1;
      cfg.profile.n_max = 8;
      cfg.profile.m_max = 12;
    }
    if (!std::strcmp(argv[i], "--no-progress")) cfg.progress = false;
  }

  ftl::SuiteReport rep = ftl::validate_suite(cfg);
  for (const auto& c : rep.criteria) {
    std::printf("criterion %-70s %s  (%lld checks, %lld failed)%s%s\n",
                c.name.c_str(), c.pass ? "PASS" : "FAIL", c.checked, c.failed,
                c.detail.empty() ? "" : "  -- ", c.detail.c_str());
  }
  std::printf("acceptance: %s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}
