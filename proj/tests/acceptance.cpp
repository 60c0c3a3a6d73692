// Acceptance suite: runs every fixture criterion at full scale and prints one
// pass/fail line per criterion.  Exit code 0 iff all pass.
//
//   ./acceptance [--quick] [--seed N] [--jobs N]

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "t310/selftest.hpp"

int main(int argc, char** argv) {
    t310::SelftestOptions opt;
    opt.jobs = int(std::thread::hardware_concurrency());
    if (opt.jobs < 1) opt.jobs = 1;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0)
            opt.quick = true;
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc)
            opt.jobs = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--quick] [--seed N] [--jobs N]\n", argv[0]);
            return 2;
        }
    }

    int failed = 0;
    for (const t310::CriterionResult& r : t310::run_selftest(opt)) {
        std::printf("[%s] criterion %2d: %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
        if (!r.detail.empty()) std::printf("  (%s)", r.detail.c_str());
        std::printf("\n");
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    if (failed) {
        std::printf("%d criterion(s) FAILED\n", failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
