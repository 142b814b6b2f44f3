// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <opensys/laws/criteria.hpp>

#include <cstdio>
#include <cstring>

int main(int argc, char** argv) {
    int failed = 0;
    for (const auto& c : suite::acceptance_criteria()) {
        if (argc > 1 && std::strcmp(argv[1], c.name) != 0) continue;
        auto v = suite::timed(c.run);
        std::printf("%s %s (%.2fs) %s\n", v.ok ? "PASS" : "FAIL", c.name, v.seconds, v.detail.c_str());
        std::fflush(stdout);
        failed += !v.ok;
    }
    return failed == 0 ? 0 : 1;
}
