// Acceptance suite: runs the built-in verification fixtures and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <cstdio>
#include <string>

#include "cypipe/io.hpp"
#include "cypipe/verify.hpp"

int main(int argc, char** argv) {
    const std::string scratch = argc > 1 ? argv[1] : "acceptance_scratch";
    cypipe::ensure_directory(scratch);
    const auto outcomes = cypipe::verify::run_acceptance(scratch);
    int failures = 0;
    int index = 0;
    for (const auto& c : outcomes) {
        ++index;
        std::printf("criterion %2d: %s  %s", index, c.pass ? "PASS" : "FAIL",
                    c.name.c_str());
        if (!c.detail.empty()) std::printf("  [%s]", c.detail.c_str());
        std::printf("\n");
        if (!c.pass) ++failures;
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
