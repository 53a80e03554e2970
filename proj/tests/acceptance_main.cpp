#include <cstdio>
#include <cstdlib>
#include <string>

#include "eplab/acceptance.hpp"

// Usage: acceptance [-v] [criterion ids...]
int main(int argc, char** argv) {
    eplab::AcceptanceOptions opt;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "-v")
            verbose = true;
        else
            opt.only.push_back(std::atoi(argv[i]));
    }
    bool ok = true;
    for (const auto& r : eplab::run_acceptance(opt)) {
        std::printf("%s\n", r.summary_line().c_str());
        if (verbose)
            for (const auto& c : r.checks)
                std::printf("    %s %s: %s\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        ok = ok && r.passed();
    }
    return ok ? 0 : 1;
}
