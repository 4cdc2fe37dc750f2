#pragma once

#include "arqft/ternary.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace arqft {

struct RunConfig {
    std::uint32_t p = 5;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double tol = 1e-8;
    std::string cache_dir;   // ARQFT_CACHE when not given
    std::string out_dir;     // artifacts go here when set, else to stdout
    std::uint64_t budget = 400'000'000;
};

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitBudget = 4;

// the two forms of the worked example over F_5
TernaryForm example_form_q1();
TernaryForm example_form_q2();

// full command line, argv[0] included; never throws
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arqft
