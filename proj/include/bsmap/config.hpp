#pragma once

#include <cstdint>

namespace bsmap {

// All comparisons route through these; defaults follow the library contract.
struct Tolerances {
    double eps_point = 1e-9;   // circle-point equality (radians)
    double eps_mat = 1e-12;    // matrix residuals
    double eps_trace = 1e-9;   // |trace| vs 2 in classification
    double eps_geo = 1e-8;     // geodesic coincidence (endpoint angles)
    double eps_cycle = 1e-6;   // orbit recurrence candidate threshold
};

struct Caps {
    long max_iter = 20000;      // f_alpha steps per orbit in markov_check
    long max_size = 50000;      // |W_alpha| bound
    int ell_max = 200;          // matching-set budget
    double residual_target = 1e-9;
    int matching_cap = 500;     // matching_index giant-step cap
};

struct Config {
    unsigned precision_bits = 256;  // >= 64
    Tolerances tol;
    Caps caps;
    int grid = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware default
};

}  // namespace bsmap
