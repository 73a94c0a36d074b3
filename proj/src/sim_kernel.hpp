#pragma once

#include <cstdint>

namespace debtgame::detail {

struct KernelSetup {
    double x_start;    ///< state after the t = 0 jump
    double lower;      ///< 0 when there is no lower threshold
    double upper;      ///< largest double when there is no ceiling
    double drift_dt;   ///< (r - g - sigma^2/2) dt
    double vol_sqrt_dt;
    double dt;
    std::int64_t steps;
    double rho, lambda, alpha, kappa, m, c1, c2;
    bool antithetic;
};

/// Number of replicates a block of units produces.
constexpr int kBlock = 64;

/// Simulates units [first, first + count) with count <= kBlock.  Each unit is
/// an antithetic pair (one replicate, the pair mean) or two independent paths
/// (two replicates).  Costs exclude the t = 0 jump.
void run_block(const KernelSetup& setup, const std::uint64_t* keys, int count,
               double* gov_out, double* leg_out);

std::uint64_t mix64(std::uint64_t z);

}  // namespace debtgame::detail
