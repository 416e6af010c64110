#pragma once

#include <span>

#include "netval/network.hpp"

namespace netval {

// Joint solvency pattern of two firms at maturity: S = solvent, D = defaulted,
// first letter firm 1.
enum class SuzukiRegion { SS, SD, DS, DD };

const char* to_string(SuzukiRegion r);
int region_index(SuzukiRegion r);  // SS=0, SD=1, DS=2, DD=3

// Maps a solvency bitmask (bit 0 = firm 1 solvent, bit 1 = firm 2 solvent).
SuzukiRegion region_from_mask(std::uint32_t mask);

// Closed-form two-firm clearing. The fixed point is piecewise linear in the
// terminal assets: on each solvency region the max/min kinks are resolved
// and the remaining 2x2 linear system solves explicitly. The kernel
// precomputes the region denominators so per-path evaluation inside a
// Monte-Carlo loop is a handful of multiplies.
class TwoFirmKernel {
public:
    explicit TwoFirmKernel(const FirmNetwork& net);

    struct Payoff {
        double s1, s2, r1, r2;
        SuzukiRegion region;
    };

    // Fixed point at terminal assets (a1, a2). Exactly one region's candidate
    // solution satisfies its own solvency conditions (boundaries v_i = d_i
    // count as solvent); that candidate is returned.
    Payoff evaluate(double a1, double a2) const;

    double d1() const { return d1_; }
    double d2() const { return d2_; }

private:
    double d1_, d2_;
    double ms12_, ms21_, md12_, md21_;
    double inv_ss_, inv_sd_, inv_ds_, inv_dd_;
};

// Region of the unique clearing fixed point at the given terminal assets,
// classified from the converged iterative solution's solvency state.
SuzukiRegion classify_region(std::span<const double> assets, const FirmNetwork& net);

// The region-conditional closed-form payoff (equivalent to solve_clearing,
// exact rather than iterated).
ClaimVector closed_form_payoff(std::span<const double> assets, const FirmNetwork& net);

}  // namespace netval
