#include "netval/two_firm.hpp"

#include <cmath>

#include "netval/errors.hpp"

namespace netval {

const char* to_string(SuzukiRegion r) {
    switch (r) {
        case SuzukiRegion::SS: return "SS";
        case SuzukiRegion::SD: return "SD";
        case SuzukiRegion::DS: return "DS";
        case SuzukiRegion::DD: return "DD";
    }
    return "??";
}

int region_index(SuzukiRegion r) {
    return static_cast<int>(r);
}

SuzukiRegion region_from_mask(std::uint32_t mask) {
    const bool s1 = mask & 1u, s2 = mask & 2u;
    if (s1 && s2) return SuzukiRegion::SS;
    if (s1) return SuzukiRegion::SD;
    if (s2) return SuzukiRegion::DS;
    return SuzukiRegion::DD;
}

TwoFirmKernel::TwoFirmKernel(const FirmNetwork& net) {
    if (net.size() != 2) throw NotTwoFirmsError("TwoFirmKernel: network must have exactly two firms");
    require_valid(net);
    d1_ = net.debt[0];
    d2_ = net.debt[1];
    ms12_ = net.ms(0, 1);
    ms21_ = net.ms(1, 0);
    md12_ = net.md(0, 1);
    md21_ = net.md(1, 0);
    // All four denominators are products of holding fractions < 1.
    inv_ss_ = 1.0 / (1.0 - ms12_ * ms21_);
    inv_sd_ = 1.0 / (1.0 - md12_ * ms21_);  // firm 1 solvent, firm 2 defaulted
    inv_ds_ = 1.0 / (1.0 - ms12_ * md21_);
    inv_dd_ = 1.0 / (1.0 - md12_ * md21_);
}

TwoFirmKernel::Payoff TwoFirmKernel::evaluate(double a1, double a2) const {
    // Both solvent: r = d, the equity pair solves a linear 2x2 system.
    {
        const double s1 = (a1 - d1_ + md12_ * d2_ + ms12_ * (a2 - d2_ + md21_ * d1_)) * inv_ss_;
        const double s2 = (a2 - d2_ + md21_ * d1_ + ms21_ * (a1 - d1_ + md12_ * d2_)) * inv_ss_;
        if (s1 >= 0.0 && s2 >= 0.0) return {s1, s2, d1_, d2_, SuzukiRegion::SS};
    }
    // Firm 1 solvent, firm 2 defaulted: s2 = 0, r1 = d1, firm 2 pays out its
    // whole value r2 = v2, which feeds back into s1 through md12.
    {
        const double s1 = (a1 - d1_ + md12_ * (a2 + md21_ * d1_)) * inv_sd_;
        const double r2 = a2 + md21_ * d1_ + ms21_ * s1;
        if (s1 >= 0.0 && r2 < d2_) return {s1, 0.0, d1_, r2, SuzukiRegion::SD};
    }
    // Mirror image of the previous case.
    {
        const double s2 = (a2 - d2_ + md21_ * (a1 + md12_ * d2_)) * inv_ds_;
        const double r1 = a1 + md12_ * d2_ + ms12_ * s2;
        if (s2 >= 0.0 && r1 < d1_) return {0.0, s2, r1, d2_, SuzukiRegion::DS};
    }
    // Both defaulted: only the debt recoveries circulate.
    {
        const double r1 = (a1 + md12_ * a2) * inv_dd_;
        const double r2 = (a2 + md21_ * a1) * inv_dd_;
        if (r1 < d1_ && r2 < d2_) return {0.0, 0.0, r1, r2, SuzukiRegion::DD};
    }
    // Unreachable for valid inputs (the fixed point is unique and lands in
    // exactly one region); guard against pathological rounding at a corner
    // by settling the tie towards joint solvency.
    const double s1 = (a1 - d1_ + md12_ * d2_ + ms12_ * (a2 - d2_ + md21_ * d1_)) * inv_ss_;
    const double s2 = (a2 - d2_ + md21_ * d1_ + ms21_ * (a1 - d1_ + md12_ * d2_)) * inv_ss_;
    return {std::max(s1, 0.0), std::max(s2, 0.0), d1_, d2_, SuzukiRegion::SS};
}

SuzukiRegion classify_region(std::span<const double> assets, const FirmNetwork& net) {
    if (net.size() != 2) throw NotTwoFirmsError("classify_region: network must have exactly two firms");
    const ClearingResult res = solve_clearing(assets, net);
    const SolvencyState st = solvency_state(assets, res.claims, net);
    return region_from_mask(st.mask());
}

ClaimVector closed_form_payoff(std::span<const double> assets, const FirmNetwork& net) {
    if (net.size() != 2) throw NotTwoFirmsError("closed_form_payoff: network must have exactly two firms");
    if (assets.size() != 2) throw Error("closed_form_payoff: need two asset values");
    const TwoFirmKernel kernel(net);
    const auto p = kernel.evaluate(assets[0], assets[1]);
    ClaimVector c(2);
    c.s = {p.s1, p.s2};
    c.r = {p.r1, p.r2};
    return c;
}

}  // namespace netval
