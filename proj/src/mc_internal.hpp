#pragma once

// Shared internals of the Monte-Carlo estimators: per-region Jacobian cache
// and the common per-path setup. Not installed.

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <span>

#include "netval/errors.hpp"
#include "netval/gbm.hpp"
#include "netval/greeks.hpp"
#include "netval/network.hpp"
#include "netval/two_firm.hpp"

namespace netval::detail {

// One Jacobian per solvency pattern; the clearing map is piecewise linear so
// the derivative is constant on each region.
class JacobianCache {
public:
    explicit JacobianCache(const FirmNetwork& net) : net_(net) {}

    const Matrix& get(std::uint32_t mask) {
        const std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
        SolvencyState xi;
        xi.solvent.resize(net_.size());
        for (std::size_t i = 0; i < net_.size(); ++i)
            xi.solvent[i] = (mask >> i) & 1u;
        return cache_.emplace(mask, region_jacobian(xi, net_)).first->second;
    }

private:
    const FirmNetwork& net_;
    std::mutex mutex_;
    std::map<std::uint32_t, Matrix> cache_;
};

inline std::uint32_t region_mask(SuzukiRegion region) {
    switch (region) {
        case SuzukiRegion::SS: return 3u;
        case SuzukiRegion::SD: return 1u;
        case SuzukiRegion::DS: return 2u;
        case SuzukiRegion::DD: return 0u;
    }
    return 0u;
}

struct PathSetup {
    std::size_t n;
    double disc;
    TerminalSampler sampler;
    std::optional<TwoFirmKernel> kernel;

    PathSetup(const FirmNetwork& net, const MarketParams& params, std::span<const double> spot)
        : n(net.size()),
          disc(std::exp(-params.rate * params.tau())),
          sampler(params, spot),
          kernel(net.size() == 2 ? std::optional<TwoFirmKernel>(TwoFirmKernel(net))
                                 : std::nullopt) {
        require_valid(net);
        require_valid(params);
        if (params.size() != net.size())
            throw PreconditionError("market/network size mismatch");
        if (net.size() > 32)
            throw PreconditionError("solvency patterns are tracked for up to 32 firms");
    }

    std::uint32_t solvency_mask(const FirmNetwork& net, std::span<const double> a_T) const {
        if (n == 1) return a_T[0] >= net.debt[0] ? 1u : 0u;
        if (n == 2) return region_mask(kernel->evaluate(a_T[0], a_T[1]).region);
        const ClearingResult res = solve_clearing(a_T, net);
        return solvency_state(a_T, res.claims, net).mask();
    }

    // Clearing values (s block then r block) at the given terminal assets.
    void clearing_values(const FirmNetwork& net, std::span<const double> a_T,
                         std::span<double> vals) const {
        if (n == 1) {
            vals[0] = std::max(0.0, a_T[0] - net.debt[0]);
            vals[1] = std::min(net.debt[0], a_T[0]);
        } else if (n == 2) {
            const auto p = kernel->evaluate(a_T[0], a_T[1]);
            vals[0] = p.s1;
            vals[1] = p.s2;
            vals[2] = p.r1;
            vals[3] = p.r2;
        } else {
            const ClearingResult res = solve_clearing(a_T, net);
            for (std::size_t i = 0; i < n; ++i) {
                vals[i] = res.claims.s[i];
                vals[n + i] = res.claims.r[i];
            }
        }
    }
};

}  // namespace netval::detail
