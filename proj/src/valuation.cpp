#include "netval/valuation.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "netval/errors.hpp"
#include "netval/mc.hpp"
#include "netval/rng.hpp"
#include "netval/two_firm.hpp"

namespace netval {

PriceEstimate price_claims(const FirmNetwork& net, const MarketParams& params,
                           std::span<const double> spot, std::size_t n_paths,
                           std::uint64_t seed, double clearing_tol) {
    require_valid(net);
    require_valid(params);
    if (params.size() != net.size()) throw PreconditionError("price_claims: market/network size mismatch");
    if (n_paths < 2) throw PreconditionError("price_claims: need at least 2 paths");
    if (!(clearing_tol > 0.0)) throw PreconditionError("price_claims: clearing_tol must be positive");

    const std::size_t n = net.size();
    const std::size_t m = 2 * n;
    const double disc = std::exp(-params.rate * params.tau());
    const TerminalSampler sampler(params, spot);
    const std::optional<TwoFirmKernel> kernel =
        n == 2 ? std::optional<TwoFirmKernel>(TwoFirmKernel(net)) : std::nullopt;

    const std::size_t nb = mc_block_count(n_paths);
    std::vector<double> partial(nb * 2 * m, 0.0);
    McErrorCollector errors;

    for_each_mc_block(n_paths, [&](std::size_t b, std::size_t begin, std::size_t end) {
        errors.run([&] {
            std::vector<double> z(n), a_T(n), vals(m);
            double* sums = partial.data() + b * 2 * m;
            for (std::size_t k = begin; k < end; ++k) {
                for (std::size_t dim = 0; dim < n; ++dim)
                    z[dim] = normal_variate(seed, k, std::uint32_t(dim));
                sampler.sample(z, a_T);
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
                    ClearingResult res;
                    try {
                        res = solve_clearing(a_T, net, clearing_tol);
                    } catch (const NonConvergenceError& e) {
                        std::ostringstream os;
                        os << e.what() << " (path " << k << ", terminal assets:";
                        for (double a : a_T) os << ' ' << a;
                        os << ")";
                        throw NonConvergenceError(os.str());
                    }
                    for (std::size_t i = 0; i < n; ++i) {
                        vals[i] = res.claims.s[i];
                        vals[n + i] = res.claims.r[i];
                    }
                }
                for (std::size_t c = 0; c < m; ++c) {
                    const double v = disc * vals[c];
                    sums[c] += v;
                    sums[m + c] += v * v;
                }
            }
        });
    });
    errors.rethrow_if_failed();

    std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t c = 0; c < m; ++c) {
            sum[c] += partial[b * 2 * m + c];
            sumsq[c] += partial[b * 2 * m + m + c];
        }

    PriceEstimate est;
    est.claims = ClaimVector(n);
    est.se.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        const double mean = sum[c] / double(n_paths);
        (c < n ? est.claims.s[c] : est.claims.r[c - n]) = mean;
        est.se[c] = se_of_mean(sum[c], sumsq[c], n_paths);
    }
    est.n_paths = n_paths;
    est.seed = seed;
    return est;
}

namespace {

void check_bs_args(double spot, double strike, double sigma, double tau) {
    if (!(spot > 0.0 && strike > 0.0 && sigma > 0.0 && tau > 0.0))
        throw PreconditionError("Black-Scholes inputs must be positive");
}

}  // namespace

double d_plus(double spot, double strike, double rate, double sigma, double tau) {
    check_bs_args(spot, strike, sigma, tau);
    return (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / (sigma * std::sqrt(tau));
}

double d_minus(double spot, double strike, double rate, double sigma, double tau) {
    return d_plus(spot, strike, rate, sigma, tau) - sigma * std::sqrt(tau);
}

double merton_call(double spot, double strike, double rate, double sigma, double tau) {
    const double dp = d_plus(spot, strike, rate, sigma, tau);
    const double dm = dp - sigma * std::sqrt(tau);
    return spot * normal_cdf(dp) - strike * std::exp(-rate * tau) * normal_cdf(dm);
}

double merton_put(double spot, double strike, double rate, double sigma, double tau) {
    const double dp = d_plus(spot, strike, rate, sigma, tau);
    const double dm = dp - sigma * std::sqrt(tau);
    return strike * std::exp(-rate * tau) * normal_cdf(-dm) - spot * normal_cdf(-dp);
}

double conditional_asset_expectation(double spot, double strike, double rate, double sigma,
                                     double tau) {
    const double dp = d_plus(spot, strike, rate, sigma, tau);
    const double dm = dp - sigma * std::sqrt(tau);
    const double denom = normal_cdf(dm);
    if (denom < 1e-300)
        throw ConditioningDegenerateError(
            "conditional_asset_expectation: P(A_T >= strike) underflows");
    return spot * std::exp(rate * tau) * normal_cdf(dp) / denom;
}

}  // namespace netval
