#include "netval/greeks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mc_internal.hpp"
#include "netval/errors.hpp"
#include "netval/mc.hpp"
#include "netval/rng.hpp"

namespace netval {

Matrix region_jacobian(const SolvencyState& xi, const FirmNetwork& net) {
    require_valid(net);
    const std::size_t n = net.size();
    if (xi.size() != n) throw Error("region_jacobian: solvency state size mismatch");

    Matrix system = Matrix::identity(2 * n);
    Matrix rhs(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = xi.solvent[i] ? 1.0 : 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            system(i, j) -= w * net.ms(i, j);
            system(i, n + j) -= w * net.md(i, j);
            system(n + i, j) -= (1.0 - w) * net.ms(i, j);
            system(n + i, n + j) -= (1.0 - w) * net.md(i, j);
        }
        rhs(i, i) = w;
        rhs(n + i, i) = 1.0 - w;
    }
    return solve(std::move(system), std::move(rhs));
}

DeltaMatrix pathwise_delta(const FirmNetwork& net, const MarketParams& params,
                           std::span<const double> spot, std::size_t n_paths,
                           std::uint64_t seed) {
    if (n_paths < 2) throw PreconditionError("pathwise_delta: need at least 2 paths");
    const detail::PathSetup setup(net, params, spot);
    const std::size_t n = setup.n;
    const std::size_t entries = 2 * n * n;
    detail::JacobianCache cache(net);

    const std::size_t nb = mc_block_count(n_paths);
    std::vector<double> partial(nb * 2 * entries, 0.0);
    McErrorCollector errors;

    for_each_mc_block(n_paths, [&](std::size_t b, std::size_t begin, std::size_t end) {
        errors.run([&] {
            std::vector<double> z(n), a_T(n);
            double* sums = partial.data() + b * 2 * entries;
            for (std::size_t k = begin; k < end; ++k) {
                for (std::size_t dim = 0; dim < n; ++dim)
                    z[dim] = normal_variate(seed, k, std::uint32_t(dim));
                setup.sampler.sample(z, a_T);
                const Matrix& jac = cache.get(setup.solvency_mask(net, a_T));
                for (std::size_t j = 0; j < n; ++j) {
                    const double growth = setup.disc * a_T[j] / spot[j];
                    for (std::size_t i = 0; i < 2 * n; ++i) {
                        const double v = jac(i, j) * growth;
                        sums[i * n + j] += v;
                        sums[entries + i * n + j] += v * v;
                    }
                }
            }
        });
    });
    errors.rethrow_if_failed();

    DeltaMatrix out;
    out.value = Matrix(2 * n, n);
    out.se = Matrix(2 * n, n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                sum += partial[b * 2 * entries + i * n + j];
                sumsq += partial[b * 2 * entries + entries + i * n + j];
            }
            out.value(i, j) = sum / double(n_paths);
            out.se(i, j) = se_of_mean(sum, sumsq, n_paths);
        }
    out.n_paths = n_paths;
    out.seed = seed;
    return out;
}

DeltaMatrix finite_difference_delta(const FirmNetwork& net, const MarketParams& params,
                                    std::span<const double> spot, double bump,
                                    std::size_t n_paths, std::uint64_t seed) {
    if (!(bump > 0.0 && bump <= 0.1))
        throw PreconditionError("finite_difference_delta: bump must lie in (0, 0.1]");
    if (n_paths < 2) throw PreconditionError("finite_difference_delta: need at least 2 paths");
    const detail::PathSetup setup(net, params, spot);
    const std::size_t n = setup.n;
    const std::size_t entries = 2 * n * n;

    const std::size_t nb = mc_block_count(n_paths);
    std::vector<double> partial(nb * 2 * entries, 0.0);
    McErrorCollector errors;

    for_each_mc_block(n_paths, [&](std::size_t b, std::size_t begin, std::size_t end) {
        errors.run([&] {
            std::vector<double> z(n), a_T(n), a_bumped(n), up(2 * n), dn(2 * n);
            double* sums = partial.data() + b * 2 * entries;
            for (std::size_t k = begin; k < end; ++k) {
                for (std::size_t dim = 0; dim < n; ++dim)
                    z[dim] = normal_variate(seed, k, std::uint32_t(dim));
                setup.sampler.sample(z, a_T);
                for (std::size_t j = 0; j < n; ++j) {
                    // A_T is linear in the spot, so bumping spot_j rescales
                    // component j of the common draw.
                    std::copy(a_T.begin(), a_T.end(), a_bumped.begin());
                    a_bumped[j] = a_T[j] * (1.0 + bump);
                    setup.clearing_values(net, a_bumped, up);
                    a_bumped[j] = a_T[j] * (1.0 - bump);
                    setup.clearing_values(net, a_bumped, dn);
                    const double scale = setup.disc / (2.0 * bump * spot[j]);
                    for (std::size_t i = 0; i < 2 * n; ++i) {
                        const double v = (up[i] - dn[i]) * scale;
                        sums[i * n + j] += v;
                        sums[entries + i * n + j] += v * v;
                    }
                }
            }
        });
    });
    errors.rethrow_if_failed();

    DeltaMatrix out;
    out.value = Matrix(2 * n, n);
    out.se = Matrix(2 * n, n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                sum += partial[b * 2 * entries + i * n + j];
                sumsq += partial[b * 2 * entries + entries + i * n + j];
            }
            out.value(i, j) = sum / double(n_paths);
            out.se(i, j) = se_of_mean(sum, sumsq, n_paths);
        }
    out.n_paths = n_paths;
    out.seed = seed;
    return out;
}

RegionDecomposition two_bank_decomposition(const FirmNetwork& net, const MarketParams& params,
                                           std::span<const double> spot, std::size_t n_paths,
                                           std::uint64_t seed) {
    if (net.size() != 2)
        throw NotTwoFirmsError("two_bank_decomposition: network must have exactly two firms");
    if (n_paths < 2) throw PreconditionError("two_bank_decomposition: need at least 2 paths");
    const detail::PathSetup setup(net, params, spot);
    detail::JacobianCache cache(net);

    // Per-block tallies: 4 region counts, per-region growth sums and squares
    // (4 regions x 2 firms each), then the 4 equity-delta contributions with
    // their squares.
    constexpr std::size_t kCount = 0, kG = 4, kGsq = 12, kD = 20, kDsq = 24, kSlots = 28;
    const std::size_t nb = mc_block_count(n_paths);
    std::vector<double> partial(nb * kSlots, 0.0);
    McErrorCollector errors;

    for_each_mc_block(n_paths, [&](std::size_t b, std::size_t begin, std::size_t end) {
        errors.run([&] {
            double z[2], a_T[2];
            double* tally = partial.data() + b * kSlots;
            for (std::size_t k = begin; k < end; ++k) {
                z[0] = normal_variate(seed, k, 0);
                z[1] = normal_variate(seed, k, 1);
                setup.sampler.sample(z, a_T);
                const auto payoff = setup.kernel->evaluate(a_T[0], a_T[1]);
                const int region = region_index(payoff.region);
                const double g1 = a_T[0] / spot[0];
                const double g2 = a_T[1] / spot[1];
                tally[kCount + region] += 1.0;
                tally[kG + 2 * region] += g1;
                tally[kG + 2 * region + 1] += g2;
                tally[kGsq + 2 * region] += g1 * g1;
                tally[kGsq + 2 * region + 1] += g2 * g2;
                const Matrix& jac = cache.get(detail::region_mask(payoff.region));
                const double growth[2] = {setup.disc * g1, setup.disc * g2};
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        const double v = jac(i, j) * growth[j];
                        tally[kD + 2 * i + j] += v;
                        tally[kDsq + 2 * i + j] += v * v;
                    }
            }
        });
    });
    errors.rethrow_if_failed();

    double total[kSlots] = {};
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t s = 0; s < kSlots; ++s) total[s] += partial[b * kSlots + s];

    RegionDecomposition out;
    const double n_d = double(n_paths);
    for (int region = 0; region < 4; ++region) {
        const double count = total[kCount + region];
        const double p = count / n_d;
        out.probability[region] = p;
        out.probability_se[region] = std::sqrt(std::max(0.0, p * (1.0 - p) / n_d));
        out.empty[region] = count == 0.0;
        for (int firm = 0; firm < 2; ++firm) {
            if (out.empty[region]) {
                out.growth[region][firm] = std::numeric_limits<double>::quiet_NaN();
                out.growth_se[region][firm] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const double sum = total[kG + 2 * region + firm];
            const double sumsq = total[kGsq + 2 * region + firm];
            out.growth[region][firm] = sum / count;
            out.growth_se[region][firm] = se_of_mean(sum, sumsq, std::size_t(count));
        }
    }
    out.delta_eq = Matrix(2, 2);
    out.delta_eq_se = Matrix(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double sum = total[kD + 2 * i + j];
            out.delta_eq(i, j) = sum / n_d;
            out.delta_eq_se(i, j) = se_of_mean(sum, total[kDsq + 2 * i + j], n_paths);
        }
    out.n_paths = n_paths;
    out.seed = seed;
    return out;
}

}  // namespace netval
