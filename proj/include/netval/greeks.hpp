#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "netval/gbm.hpp"
#include "netval/network.hpp"
#include "netval/two_firm.hpp"

namespace netval {

// Sensitivities of the 2n time-t claim prices to the n current asset values
// (equity rows first, debt rows below), with Monte-Carlo standard errors.
struct DeltaMatrix {
    Matrix value;
    Matrix se;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Derivative of the clearing fixed point with respect to the external
// assets on a fixed solvency region:
//   [I - dg/dx]^(-1) [diag(xi); diag(1 - xi)].
// The inverse exists for every valid network because the holding column
// sums stay below one. A singular solve therefore signals an internal
// inconsistency, not a user error.
Matrix region_jacobian(const SolvencyState& xi, const FirmNetwork& net);

// Pathwise Monte-Carlo Delta: mean over terminal draws of
//   e^{-r tau} * region_jacobian(xi(A_T)) * diag(A_T / spot).
// Paths landing exactly on a solvency boundary take the solvent branch
// (a probability-zero event under the continuous asset law). The per-region
// Jacobian is cached, one linear solve per solvency pattern seen.
DeltaMatrix pathwise_delta(const FirmNetwork& net, const MarketParams& params,
                           std::span<const double> spot, std::size_t n_paths,
                           std::uint64_t seed);

// Central finite differences of the Monte-Carlo price under common random
// numbers: (x(spot + h e_j) - x(spot - h e_j)) / 2h with h = bump * spot_j.
// Serves as an independent check of the pathwise estimator.
DeltaMatrix finite_difference_delta(const FirmNetwork& net, const MarketParams& params,
                                    std::span<const double> spot, double bump,
                                    std::size_t n_paths, std::uint64_t seed);

// Two-firm Delta split into per-region pieces: region probabilities and the
// conditional growth factors E[A_{i,T}/a_i | region], which reassemble the
// equity Delta block region by region. Regions hit by zero paths are
// reported empty (their conditional expectations stay NaN, their exact
// weight in the reassembly is zero).
struct RegionDecomposition {
    std::array<double, 4> probability{};     // indexed by region_index()
    std::array<double, 4> probability_se{};
    std::array<std::array<double, 2>, 4> growth{};
    std::array<std::array<double, 2>, 4> growth_se{};
    std::array<bool, 4> empty{};
    Matrix delta_eq;     // reassembled 2x2 equity block, discounted
    Matrix delta_eq_se;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

RegionDecomposition two_bank_decomposition(const FirmNetwork& net, const MarketParams& params,
                                           std::span<const double> spot, std::size_t n_paths,
                                           std::uint64_t seed);

}  // namespace netval
