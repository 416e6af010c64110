#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netval/linalg.hpp"

namespace netval {

// n firms with zero-coupon debt due at a common maturity and fractional
// cross-holdings of each other's equity and debt. ms(i,j) is the fraction of
// firm j's equity held by firm i, md(i,j) the same for debt. Valid networks
// have no self-holdings, no short positions, and strictly sub-stochastic
// columns (some of every firm's equity and debt is held outside the network).
struct FirmNetwork {
    std::vector<double> debt;
    Matrix ms;
    Matrix md;

    std::size_t size() const { return debt.size(); }

    static FirmNetwork without_holdings(std::vector<double> debt);
    static FirmNetwork two_firm(double d1, double d2,
                                double ms12, double ms21,
                                double md12, double md21);
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

ValidationReport validate_network(const FirmNetwork& net);

// Throws InvalidNetworkError listing every violated constraint.
void require_valid(const FirmNetwork& net);

// Equity values s and debt recovery values r, the unknowns of the clearing
// problem, stacked as x = (s; r).
struct ClaimVector {
    std::vector<double> s;
    std::vector<double> r;

    ClaimVector() = default;
    explicit ClaimVector(std::size_t n) : s(n, 0.0), r(n, 0.0) {}

    std::size_t size() const { return s.size(); }
    std::vector<double> stacked() const;
    static ClaimVector from_stacked(std::span<const double> x);
};

// Solvency indicators: solvent[i] = 1 when firm i's total asset value covers
// its nominal debt (the boundary v_i = d_i counts as solvent).
struct SolvencyState {
    std::vector<std::uint8_t> solvent;

    std::size_t size() const { return solvent.size(); }
    // Bit i set when firm i is solvent; usable as a cache key for n <= 32.
    std::uint32_t mask() const;
};

struct ClearingResult {
    ClaimVector claims;
    std::size_t iterations = 0;
};

// Total asset value per firm, v_i = a_i + sum_j ms(i,j) s_j + sum_j md(i,j) r_j.
std::vector<double> total_value(std::span<const double> assets,
                                const ClaimVector& claims, const FirmNetwork& net);

// One application of the clearing payoff map:
//   s-part: max(0, v_i - d_i),  r-part: min(d_i, v_i).
ClaimVector payoff_map(std::span<const double> assets, const ClaimVector& claims,
                       const FirmNetwork& net);

// Picard iteration x_{k+1} = g(a, x_k) from x_0 = 0. Returns an iterate whose
// sup-norm residual ||x - g(a, x)|| is at most tol. Starting at zero makes
// the iterates componentwise non-decreasing, so stalls are impossible;
// convergence is geometric at the sub-stochastic contraction rate. Networks
// with column sums close to one converge slowly and may need a larger
// max_iter for very tight tolerances.
ClearingResult solve_clearing(std::span<const double> assets, const FirmNetwork& net,
                              double tol = 1e-12, std::size_t max_iter = 10000);

// Same iteration from a caller-supplied start; used to probe uniqueness from
// an upper starting point.
ClearingResult solve_clearing_from(std::span<const double> assets, const FirmNetwork& net,
                                   ClaimVector start, double tol = 1e-12,
                                   std::size_t max_iter = 10000);

SolvencyState solvency_state(std::span<const double> assets, const ClaimVector& claims,
                             const FirmNetwork& net);

// Induced 1-norm of the clearing map's x-Jacobian block for a fixed solvency
// pattern. The column sums do not depend on the pattern (each column of ms
// or md is split between the equity and debt row blocks and re-adds to the
// full column sum), so this equals the stacked-matrix bound for every xi.
double solvency_block_norm(const FirmNetwork& net, const SolvencyState& xi);

// Lipschitz constant of a -> x*(a) in the 1-norm:
// L* = (1 - sup_xi ||K_xi||_1)^(-1).
double lipschitz_bound(const FirmNetwork& net);

}  // namespace netval
