#pragma once

#include <array>
#include <cstdint>

namespace netval {

// Counter-based random numbers (Philox4x32-10). The draw belonging to a given
// (seed, path, dimension) triple is a pure function of that triple, which
// buys two properties the Monte-Carlo engines rely on:
//   * runs are bitwise reproducible for any thread count or schedule, and
//   * common random numbers across parameter values come for free — reuse
//     the seed and the paths line up.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Uniform draw in the open interval (0, 1).
double uniform_variate(std::uint64_t seed, std::uint64_t path, std::uint32_t dim);

// Standard normal draw, via the inverse CDF applied to the uniform above.
double normal_variate(std::uint64_t seed, std::uint64_t path, std::uint32_t dim);

// Inverse standard normal CDF (Wichura's PPND16 rational approximations,
// absolute error below ~1e-15 over (0, 1)).
double inverse_normal_cdf(double p);

// Standard normal CDF, accurate into the far tails.
double normal_cdf(double x);

}  // namespace netval
