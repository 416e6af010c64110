#pragma once

#include <random>
#include <vector>

#include "netval/network.hpp"

namespace netval::testing {

// Random valid network: entries in [0, max_frac], column sums kept strictly
// below one by scaling.
inline FirmNetwork random_network(std::mt19937_64& gen, std::size_t n, double max_frac = 0.9) {
    std::uniform_real_distribution<double> frac(0.0, max_frac);
    std::uniform_real_distribution<double> debt(0.1, 5.0);
    FirmNetwork net;
    net.debt.resize(n);
    for (auto& d : net.debt) d = debt(gen);
    net.ms = Matrix(n, n);
    net.md = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                net.ms(i, j) = frac(gen);
                net.md(i, j) = frac(gen);
            }
    for (std::size_t j = 0; j < n; ++j) {
        double cs = 0.0, cd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs += net.ms(i, j);
            cd += net.md(i, j);
        }
        const double scale = 0.95 / std::max(1.0, std::max(cs, cd));
        if (scale < 1.0)
            for (std::size_t i = 0; i < n; ++i) {
                net.ms(i, j) *= scale;
                net.md(i, j) *= scale;
            }
    }
    return net;
}

inline std::vector<double> random_assets(std::mt19937_64& gen, std::size_t n, double lo = 0.05,
                                         double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> a(n);
    for (auto& v : a) v = dist(gen);
    return a;
}

}  // namespace netval::testing
