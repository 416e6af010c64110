#include "netval/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netval/errors.hpp"

namespace netval {

FirmNetwork FirmNetwork::without_holdings(std::vector<double> debt) {
    const std::size_t n = debt.size();
    return FirmNetwork{std::move(debt), Matrix(n, n), Matrix(n, n)};
}

FirmNetwork FirmNetwork::two_firm(double d1, double d2, double ms12, double ms21,
                                  double md12, double md21) {
    return FirmNetwork{{d1, d2}, Matrix{{0.0, ms12}, {ms21, 0.0}}, Matrix{{0.0, md12}, {md21, 0.0}}};
}

ValidationReport validate_network(const FirmNetwork& net) {
    ValidationReport rep;
    const std::size_t n = net.size();
    auto flag = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };

    if (net.ms.rows() != n || net.ms.cols() != n || net.md.rows() != n || net.md.cols() != n) {
        flag("holding matrices must be n x n with n = debt.size()");
        return rep;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(net.debt[i] > 0.0) || !std::isfinite(net.debt[i])) {
            std::ostringstream os;
            os << "debt[" << i << "] must be positive, got " << net.debt[i];
            flag(os.str());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (net.ms(i, i) != 0.0 || net.md(i, i) != 0.0) {
            std::ostringstream os;
            os << "self-holding at firm " << i;
            flag(os.str());
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double vs = net.ms(i, j), vd = net.md(i, j);
            if (!(vs >= 0.0 && vs <= 1.0) || !(vd >= 0.0 && vd <= 1.0)) {
                std::ostringstream os;
                os << "holding fraction out of [0,1] at (" << i << "," << j << ")";
                flag(os.str());
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double cs = 0.0, cd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs += net.ms(i, j);
            cd += net.md(i, j);
        }
        if (!(cs < 1.0)) {
            std::ostringstream os;
            os << "equity holdings of firm " << j << " sum to " << cs << " (must stay below 1)";
            flag(os.str());
        }
        if (!(cd < 1.0)) {
            std::ostringstream os;
            os << "debt holdings of firm " << j << " sum to " << cd << " (must stay below 1)";
            flag(os.str());
        }
    }
    return rep;
}

void require_valid(const FirmNetwork& net) {
    const ValidationReport rep = validate_network(net);
    if (rep.ok) return;
    std::string msg = "invalid network:";
    for (const auto& v : rep.violations) msg += "\n  - " + v;
    throw InvalidNetworkError(msg);
}

std::vector<double> ClaimVector::stacked() const {
    std::vector<double> x;
    x.reserve(2 * s.size());
    x.insert(x.end(), s.begin(), s.end());
    x.insert(x.end(), r.begin(), r.end());
    return x;
}

ClaimVector ClaimVector::from_stacked(std::span<const double> x) {
    const std::size_t n = x.size() / 2;
    ClaimVector c(n);
    std::copy(x.begin(), x.begin() + n, c.s.begin());
    std::copy(x.begin() + n, x.end(), c.r.begin());
    return c;
}

std::uint32_t SolvencyState::mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < solvent.size(); ++i)
        if (solvent[i]) m |= (1u << i);
    return m;
}

namespace {

void check_dims(std::span<const double> assets, const ClaimVector& claims, const FirmNetwork& net) {
    if (assets.size() != net.size() || claims.size() != net.size())
        throw Error("dimension mismatch between assets, claims and network");
}

}  // namespace

std::vector<double> total_value(std::span<const double> assets, const ClaimVector& claims,
                                const FirmNetwork& net) {
    check_dims(assets, claims, net);
    const std::size_t n = net.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = assets[i];
        for (std::size_t j = 0; j < n; ++j)
            acc += net.ms(i, j) * claims.s[j] + net.md(i, j) * claims.r[j];
        v[i] = acc;
    }
    return v;
}

ClaimVector payoff_map(std::span<const double> assets, const ClaimVector& claims,
                       const FirmNetwork& net) {
    const std::vector<double> v = total_value(assets, claims, net);
    const std::size_t n = net.size();
    ClaimVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.s[i] = std::max(0.0, v[i] - net.debt[i]);
        out.r[i] = std::min(net.debt[i], v[i]);
    }
    return out;
}

ClearingResult solve_clearing_from(std::span<const double> assets, const FirmNetwork& net,
                                   ClaimVector start, double tol, std::size_t max_iter) {
    require_valid(net);
    check_dims(assets, start, net);
    if (!(tol > 0.0)) throw PreconditionError("solve_clearing: tol must be positive");
    for (double a : assets)
        if (!(a > 0.0)) throw PreconditionError("solve_clearing: assets must be positive");

    ClaimVector x = std::move(start);
    for (std::size_t k = 0; k < max_iter; ++k) {
        ClaimVector next = payoff_map(assets, x, net);
        double resid = 0.0;
        for (std::size_t i = 0; i < net.size(); ++i) {
            resid = std::max(resid, std::abs(next.s[i] - x.s[i]));
            resid = std::max(resid, std::abs(next.r[i] - x.r[i]));
        }
        if (resid <= tol) {
            // x itself has residual ||g(x) - x|| <= tol; one more map
            // application would not certify the same for `next`.
            return {std::move(x), k + 1};
        }
        x = std::move(next);
    }
    std::ostringstream os;
    os << "clearing iteration did not reach tol = " << tol << " within " << max_iter
       << " steps; the contraction rate (holding column sums) may be too close to 1 for this tolerance";
    throw NonConvergenceError(os.str());
}

ClearingResult solve_clearing(std::span<const double> assets, const FirmNetwork& net,
                              double tol, std::size_t max_iter) {
    return solve_clearing_from(assets, net, ClaimVector(net.size()), tol, max_iter);
}

SolvencyState solvency_state(std::span<const double> assets, const ClaimVector& claims,
                             const FirmNetwork& net) {
    const std::vector<double> v = total_value(assets, claims, net);
    SolvencyState st;
    st.solvent.resize(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
        st.solvent[i] = v[i] >= net.debt[i] ? 1 : 0;
    return st;
}

double solvency_block_norm(const FirmNetwork& net, const SolvencyState& xi) {
    if (xi.size() != net.size()) throw Error("solvency_block_norm: dimension mismatch");
    const std::size_t n = net.size();
    Matrix k(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = xi.solvent[i] ? 1.0 : 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            k(i, j) = w * net.ms(i, j);
            k(i, n + j) = w * net.md(i, j);
            k(n + i, j) = (1.0 - w) * net.ms(i, j);
            k(n + i, n + j) = (1.0 - w) * net.md(i, j);
        }
    }
    return k.max_abs_col_sum();
}

double lipschitz_bound(const FirmNetwork& net) {
    require_valid(net);
    // sup over solvency patterns of the induced 1-norm: the pattern only
    // moves column mass between the equity and debt row blocks, so the sup
    // is attained by every pattern and equals the plain column-sum bound.
    const std::size_t n = net.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double cs = 0.0, cd = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs += net.ms(i, j);
            cd += net.md(i, j);
        }
        worst = std::max(worst, std::max(cs, cd));
    }
    return 1.0 / (1.0 - worst);
}

}  // namespace netval
