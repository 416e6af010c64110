#include "netval/gbm.hpp"

#include <cmath>

#include "netval/errors.hpp"

namespace netval {

MarketParams MarketParams::single(double rate, double sigma, double tau) {
    return MarketParams{rate, {sigma}, Matrix{{1.0}}, 0.0, tau};
}

MarketParams MarketParams::two_firm(double rate, double sigma1, double sigma2, double rho,
                                    double tau) {
    return MarketParams{rate, {sigma1, sigma2}, Matrix{{1.0, rho}, {rho, 1.0}}, 0.0, tau};
}

void require_valid(const MarketParams& params) {
    const std::size_t n = params.size();
    if (n == 0) throw PreconditionError("market: no firms");
    for (double s : params.sigma)
        if (!(s > 0.0) || !std::isfinite(s))
            throw PreconditionError("market: volatilities must be positive");
    if (!(params.tau() > 0.0)) throw PreconditionError("market: maturity must lie after valuation time");
    if (params.corr.rows() != n || params.corr.cols() != n)
        throw PreconditionError("market: correlation matrix has wrong shape");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(params.corr(i, i) - 1.0) > 1e-12)
            throw PreconditionError("market: correlation diagonal must be 1");
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(params.corr(i, j)) > 1.0 + 1e-12)
                throw PreconditionError("market: correlation entries must lie in [-1, 1]");
            if (std::abs(params.corr(i, j) - params.corr(j, i)) > 1e-12)
                throw PreconditionError("market: correlation matrix must be symmetric");
        }
    }
}

Matrix cholesky(const Matrix& sym_psd) {
    const std::size_t n = sym_psd.rows();
    if (sym_psd.cols() != n) throw NotSymmetricError("cholesky: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(sym_psd(i, j) - sym_psd(j, i)) > 1e-12)
                throw NotSymmetricError("cholesky: matrix not symmetric");

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = sym_psd(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (pivot < -1e-10) throw NotPsdError("cholesky: matrix not positive semidefinite");
        // Semidefinite directions (comonotonic assets) collapse to a zero
        // pivot; the remaining column entries are left at zero.
        if (pivot <= 0.0) {
            l(j, j) = 0.0;
            continue;
        }
        const double diag = std::sqrt(pivot);
        l(j, j) = diag;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = sym_psd(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / diag;
        }
    }
    return l;
}

Matrix asset_covariance(const MarketParams& params) {
    const std::size_t n = params.size();
    Matrix cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov(i, j) = params.sigma[i] * params.sigma[j] * params.corr(i, j);
    return cov;
}

Matrix asset_vol_factor(const MarketParams& params) {
    // diag(sigma) * chol(C) is lower triangular and factors the covariance.
    Matrix l = cholesky(params.corr);
    for (std::size_t i = 0; i < l.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) l(i, j) *= params.sigma[i];
    return l;
}

TerminalSampler::TerminalSampler(const MarketParams& params, std::span<const double> spot) {
    require_valid(params);
    n_ = params.size();
    if (spot.size() != n_) throw PreconditionError("terminal sampler: spot size mismatch");
    for (double a : spot)
        if (!(a > 0.0)) throw PreconditionError("terminal sampler: spot values must be positive");

    const double tau = params.tau();
    const double sqrt_tau = std::sqrt(tau);
    const Matrix l = cholesky(params.corr);

    spot_.assign(spot.begin(), spot.end());
    drift_.resize(n_);
    diff_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        drift_[i] = (params.rate - 0.5 * params.sigma[i] * params.sigma[i]) * tau;
        for (std::size_t j = 0; j <= i; ++j)
            diff_[i * n_ + j] = sqrt_tau * params.sigma[i] * l(i, j);
    }
}

void TerminalSampler::sample(std::span<const double> z, std::span<double> out) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double w = drift_[i];
        const double* row = diff_.data() + i * n_;
        for (std::size_t j = 0; j <= i; ++j) w += row[j] * z[j];
        out[i] = spot_[i] * std::exp(w);
    }
}

std::vector<double> sample_terminal_assets(const MarketParams& params,
                                           std::span<const double> spot,
                                           std::span<const double> z) {
    const TerminalSampler sampler(params, spot);
    if (z.size() != params.size()) throw PreconditionError("sample_terminal_assets: z size mismatch");
    std::vector<double> out(params.size());
    sampler.sample(z, out);
    return out;
}

}  // namespace netval
