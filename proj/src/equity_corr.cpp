#include "netval/equity_corr.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "mc_internal.hpp"
#include "netval/errors.hpp"
#include "netval/mc.hpp"
#include "netval/rng.hpp"

namespace netval {

namespace {

double zero_equity_threshold(std::span<const double> spot) {
    double m = 0.0;
    for (double a : spot) m = std::max(m, a);
    return 1e-10 * m;
}

// rho_s = y / sqrt(x^2 + y^2), where x is the cross ("orthogonal") term and
// y the aligned term of the equity volatility factor products. Equivalent to
// 1/rho_s^2 = 1 + (x/y)^2 with the sign taken from y, but stable when y
// passes through zero. The common equity factor 1/(s1 s2) scales x and y
// together and cancels.
double rho_s_raw(double d11, double d12, double d21, double d22, double a1, double a2,
                 double s1, double s2, double sig1, double sig2, double rho) {
    const double inv_s = 1.0 / (s1 * s2);
    const double q11 = d11 * a1, q12 = d12 * a2, q21 = d21 * a1, q22 = d22 * a2;
    const double x = (q11 * q22 - q12 * q21) * sig1 * sig2 *
                     std::sqrt(std::max(0.0, 1.0 - rho * rho)) * inv_s;
    const double y = (q11 * q21 * sig1 * sig1 + (q11 * q22 + q12 * q21) * sig1 * sig2 * rho +
                      q12 * q22 * sig2 * sig2) * inv_s;
    const double norm = std::sqrt(x * x + y * y);
    if (norm == 0.0) return 0.0;
    return y / norm;
}

// Joint Monte-Carlo moments of the discounted equity Delta entries and the
// discounted equity values: mean vector of length m = n^2 + n (Delta block
// row-major first) and the covariance matrix of those means. Everything
// downstream (vol factor, covariance, correlation and their standard
// errors) is a smooth function of this vector.
struct JointMoments {
    std::size_t n = 0;
    std::vector<double> mean;      // m
    std::vector<double> cov_mean;  // m x m, row-major
    std::size_t n_paths = 0;

    double delta(std::size_t i, std::size_t j) const { return mean[i * n + j]; }
    double equity(std::size_t i) const { return mean[n * n + i]; }
};

JointMoments collect_joint_moments(const FirmNetwork& net, const MarketParams& params,
                                   std::span<const double> spot, std::size_t n_paths,
                                   std::uint64_t seed) {
    if (n_paths < 2) throw PreconditionError("equity moments: need at least 2 paths");
    const detail::PathSetup setup(net, params, spot);
    const std::size_t n = setup.n;
    const std::size_t m = n * n + n;
    const std::size_t pairs = m * (m + 1) / 2;
    detail::JacobianCache cache(net);

    // Two-firm networks only ever see four solvency patterns; fetch their
    // equity blocks up front so the path loop stays lock-free.
    double jac_eq2[4][4] = {};
    if (n == 2) {
        for (std::uint32_t mask = 0; mask < 4; ++mask) {
            const Matrix& jac = cache.get(mask);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) jac_eq2[mask][2 * i + j] = jac(i, j);
        }
    }

    const std::size_t slots = m + pairs;
    const std::size_t nb = mc_block_count(n_paths);
    std::vector<double> partial(nb * slots, 0.0);
    McErrorCollector errors;

    for_each_mc_block(n_paths, [&](std::size_t b, std::size_t begin, std::size_t end) {
        errors.run([&] {
            std::vector<double> z(n), a_T(n), u(m), vals(2 * n);
            double* sums = partial.data() + b * slots;
            for (std::size_t k = begin; k < end; ++k) {
                for (std::size_t dim = 0; dim < n; ++dim)
                    z[dim] = normal_variate(seed, k, std::uint32_t(dim));
                setup.sampler.sample(z, a_T);
                if (n == 2) {
                    const auto payoff = setup.kernel->evaluate(a_T[0], a_T[1]);
                    const double* jac = jac_eq2[detail::region_mask(payoff.region)];
                    const double growth[2] = {setup.disc * a_T[0] / spot[0],
                                              setup.disc * a_T[1] / spot[1]};
                    u[0] = jac[0] * growth[0];
                    u[1] = jac[1] * growth[1];
                    u[2] = jac[2] * growth[0];
                    u[3] = jac[3] * growth[1];
                    u[4] = setup.disc * payoff.s1;
                    u[5] = setup.disc * payoff.s2;
                } else {
                    setup.clearing_values(net, a_T, vals);
                    const Matrix& jac = cache.get(setup.solvency_mask(net, a_T));
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t j = 0; j < n; ++j)
                            u[i * n + j] = setup.disc * jac(i, j) * a_T[j] / spot[j];
                        u[n * n + i] = setup.disc * vals[i];
                    }
                }
                for (std::size_t i = 0; i < m; ++i) sums[i] += u[i];
                std::size_t slot = m;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = i; j < m; ++j) sums[slot++] += u[i] * u[j];
            }
        });
    });
    errors.rethrow_if_failed();

    std::vector<double> total(slots, 0.0);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t s = 0; s < slots; ++s) total[s] += partial[b * slots + s];

    JointMoments jm;
    jm.n = n;
    jm.n_paths = n_paths;
    jm.mean.resize(m);
    const double n_d = double(n_paths);
    for (std::size_t i = 0; i < m; ++i) jm.mean[i] = total[i] / n_d;
    jm.cov_mean.assign(m * m, 0.0);
    std::size_t slot = m;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double c = (total[slot++] - n_d * jm.mean[i] * jm.mean[j]) / ((n_d - 1.0) * n_d);
            if (i == j) c = std::max(0.0, c);
            jm.cov_mean[i * m + j] = c;
            jm.cov_mean[j * m + i] = c;
        }
    return jm;
}

// First-order (delta-method) standard error of f(mean) given the covariance
// of the mean vector; the gradient is taken by central differences, which is
// plenty for the smooth rational maps used here.
double propagate_se(const std::function<double(const std::vector<double>&)>& f,
                    const JointMoments& jm) {
    const std::size_t m = jm.mean.size();
    double scale = 0.0;
    for (double v : jm.mean) scale = std::max(scale, std::abs(v));
    std::vector<double> grad(m, 0.0), point = jm.mean;
    for (std::size_t i = 0; i < m; ++i) {
        const double h = 1e-6 * (std::abs(jm.mean[i]) + 1e-3 * scale) + 1e-300;
        point[i] = jm.mean[i] + h;
        const double up = f(point);
        point[i] = jm.mean[i] - h;
        const double dn = f(point);
        point[i] = jm.mean[i];
        grad[i] = (up - dn) / (2.0 * h);
    }
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            var += grad[i] * grad[j] * jm.cov_mean[i * m + j];
    return std::sqrt(std::max(0.0, var));
}

}  // namespace

Matrix equity_vol_matrix(const Matrix& delta_eq, std::span<const double> equity,
                         std::span<const double> spot, const MarketParams& params) {
    require_valid(params);
    const std::size_t n = params.size();
    if (delta_eq.rows() != n || delta_eq.cols() != n || equity.size() != n || spot.size() != n)
        throw PreconditionError("equity_vol_matrix: dimension mismatch");
    const double eps = zero_equity_threshold(spot);
    for (std::size_t i = 0; i < n; ++i)
        if (!(equity[i] > eps))
            throw ZeroEquityError("equity_vol_matrix: equity value is numerically zero, leverage undefined");
    const Matrix la = asset_vol_factor(params);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += delta_eq(i, k) * spot[k] * la(k, j);
            out(i, j) = acc / equity[i];
        }
    return out;
}

ClosedFormCorrelation equity_correlation_closed_form(const Matrix& delta_eq,
                                                     std::span<const double> spot,
                                                     std::span<const double> equity,
                                                     std::span<const double> sigma, double rho) {
    if (delta_eq.rows() != 2 || delta_eq.cols() != 2 || spot.size() != 2 || equity.size() != 2 ||
        sigma.size() != 2)
        throw PreconditionError("equity_correlation_closed_form: two-firm inputs required");
    if (!(delta_eq(0, 0) > 0.0 && delta_eq(1, 1) > 0.0))
        throw PreconditionError("equity_correlation_closed_form: own deltas must be positive");
    if (!(spot[0] > 0.0 && spot[1] > 0.0 && sigma[0] > 0.0 && sigma[1] > 0.0))
        throw PreconditionError("equity_correlation_closed_form: spot and vols must be positive");
    if (!(equity[0] > 0.0 && equity[1] > 0.0))
        throw PreconditionError("equity_correlation_closed_form: equity values must be positive");
    if (!(std::abs(rho) <= 1.0))
        throw PreconditionError("equity_correlation_closed_form: |rho| must not exceed 1");

    const double value = rho_s_raw(delta_eq(0, 0), delta_eq(0, 1), delta_eq(1, 0), delta_eq(1, 1),
                                   spot[0], spot[1], equity[0], equity[1], sigma[0], sigma[1], rho);
    ClosedFormCorrelation out;
    out.rho_s = value;
    out.sign = value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
    return out;
}

CorrelationReport try_equity_correlation(const FirmNetwork& net, const MarketParams& params,
                                         std::span<const double> spot, std::size_t n_paths,
                                         std::uint64_t seed) {
    if (net.size() != 2)
        throw NotTwoFirmsError("equity correlation: network must have exactly two firms");
    const JointMoments jm = collect_joint_moments(net, params, spot, n_paths, seed);

    CorrelationReport rep;
    rep.n_paths = n_paths;
    rep.seed = seed;
    rep.rho_asset = params.corr(0, 1);
    rep.delta_eq = Matrix(2, 2);
    rep.delta_eq_se = Matrix(2, 2);
    const std::size_t m = jm.mean.size();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const std::size_t idx = std::size_t(2 * i + j);
            rep.delta_eq(i, j) = jm.mean[idx];
            rep.delta_eq_se(i, j) = std::sqrt(jm.cov_mean[idx * m + idx]);
        }
    for (int i = 0; i < 2; ++i) {
        const std::size_t idx = std::size_t(4 + i);
        rep.equity[i] = jm.mean[idx];
        rep.equity_se[i] = std::sqrt(jm.cov_mean[idx * m + idx]);
    }

    const double eps = zero_equity_threshold(spot);
    if (!(rep.equity[0] > eps) || !(rep.equity[1] > eps)) {
        rep.undefined_reason = "equity value is numerically zero; correlation undefined";
        return rep;
    }
    if (!(rep.delta_eq(0, 0) > 0.0) || !(rep.delta_eq(1, 1) > 0.0)) {
        rep.undefined_reason = "no solvent paths for a firm; its own equity delta vanishes";
        return rep;
    }
    rep.defined = true;

    const double a1 = spot[0], a2 = spot[1];
    const double sig1 = params.sigma[0], sig2 = params.sigma[1];
    const double rho = rep.rho_asset;

    const auto rho_s_of = [&](const std::vector<double>& u) {
        return rho_s_raw(u[0], u[1], u[2], u[3], a1, a2, u[4], u[5], sig1, sig2, rho);
    };
    rep.rho_s = rho_s_of(jm.mean);
    rep.sign_source = rep.rho_s > 0.0 ? 1 : (rep.rho_s < 0.0 ? -1 : 0);
    rep.rho_s_se = propagate_se(rho_s_of, jm);

    const Matrix la = asset_vol_factor(params);
    const auto vol_entry = [&](const std::vector<double>& u, int i, int j) {
        const double num = u[std::size_t(2 * i)] * a1 * la(0, j) + u[std::size_t(2 * i + 1)] * a2 * la(1, j);
        return num / u[std::size_t(4 + i)];
    };
    rep.vol_factor = Matrix(2, 2);
    rep.vol_factor_se = Matrix(2, 2);
    rep.inst_cov = Matrix(2, 2);
    rep.inst_cov_se = Matrix(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            rep.vol_factor(i, j) = vol_entry(jm.mean, i, j);
            rep.vol_factor_se(i, j) =
                propagate_se([&](const std::vector<double>& u) { return vol_entry(u, i, j); }, jm);
            rep.inst_cov(i, j) = vol_entry(jm.mean, i, 0) * vol_entry(jm.mean, j, 0) +
                                 vol_entry(jm.mean, i, 1) * vol_entry(jm.mean, j, 1);
            rep.inst_cov_se(i, j) = propagate_se(
                [&](const std::vector<double>& u) {
                    return vol_entry(u, i, 0) * vol_entry(u, j, 0) +
                           vol_entry(u, i, 1) * vol_entry(u, j, 1);
                },
                jm);
        }
    return rep;
}

CorrelationReport equity_correlation_mc(const FirmNetwork& net, const MarketParams& params,
                                        std::span<const double> spot, std::size_t n_paths,
                                        std::uint64_t seed) {
    CorrelationReport rep = try_equity_correlation(net, params, spot, n_paths, seed);
    if (!rep.defined) {
        if (rep.undefined_reason.find("zero") != std::string::npos)
            throw ZeroEquityError("equity_correlation_mc: " + rep.undefined_reason);
        throw PreconditionError("equity_correlation_mc: " + rep.undefined_reason);
    }
    return rep;
}

EquityVolEstimate equity_vol_mc(const FirmNetwork& net, const MarketParams& params,
                                std::span<const double> spot, std::size_t n_paths,
                                std::uint64_t seed) {
    const JointMoments jm = collect_joint_moments(net, params, spot, n_paths, seed);
    const std::size_t n = jm.n;
    const std::size_t m = jm.mean.size();

    EquityVolEstimate est;
    est.n_paths = n_paths;
    est.seed = seed;
    est.equity.resize(n);
    est.equity_se.resize(n);
    const double eps = zero_equity_threshold(spot);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = n * n + i;
        est.equity[i] = jm.mean[idx];
        est.equity_se[i] = std::sqrt(jm.cov_mean[idx * m + idx]);
        if (!(est.equity[i] > eps))
            throw ZeroEquityError("equity_vol_mc: equity value is numerically zero");
    }

    const Matrix la = asset_vol_factor(params);
    const auto vol_entry = [&](const std::vector<double>& u, std::size_t i, std::size_t j) {
        double num = 0.0;
        for (std::size_t k = 0; k < n; ++k) num += u[i * n + k] * spot[k] * la(k, j);
        return num / u[n * n + i];
    };
    est.vol_factor = Matrix(n, n);
    est.vol_factor_se = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            est.vol_factor(i, j) = vol_entry(jm.mean, i, j);
            est.vol_factor_se(i, j) =
                propagate_se([&](const std::vector<double>& u) { return vol_entry(u, i, j); }, jm);
        }
    return est;
}

DominanceCheck check_theorem_dominance(const CorrelationReport& report) {
    if (!report.defined)
        throw PreconditionError("check_theorem_dominance: report is undefined at this point");
    DominanceCheck out;
    out.margin = report.rho_s - report.rho_asset;
    out.pass = report.rho_s >= report.rho_asset - 3.0 * report.rho_s_se;
    return out;
}

}  // namespace netval
