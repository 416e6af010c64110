// Command-line front end: scenario validation and pricing, correlation
// sweeps behind the figure datasets, and the randomized dominance campaign.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netval/equity_corr.hpp"
#include "netval/errors.hpp"
#include "netval/greeks.hpp"
#include "netval/io_json.hpp"
#include "netval/network.hpp"
#include "netval/sweeps.hpp"
#include "netval/valuation.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw netval::Error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json matrix_json(const netval::Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t paths = 0;
    bool paths_set = false;
    double tol = 1e-12;

    void attach(CLI::App* cmd, bool config_required = true) {
        auto* opt = cmd->add_option("--config", config_path, "JSON configuration file");
        if (config_required) opt->required();
        cmd->add_option("--out", out_path, "output path");
        cmd->add_option("--seed", seed, "RNG seed override")->each([this](std::string) {
            seed_set = true;
        });
        cmd->add_option("--paths", paths, "Monte-Carlo path count override")
            ->each([this](std::string) { paths_set = true; });
        cmd->add_option("--tol", tol, "clearing tolerance for iterative solves");
    }

    netval::Scenario scenario() const {
        netval::Scenario sc = netval::scenario_from_json(read_file(config_path));
        if (seed_set) sc.seed = seed;
        if (paths_set) sc.n_paths = paths;
        return sc;
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << std::endl;
    else
        netval::write_text_file(out_path, text);
}

int cmd_validate(const CommonFlags& flags) {
    const std::string text = read_file(flags.config_path);
    const json j = json::parse(text, nullptr, true);
    netval::FirmNetwork net;
    if (j.contains("network"))
        net = netval::network_from_json(j.at("network").dump());
    else
        net = netval::network_from_json(text);
    const netval::ValidationReport rep = netval::validate_network(net);
    json out;
    out["ok"] = rep.ok;
    out["violations"] = rep.violations;
    emit(flags.out_path, out.dump(2));
    return rep.ok ? 0 : 1;
}

int cmd_price(const CommonFlags& flags) {
    const netval::Scenario sc = flags.scenario();
    const netval::PriceEstimate est =
        netval::price_claims(sc.network, sc.market, sc.spot, sc.n_paths, sc.seed, flags.tol);
    json out;
    out["equity"] = est.claims.s;
    out["debt_recovery"] = est.claims.r;
    out["se"] = est.se;
    out["paths"] = est.n_paths;
    out["seed"] = est.seed;
    emit(flags.out_path, out.dump(2));
    return 0;
}

int cmd_delta(const CommonFlags& flags, double bump) {
    const netval::Scenario sc = flags.scenario();
    const netval::DeltaMatrix pw =
        netval::pathwise_delta(sc.network, sc.market, sc.spot, sc.n_paths, sc.seed);
    json out;
    out["pathwise"] = matrix_json(pw.value);
    out["pathwise_se"] = matrix_json(pw.se);
    if (bump > 0.0) {
        const netval::DeltaMatrix fd = netval::finite_difference_delta(
            sc.network, sc.market, sc.spot, bump, sc.n_paths, sc.seed);
        out["finite_difference"] = matrix_json(fd.value);
        out["finite_difference_se"] = matrix_json(fd.se);
        out["bump"] = bump;
    }
    out["paths"] = pw.n_paths;
    out["seed"] = pw.seed;
    emit(flags.out_path, out.dump(2));
    return 0;
}

int cmd_corr(const CommonFlags& flags) {
    const netval::Scenario sc = flags.scenario();
    const netval::CorrelationReport rep =
        netval::try_equity_correlation(sc.network, sc.market, sc.spot, sc.n_paths, sc.seed);
    json out;
    out["defined"] = rep.defined;
    out["rho_asset"] = rep.rho_asset;
    out["paths"] = rep.n_paths;
    out["seed"] = rep.seed;
    out["equity"] = rep.equity;
    out["equity_se"] = rep.equity_se;
    out["delta_eq"] = matrix_json(rep.delta_eq);
    if (rep.defined) {
        out["rho_s"] = rep.rho_s;
        out["rho_s_se"] = rep.rho_s_se;
        out["sign_source"] = rep.sign_source;
        out["vol_factor"] = matrix_json(rep.vol_factor);
        out["inst_cov"] = matrix_json(rep.inst_cov);
        const netval::DominanceCheck dom = netval::check_theorem_dominance(rep);
        out["dominance_margin"] = dom.margin;
        out["dominance_pass"] = dom.pass;
    } else {
        out["undefined_reason"] = rep.undefined_reason;
    }
    emit(flags.out_path, out.dump(2));
    return 0;
}

int run_fig(const CommonFlags& flags, netval::SweepConfig cfg, const std::string& schema) {
    if (!flags.config_path.empty())
        cfg = netval::sweep_config_from_json(read_file(flags.config_path), cfg);
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.paths_set) cfg.n_paths = flags.paths;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<netval::FigRow> rows = netval::run_fig_sweep(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string out_path = flags.out_path.empty() ? schema + ".csv" : flags.out_path;
    netval::write_text_file(out_path, netval::fig_csv(rows));
    netval::write_text_file(out_path + ".meta.json",
                            netval::fig_metadata_json(cfg, rows, schema, secs));
    std::cout << "wrote " << rows.size() << " rows to " << out_path << " (" << secs << " s)"
              << std::endl;
    return 0;
}

int cmd_fig2(const CommonFlags& flags) {
    netval::SurfaceConfig cfg;
    if (!flags.config_path.empty())
        cfg = netval::surface_config_from_json(read_file(flags.config_path), cfg);
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.paths_set) cfg.n_paths = flags.paths;
    const auto start = std::chrono::steady_clock::now();
    const netval::SurfaceResult result = netval::run_fig2_surface(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string out_path = flags.out_path.empty() ? "netval-fig2-v1.csv" : flags.out_path;
    netval::write_text_file(out_path, netval::surface_csv(result.rows));
    netval::write_text_file(out_path + ".boundaries.csv", netval::boundary_csv(result.boundaries));
    netval::write_text_file(out_path + ".meta.json",
                            netval::surface_metadata_json(cfg, result, secs));
    std::cout << "wrote " << result.rows.size() << " rows and " << result.boundaries.size()
              << " boundary points to " << out_path << " (" << secs << " s)" << std::endl;
    return 0;
}

int cmd_campaign(const CommonFlags& flags, std::size_t n_configs) {
    netval::CampaignConfig cfg;
    cfg.n_configs = n_configs;
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.paths_set) cfg.n_paths = flags.paths;
    const netval::CampaignResult result = netval::run_theorem_campaign(cfg);
    if (!flags.out_path.empty()) {
        netval::write_text_file(flags.out_path, netval::campaign_csv(result));
        netval::write_text_file(flags.out_path + ".meta.json",
                                netval::campaign_metadata_json(cfg, result));
    }
    std::cout << netval::campaign_metadata_json(cfg, result) << std::endl;
    return result.failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-holding network valuation, Greeks and equity correlations"};
    app.require_subcommand(1);

    CommonFlags validate_flags, price_flags, delta_flags, corr_flags;
    CommonFlags fig1_flags, fig10_flags, fig2_flags, campaign_flags;
    double bump = 0.0;
    std::size_t n_configs = 1000;

    validate_flags.attach(
        app.add_subcommand("validate", "check a network against the holding constraints"));
    price_flags.attach(
        app.add_subcommand("price", "Monte-Carlo prices of all equity and debt claims"));
    auto* delta_cmd =
        app.add_subcommand("delta", "pathwise delta matrix (optionally vs finite differences)");
    delta_flags.attach(delta_cmd);
    delta_cmd->add_option("--bump", bump,
                          "also run central finite differences with this relative bump");
    corr_flags.attach(
        app.add_subcommand("corr", "equity correlation report for a two-firm scenario"));
    fig1_flags.attach(
        app.add_subcommand("sweep-fig1", "correlation sweep, debt cross-holdings only"), false);
    fig10_flags.attach(
        app.add_subcommand("sweep-fig10", "correlation sweep with 10% equity cross-holdings"),
        false);
    fig2_flags.attach(app.add_subcommand("sweep-fig2", "correlation surface over an asset grid"),
                      false);
    auto* campaign_cmd =
        app.add_subcommand("theorem-campaign", "randomized dominance verification");
    campaign_flags.attach(campaign_cmd, false);
    campaign_cmd->add_option("--configs", n_configs, "number of random configurations");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("validate")) return cmd_validate(validate_flags);
        if (app.got_subcommand("price")) return cmd_price(price_flags);
        if (app.got_subcommand("delta")) return cmd_delta(delta_flags, bump);
        if (app.got_subcommand("corr")) return cmd_corr(corr_flags);
        if (app.got_subcommand("sweep-fig1"))
            return run_fig(fig1_flags, netval::default_fig1_config(), "netval-fig1-v1");
        if (app.got_subcommand("sweep-fig10"))
            return run_fig(fig10_flags, netval::default_fig10_config(), "netval-fig10-v1");
        if (app.got_subcommand("sweep-fig2")) return cmd_fig2(fig2_flags);
        if (app.got_subcommand("theorem-campaign")) return cmd_campaign(campaign_flags, n_configs);
    } catch (const netval::NonConvergenceError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << std::endl;
        return 2;
    } catch (const netval::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
