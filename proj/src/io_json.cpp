#include "netval/io_json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netval/errors.hpp"

namespace netval {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config parse error: ") + e.what());
    }
}

const json& require_field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw Error(std::string("config: missing field '") + name + "'");
    return *it;
}

double as_number(const json& j, const char* name) {
    if (!j.is_number()) throw Error(std::string("config: field '") + name + "' must be a number");
    return j.get<double>();
}

std::vector<double> as_vector(const json& j, const char* name) {
    if (!j.is_array()) throw Error(std::string("config: field '") + name + "' must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_number(v, name));
    return out;
}

Matrix as_matrix(const json& j, const char* name) {
    if (!j.is_array() || j.empty())
        throw Error(std::string("config: field '") + name + "' must be a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(n, j.front().size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> row = as_vector(j[i], name);
        if (row.size() != m.cols())
            throw Error(std::string("config: field '") + name + "' has ragged rows");
        for (std::size_t k = 0; k < row.size(); ++k) m(i, k) = row[k];
    }
    return m;
}

FirmNetwork network_from(const json& j) {
    if (j.contains("m12d") || j.contains("m21d") || j.contains("m12s") || j.contains("m21s")) {
        const std::vector<double> d = as_vector(require_field(j, "d"), "d");
        if (d.size() != 2) throw Error("config: two-firm shorthand needs d = [d1, d2]");
        auto scalar = [&](const char* name) {
            return j.contains(name) ? as_number(j.at(name), name) : 0.0;
        };
        return FirmNetwork::two_firm(d[0], d[1], scalar("m12s"), scalar("m21s"),
                                     scalar("m12d"), scalar("m21d"));
    }
    const std::vector<double> debt = as_vector(require_field(j, "debt"), "debt");
    const std::size_t n = debt.size();
    FirmNetwork net = FirmNetwork::without_holdings(debt);
    if (j.contains("ms")) net.ms = as_matrix(j.at("ms"), "ms");
    if (j.contains("md")) net.md = as_matrix(j.at("md"), "md");
    if (net.ms.rows() != n || net.md.rows() != n)
        throw Error("config: ms/md shape does not match debt length");
    return net;
}

MarketParams market_from(const json& j, std::size_t n) {
    MarketParams params;
    params.rate = as_number(require_field(j, "rate"), "rate");
    params.sigma = as_vector(require_field(j, "sigma"), "sigma");
    if (params.sigma.size() != n) throw Error("config: sigma length does not match firm count");
    if (j.contains("corr")) {
        params.corr = as_matrix(j.at("corr"), "corr");
    } else if (j.contains("rho")) {
        if (n != 2) throw Error("config: scalar 'rho' is a two-firm shorthand");
        const double rho = as_number(j.at("rho"), "rho");
        params.corr = Matrix{{1.0, rho}, {rho, 1.0}};
    } else if (n == 1) {
        params.corr = Matrix{{1.0}};
    } else {
        throw Error("config: market needs 'corr' (or 'rho' for two firms)");
    }
    params.t = j.contains("t") ? as_number(j.at("t"), "t") : 0.0;
    if (j.contains("maturity"))
        params.maturity = as_number(j.at("maturity"), "maturity");
    else if (j.contains("tau"))
        params.maturity = params.t + as_number(j.at("tau"), "tau");
    else
        throw Error("config: market needs 'maturity' or 'tau'");
    return params;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

FirmNetwork network_from_json(const std::string& text) {
    return network_from(parse(text));
}

MarketParams market_from_json(const std::string& text) {
    const json j = parse(text);
    const std::vector<double> sigma = as_vector(require_field(j, "sigma"), "sigma");
    return market_from(j, sigma.size());
}

Scenario scenario_from_json(const std::string& text) {
    const json j = parse(text);
    Scenario sc;
    sc.network = network_from(require_field(j, "network"));
    sc.market = market_from(require_field(j, "market"), sc.network.size());
    sc.spot = as_vector(require_field(j, "spot"), "spot");
    if (sc.spot.size() != sc.network.size())
        throw Error("config: spot length does not match firm count");
    if (j.contains("paths")) sc.n_paths = j.at("paths").get<std::size_t>();
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    return sc;
}

SweepConfig sweep_config_from_json(const std::string& text, SweepConfig cfg) {
    const json j = parse(text);
    if (j.contains("network")) {
        const json& net = j.at("network");
        if (net.contains("m12d")) cfg.m12d = as_vector(net.at("m12d"), "m12d");
        if (net.contains("m21d")) cfg.m21d = as_vector(net.at("m21d"), "m21d");
        if (net.contains("m12s")) cfg.m12s = as_vector(net.at("m12s"), "m12s");
        if (net.contains("m21s")) cfg.m21s = as_vector(net.at("m21s"), "m21s");
        if (net.contains("debt")) {
            const std::vector<double> d = as_vector(net.at("debt"), "debt");
            if (d.size() != 2) throw Error("config: sweep debt must be [d1, d2]");
            cfg.d1 = d[0];
            cfg.d2 = d[1];
        }
    }
    if (j.contains("market")) {
        const json& mkt = j.at("market");
        if (mkt.contains("sigma")) cfg.sigma = as_vector(mkt.at("sigma"), "sigma");
        if (mkt.contains("rho")) cfg.rho = as_vector(mkt.at("rho"), "rho");
        if (mkt.contains("rate")) cfg.rate = as_number(mkt.at("rate"), "rate");
        if (mkt.contains("tau")) cfg.tau = as_number(mkt.at("tau"), "tau");
    }
    if (j.contains("assets")) {
        const json& a = j.at("assets");
        if (a.contains("min")) cfg.a_min = as_number(a.at("min"), "assets.min");
        if (a.contains("max")) cfg.a_max = as_number(a.at("max"), "assets.max");
        if (a.contains("points")) cfg.a_points = a.at("points").get<std::size_t>();
        if (a.contains("spacing")) {
            const std::string s = a.at("spacing").get<std::string>();
            if (s != "log" && s != "linear") throw Error("config: assets.spacing must be 'log' or 'linear'");
            cfg.log_spacing = s == "log";
        }
    }
    if (j.contains("mc")) {
        const json& mc = j.at("mc");
        if (mc.contains("paths")) cfg.n_paths = mc.at("paths").get<std::size_t>();
        if (mc.contains("seed")) cfg.seed = mc.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

SurfaceConfig surface_config_from_json(const std::string& text, SurfaceConfig cfg) {
    const json j = parse(text);
    if (j.contains("network")) {
        const json& net = j.at("network");
        auto set = [&](const char* name, double& field) {
            if (net.contains(name)) field = as_number(net.at(name), name);
        };
        set("m12d", cfg.m12d);
        set("m21d", cfg.m21d);
        set("m12s", cfg.m12s);
        set("m21s", cfg.m21s);
        if (net.contains("debt")) {
            const std::vector<double> d = as_vector(net.at("debt"), "debt");
            if (d.size() != 2) throw Error("config: surface debt must be [d1, d2]");
            cfg.d1 = d[0];
            cfg.d2 = d[1];
        }
    }
    if (j.contains("market")) {
        const json& mkt = j.at("market");
        if (mkt.contains("sigma")) {
            const std::vector<double> s = as_vector(mkt.at("sigma"), "sigma");
            if (s.size() != 2) throw Error("config: surface sigma must be [sigma1, sigma2]");
            cfg.sigma1 = s[0];
            cfg.sigma2 = s[1];
        }
        if (mkt.contains("rho")) cfg.rho = as_number(mkt.at("rho"), "rho");
        if (mkt.contains("rate")) cfg.rate = as_number(mkt.at("rate"), "rate");
        if (mkt.contains("tau")) cfg.tau = as_number(mkt.at("tau"), "tau");
    }
    if (j.contains("assets")) {
        const json& a = j.at("assets");
        if (a.contains("min")) cfg.a_min = as_number(a.at("min"), "assets.min");
        if (a.contains("max")) cfg.a_max = as_number(a.at("max"), "assets.max");
        if (a.contains("points")) cfg.a_points = a.at("points").get<std::size_t>();
        if (a.contains("spacing")) {
            const std::string s = a.at("spacing").get<std::string>();
            if (s != "log" && s != "linear") throw Error("config: assets.spacing must be 'log' or 'linear'");
            cfg.log_spacing = s == "log";
        }
    }
    if (j.contains("mc")) {
        const json& mc = j.at("mc");
        if (mc.contains("paths")) cfg.n_paths = mc.at("paths").get<std::size_t>();
        if (mc.contains("seed")) cfg.seed = mc.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

std::string network_to_json(const FirmNetwork& net) {
    json j;
    j["debt"] = net.debt;
    const std::size_t n = net.size();
    json ms = json::array(), md = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json rs = json::array(), rd = json::array();
        for (std::size_t k = 0; k < n; ++k) {
            rs.push_back(net.ms(i, k));
            rd.push_back(net.md(i, k));
        }
        ms.push_back(rs);
        md.push_back(rd);
    }
    j["ms"] = ms;
    j["md"] = md;
    return j.dump(2);
}

std::string fig_csv(const std::vector<FigRow>& rows) {
    std::string out =
        "m12d,m21d,m12s,m21s,sigma,rho_asset,a_spot,s1_price,s1_se,rho_s,rho_s_se,sign_source\n";
    for (const FigRow& r : rows) {
        out += fmt(r.m12d) + ',' + fmt(r.m21d) + ',' + fmt(r.m12s) + ',' + fmt(r.m21s) + ',' +
               fmt(r.sigma) + ',' + fmt(r.rho_asset) + ',' + fmt(r.a_spot) + ',' +
               fmt(r.s1_price) + ',' + fmt(r.s1_se) + ',' + fmt(r.rho_s) + ',' +
               fmt(r.rho_s_se) + ',' + std::to_string(r.sign_source) + '\n';
    }
    return out;
}

std::string surface_csv(const std::vector<SurfaceRow>& rows) {
    std::string out = "a1,a2,region,rho_s,rho_s_se,sign_source\n";
    for (const SurfaceRow& r : rows) {
        out += fmt(r.a1) + ',' + fmt(r.a2) + ',' + to_string(r.region) + ',' + fmt(r.rho_s) +
               ',' + fmt(r.rho_s_se) + ',' + std::to_string(r.sign_source) + '\n';
    }
    return out;
}

std::string boundary_csv(const std::vector<BoundaryPoint>& points) {
    std::string out = "firm,a1,a2\n";
    for (const BoundaryPoint& p : points)
        out += std::to_string(p.firm) + ',' + fmt(p.a1) + ',' + fmt(p.a2) + '\n';
    return out;
}

std::string campaign_csv(const CampaignResult& result) {
    std::string out =
        "a1,a2,d1,d2,ms12,ms21,md12,md21,sigma1,sigma2,rho,rate,rho_s,rho_s_se,margin,defined,pass\n";
    for (const CampaignRecord& r : result.records) {
        out += fmt(r.a1) + ',' + fmt(r.a2) + ',' + fmt(r.d1) + ',' + fmt(r.d2) + ',' +
               fmt(r.ms12) + ',' + fmt(r.ms21) + ',' + fmt(r.md12) + ',' + fmt(r.md21) + ',' +
               fmt(r.sigma1) + ',' + fmt(r.sigma2) + ',' + fmt(r.rho) + ',' + fmt(r.rate) + ',' +
               fmt(r.rho_s) + ',' + fmt(r.rho_s_se) + ',' + fmt(r.margin) + ',' +
               (r.defined ? "1" : "0") + ',' + (r.pass ? "1" : "0") + '\n';
    }
    return out;
}

namespace {

json sweep_config_json(const SweepConfig& c) {
    json j;
    j["network"] = {{"m12d", c.m12d}, {"m21d", c.m21d}, {"m12s", c.m12s}, {"m21s", c.m21s},
                    {"debt", {c.d1, c.d2}}};
    j["market"] = {{"sigma", c.sigma}, {"rho", c.rho}, {"rate", c.rate}, {"tau", c.tau}};
    j["assets"] = {{"min", c.a_min}, {"max", c.a_max}, {"points", c.a_points},
                   {"spacing", c.log_spacing ? "log" : "linear"}};
    j["mc"] = {{"paths", c.n_paths}, {"seed", c.seed}};
    return j;
}

}  // namespace

std::string fig_metadata_json(const SweepConfig& config, const std::vector<FigRow>& rows,
                              const std::string& schema, double runtime_seconds) {
    json j;
    j["generator"] = "netval";
    j["version"] = "0.1.0";
    j["schema"] = schema;
    j["seed"] = config.seed;
    j["paths"] = config.n_paths;
    j["rows"] = rows.size();
    j["runtime_seconds"] = runtime_seconds;
    j["config"] = sweep_config_json(config);

    // Per-curve trend summary: does rho_s rise as equity falls?
    json trends = json::array();
    const std::size_t per_curve = config.a_points;
    for (std::size_t start = 0; start + per_curve <= rows.size(); start += per_curve) {
        const std::vector<FigRow> curve(rows.begin() + start, rows.begin() + start + per_curve);
        const CurveTrend trend = curve_trend(curve);
        trends.push_back({{"m12d", curve.front().m12d},
                          {"m21d", curve.front().m21d},
                          {"m12s", curve.front().m12s},
                          {"m21s", curve.front().m21s},
                          {"sigma", curve.front().sigma},
                          {"rho_asset", curve.front().rho_asset},
                          {"rho_s_rises_as_equity_falls", trend.rises_as_equity_falls},
                          {"worst_violation", trend.worst_violation}});
    }
    j["curve_trends"] = trends;
    return j.dump(2);
}

std::string surface_metadata_json(const SurfaceConfig& config, const SurfaceResult& result,
                                  double runtime_seconds) {
    json j;
    j["generator"] = "netval";
    j["version"] = "0.1.0";
    j["schema"] = "netval-fig2-v1";
    j["seed"] = config.seed;
    j["paths"] = config.n_paths;
    j["rows"] = result.rows.size();
    j["boundary_points"] = result.boundaries.size();
    j["runtime_seconds"] = runtime_seconds;
    j["config"] = {{"network",
                    {{"m12d", config.m12d}, {"m21d", config.m21d}, {"m12s", config.m12s},
                     {"m21s", config.m21s}, {"debt", {config.d1, config.d2}}}},
                   {"market",
                    {{"sigma", {config.sigma1, config.sigma2}}, {"rho", config.rho},
                     {"rate", config.rate}, {"tau", config.tau}}},
                   {"assets",
                    {{"min", config.a_min}, {"max", config.a_max}, {"points", config.a_points},
                     {"spacing", config.log_spacing ? "log" : "linear"}}}};
    return j.dump(2);
}

std::string campaign_metadata_json(const CampaignConfig& config, const CampaignResult& result) {
    json j;
    j["generator"] = "netval";
    j["version"] = "0.1.0";
    j["schema"] = "netval-campaign-v1";
    j["seed"] = config.seed;
    j["paths"] = config.n_paths;
    j["configs"] = config.n_configs;
    j["evaluated"] = result.evaluated;
    j["defined"] = result.defined;
    j["undefined"] = result.undefined;
    j["failures"] = result.failures;
    j["min_margin"] = result.min_margin;
    j["runtime_seconds"] = result.runtime_seconds;
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << contents;
    if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace netval
