#pragma once

#include <cstdint>
#include <string>

#include "netval/gbm.hpp"
#include "netval/network.hpp"
#include "netval/sweeps.hpp"

namespace netval {

// JSON schemas for the CLI. All parsers throw Error with the offending
// field named.
//
// Network:  {"debt": [..], "ms": [[..]], "md": [[..]]}
//           ms/md omitted means no holdings; a two-firm shorthand
//           {"d": [d1,d2], "m12d": .., "m21d": .., "m12s": .., "m21s": ..}
//           is also accepted.
// Market:   {"rate": r, "sigma": [..], "corr": [[..]] | "rho": x,
//            "t": 0.0, "maturity": 1.0}   ("rho" only for two firms)
// Scenario: {"network": {..}, "market": {..}, "spot": [..],
//            "paths": N, "seed": S}

FirmNetwork network_from_json(const std::string& text);
MarketParams market_from_json(const std::string& text);

struct Scenario {
    FirmNetwork network;
    MarketParams market;
    std::vector<double> spot;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
};

Scenario scenario_from_json(const std::string& text);

// Sweep config: {"network": {"m12d": [..], "m21d": [..], "m12s": [..],
//   "m21s": [..], "debt": [d1, d2]}, "market": {"sigma": [..], "rho": [..],
//   "rate": r, "tau": t}, "assets": {"min": .., "max": .., "points": ..,
//   "spacing": "log"|"linear"}, "mc": {"paths": N, "seed": S}}.
// Missing sections keep the supplied defaults.
SweepConfig sweep_config_from_json(const std::string& text, SweepConfig defaults);

// Surface config mirrors the sweep config with scalar network/market fields.
SurfaceConfig surface_config_from_json(const std::string& text, SurfaceConfig defaults);

std::string network_to_json(const FirmNetwork& net);

// CSV renderings, schema "netval-*-v1". Headers always present; doubles are
// emitted with 17 significant digits so identical runs produce identical
// bytes.
std::string fig_csv(const std::vector<FigRow>& rows);
std::string surface_csv(const std::vector<SurfaceRow>& rows);
std::string boundary_csv(const std::vector<BoundaryPoint>& points);
std::string campaign_csv(const CampaignResult& result);

// Metadata sidecar describing a dataset: seed, path count, schema name,
// library version, runtime and optional per-curve trend summaries.
std::string fig_metadata_json(const SweepConfig& config, const std::vector<FigRow>& rows,
                              const std::string& schema, double runtime_seconds);
std::string surface_metadata_json(const SurfaceConfig& config, const SurfaceResult& result,
                                  double runtime_seconds);
std::string campaign_metadata_json(const CampaignConfig& config, const CampaignResult& result);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace netval
