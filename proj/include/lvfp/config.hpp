#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lvfp/fpsolver.hpp"
#include "lvfp/metrics.hpp"
#include "lvfp/model.hpp"

namespace lvfp {

struct MetricRequest {
    DistanceKind kind = DistanceKind::energy_norm_ell;
    double order = 1.0;
};

struct RunConfig {
    ModelParams model;
    SolverConfig solver;

    // moment ODE runs
    double moments_dt = 1e-3;
    double moments_t_end = 50.0;
    double moments_output_interval = 0.1;
    std::vector<std::array<double, 2>> moments_initial{{4.5, 0.75}, {5.25, 3.75}, {6.75, 5.25}, {7.5, 6.0}};
    std::array<double, 2> moments_v0{0.1, 0.1};

    // PDE runs
    std::array<double, 2> initial_means{4.0, 3.0};
    std::vector<double> snapshot_times{1.0, 10.0, 20.0};
    bool quasi_snapshots = true;

    std::vector<MetricRequest> metrics{{DistanceKind::energy_norm_ell, 0.6},
                                       {DistanceKind::energy_norm_ell, 0.7},
                                       {DistanceKind::energy_norm_ell, 0.8},
                                       {DistanceKind::cramer_cdf, 1.0}};
    double xi_min = 1e-4;
    double xi_max = 1e3;
    int xi_nodes = 2048;

    std::string outdir = "out";
    std::string tag = "run";
    std::uint64_t seed = 20240601;

    std::string sweep_param = "model.sigma1";
    std::vector<double> sweep_values{0.05, 0.1, 0.2};

    void validate() const;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys throw ConfigError.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

// Applies one key. Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv);

// Canonical dump of every key, readable back by parse_config_text.
std::string dump_config(const RunConfig& cfg);

std::vector<std::string> known_config_keys();

}  // namespace lvfp
