#pragma once

#include <string>
#include <vector>

#include "lvfp/analysis.hpp"
#include "lvfp/config.hpp"

namespace lvfp {

// Each command writes under cfg.outdir (created if missing) and returns the
// paths it wrote.
std::vector<std::string> cmd_moments(const RunConfig& cfg);
std::vector<std::string> cmd_simulate(const RunConfig& cfg);
std::vector<std::string> cmd_distances(const RunConfig& cfg);
std::vector<std::string> cmd_sweep(const RunConfig& cfg, unsigned threads);

enum class Target { quasi, equilibrium };

struct DistanceSeries {
    MetricRequest request;
    Species species = Species::prey;
    Target target = Target::equilibrium;
    DecayRecord record;
    DistanceReport last;
};

// In-line simulation from indicator data at cfg.initial_means, measuring every
// requested distance against the quasi-equilibrium and the equilibrium at each
// output time.
std::vector<DistanceSeries> distance_series(const RunConfig& cfg);

// Sweep worker count from LVFP_THREADS, falling back to the hardware count.
unsigned sweep_threads_from_env();

}  // namespace lvfp
