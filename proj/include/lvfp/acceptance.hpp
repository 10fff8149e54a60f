#pragma once

#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "lvfp/densities.hpp"

namespace lvfp {

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string name;
    std::vector<std::string> tags;
    std::function<CriterionResult()> check;
};

std::vector<Criterion> acceptance_criteria();

// Runs every criterion whose id or tags match `filter` (all when empty), printing
// one line per criterion. Returns the number of failures.
int run_acceptance(std::ostream& os, const std::string& filter = "");

// Random unit-mass test density: a gamma profile, a uniform block, or a
// two-component gamma mixture, all well inside the grid.
DensityField random_density(std::mt19937_64& rng, const GridSpec& grid);

}  // namespace lvfp
