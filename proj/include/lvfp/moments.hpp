#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lvfp/model.hpp"

namespace lvfp {

struct MomentTrajectory {
    std::vector<double> times;
    std::vector<MomentState> states;

    std::size_t size() const { return times.size(); }
    const MomentState& back() const { return states.back(); }
};

std::array<double, 2> lv_rhs(const ModelParams& params, double m1, double m2);

// m2p_k is the moment of order 2p of species k, supplied by the caller.
std::array<double, 2> variance_rhs(const ModelParams& params, const MomentState& state,
                                   double m2p_1, double m2p_2);

// E[X^{2p}] from mean and variance; only p = 1/2 and p = 1 close.
double closed_moment_2p(double p, double mean, double variance);

// One classical RK4 step of the mean equations alone (closed for every p).
std::array<double, 2> lv_rk4_step(const ModelParams& params, std::array<double, 2> m, double h);

// RK4 with fixed dt on (m1, m2, v1, v2). The last step is shortened so the
// trajectory ends exactly at t_end. Every `record_every`-th state is kept,
// plus the initial and final ones.
MomentTrajectory integrate_moments(const ModelParams& params, const MomentState& initial,
                                   double t_end, double dt, std::size_t record_every = 1);

// Mean equations only; variances are carried through unchanged.
MomentTrajectory integrate_means(const ModelParams& params, const MomentState& initial,
                                 double t_end, double dt, std::size_t record_every = 1);

}  // namespace lvfp
