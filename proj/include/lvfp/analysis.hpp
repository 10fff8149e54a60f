#pragma once

#include <optional>
#include <vector>

#include "lvfp/densities.hpp"
#include "lvfp/model.hpp"
#include "lvfp/moments.hpp"

namespace lvfp {

struct FitResult {
    double rate = 0.0;
    double t_begin = 0.0;
    double t_end = 0.0;
    std::size_t samples = 0;
};

struct DecayRecord {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> envelope_duhamel;  // empty when not applicable
    std::vector<double> envelope_closed;
    std::optional<FitResult> fit;
    std::optional<double> theory_rate;
};

struct PerturbationCoeffs {
    std::vector<double> times;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> m;        // A ||x f_inf|| + B ||f_inf||, signed
    std::vector<double> forcing;  // |A| ||x f_inf|| + |B| ||f_inf||, drives the envelope
    double norm_f = 0.0;          // ||f_inf||_{L2}
    double norm_xf = 0.0;         // ||x f_inf||_{L2}
    bool converged = true;        // false when m(t_end) is not near m_inf
};

PerturbationCoeffs perturbation_coeffs(const ModelParams& params, const MomentTrajectory& traj,
                                       Species species, const GridSpec& grid = {},
                                       double converged_tol = 1e-6);

struct CramerEnvelope {
    std::vector<double> times;
    std::vector<double> duhamel;
    std::vector<double> closed;
    double lambda_star = 0.0;
};

CramerEnvelope cramer_envelope(const ModelParams& params, Species species, double d0,
                               const MomentTrajectory& traj, const GridSpec& grid = {});

double energy_decay_rate(double p, double ell, const SpeciesCoeffs& c);

// No value when fewer than 10 samples fall in the fit window.
std::optional<FitResult> fit_rate(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace lvfp
