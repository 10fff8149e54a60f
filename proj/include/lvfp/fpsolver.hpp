#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "lvfp/densities.hpp"
#include "lvfp/model.hpp"

namespace lvfp {

enum class Coupling { self_consistent, prescribed_ode };

// moment_fitted: exponential fitting to the quasi-equilibrium potential with
// face weights built so that discrete means obey the mean equations exactly.
// chang_cooper: classic exponential fitting with face-evaluated B and D.
enum class FluxScheme { moment_fitted, chang_cooper };

// fitted_midpoint: coefficients at a predicted half-step mean, implicit solve
// with step (e^{lambda dt} - 1)/lambda; second order for the means.
// euler: coefficients at the old means, plain implicit Euler.
enum class TimeScheme { fitted_midpoint, euler };

struct SolverConfig {
    GridSpec grid;
    double dt = 0.0;  // <= 0 selects dx/2
    double t_end = 50.0;
    Coupling coupling = Coupling::self_consistent;
    FluxScheme flux = FluxScheme::moment_fitted;
    TimeScheme time = TimeScheme::fitted_midpoint;
    int output_stride = 1;
    std::optional<CoefficientSet> frozen;  // pin coefficients for the whole run

    double step_size() const { return dt > 0 ? dt : 0.5 * grid.dx(); }
    void validate() const;
};

struct SystemState {
    DensityField f1;
    DensityField f2;
    double t = 0.0;
    CoefficientSet coeffs;
    std::array<double, 2> ode_means{0.0, 0.0};  // used by prescribed-ode coupling

    const DensityField& f(Species s) const { return s == Species::prey ? f1 : f2; }
    void validate(double mass_tol = 1e-10) const;
};

struct DriftDiffusion {
    double B = 0.0;
    double D = 0.0;
};

// Flux form d_t f = d_x [B f + D d_x f] of the species equation.
DriftDiffusion drift_diffusion_split(const SpeciesCoeffs& c, double p, double x);

// Face coefficients of G_{j+1/2} = A_j f_{j+1} - B_j f_j, j = 0..n-2, so that
// d_t f_i = (G_{i+1/2} - G_{i-1/2}) / dx with zero flux at both ends.
struct FaceFluxes {
    std::vector<double> A;
    std::vector<double> B;
    double tilt = 0.0;  // moment_fitted only
};

FaceFluxes face_fluxes(const SpeciesCoeffs& c, double p, const GridSpec& grid, FluxScheme scheme);

// Solves (I - h L) g = f for the operator above; h >= 0.
std::vector<double> implicit_solve(const FaceFluxes& ff, double h, double dx,
                                   const std::vector<double>& f);

DensityField indicator_initial(double m0, const GridSpec& grid);

SystemState make_initial_state(const ModelParams& params, const DensityField& f1,
                               const DensityField& f2);

SystemState step(const SystemState& state, const ModelParams& params, const SolverConfig& config);

using SnapshotObserver = std::function<void(const SystemState&)>;

// Calls `observe` on the initial state and every output_stride steps, and on
// the final state.
SystemState run(const ModelParams& params, const SolverConfig& config, const SystemState& initial,
                const SnapshotObserver& observe);

std::vector<SystemState> run(const ModelParams& params, const SolverConfig& config,
                             const SystemState& initial);

}  // namespace lvfp
