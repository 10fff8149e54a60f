#pragma once

#include <cstddef>
#include <vector>

#include "lvfp/model.hpp"

namespace lvfp {

struct GridSpec {
    double L = 50.0;
    int n = 1001;

    double dx() const { return L / n; }
    double x(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx(); }
    std::vector<double> centers() const;
    void validate() const;
};

// Cell averages on a uniform grid. Metrics interpret the field as the
// piecewise-constant density it represents.
struct DensityField {
    GridSpec grid;
    std::vector<double> values;

    double mass() const;
    double mean() const;
    double variance() const;
    // Moment sum_i x_i^k f_i dx for real k.
    double moment(double k) const;
    double min() const;
    // Throws std::domain_error on negative values or mass off by more than tol.
    void validate(double mass_tol = 1e-10) const;
};

enum class DensityFamily { gamma, inverse_gamma, generalized };

// Unit-mass zero-flux profile x^{-2p} exp(-a x^{2-2p} - b x^{1-2p}) and its endpoints.
struct GenGammaParams {
    double p = 0.5;
    double lam = 0.0;
    double mu = 0.0;
    double sigma_sq = 0.0;
    double log_norm = 0.0;
    DensityFamily family = DensityFamily::gamma;

    // Gamma: shape 2mu/sigma^2, scale sigma^2/(2 lam).
    // Inverse gamma: shape 1 + 2 lam/sigma^2, scale 2 mu/sigma^2.
    double shape() const;
    double scale() const;

    double log_pdf(double x) const;
    double pdf(double x) const;
    double mean() const;
    // Mass on (L, inf).
    double tail_mass(double L) const;
};

GenGammaParams quasi_equilibrium(const CoefficientSet& coeffs, Species species, double p);
GenGammaParams quasi_equilibrium(const SpeciesCoeffs& c, double p);

GenGammaParams equilibrium_density(const ModelParams& params, Species species);

struct SampledDensity {
    DensityField field;
    double renormalization = 1.0;
};

SampledDensity sample_on_grid_checked(const GenGammaParams& gg, const GridSpec& grid);
DensityField sample_on_grid(const GenGammaParams& gg, const GridSpec& grid);

// Cell averages of the uniform density on [a, b], 0 <= a < b <= L.
DensityField uniform_density(double a, double b, const GridSpec& grid);

double flux_residual(const DensityField& f, const SpeciesCoeffs& c, double p);

}  // namespace lvfp
