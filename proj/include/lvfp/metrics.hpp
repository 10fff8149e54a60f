#pragma once

#include <string>
#include <vector>

#include "lvfp/densities.hpp"

namespace lvfp {

// Log-spaced frequency nodes on [xi_min, xi_max] for one half-line; the mirror
// half is accounted for by symmetry of |f^ - g^|. Weights are trapezoidal in
// log(xi).
struct SpectralGrid {
    double xi_min = 1e-4;
    double xi_max = 1e3;
    int m = 2048;
    std::vector<double> nodes;
    std::vector<double> weights;

    static SpectralGrid make(double xi_min = 1e-4, double xi_max = 1e3, int m = 2048);
};

enum class DistanceKind { energy_r, energy_norm_ell, cramer_cdf, cramer_fourier, sobolev, rel_entropy };

std::string to_string(DistanceKind k);
DistanceKind distance_kind_from_string(const std::string& s);

struct DistanceReport {
    DistanceKind kind = DistanceKind::energy_norm_ell;
    double order = 1.0;
    double value = 0.0;
    double xi_max = 0.0;  // 0 for real-space kinds
    int nodes = 0;
    double tail_bound = 0.0;
};

// |f^ - g^|^2 at the spectral nodes plus the mean difference for the
// small-frequency piece. Reusable across orders for one pair.
struct SpectralProfile {
    std::vector<double> power;
    double mean_diff = 0.0;
    const SpectralGrid* grid = nullptr;
};

SpectralProfile spectral_profile(const DensityField& f, const DensityField& g, const SpectralGrid& sg);

// Integral over the real line of power / |xi|^s, 1 < s < 3.
double weighted_integral(const SpectralProfile& prof, double s);

double energy_distance_r(const DensityField& f, const DensityField& g, double r);
double energy_distance_fourier(const DensityField& f, const DensityField& g, double r,
                               const SpectralGrid& sg);
double c_r_constant(double r);

DistanceReport energy_norm_ell(const DensityField& f, const DensityField& g, double ell,
                               const SpectralGrid& sg);
double cramer_cdf(const DensityField& f, const DensityField& g);
double cramer_fourier(const DensityField& f, const DensityField& g, const SpectralGrid& sg);

double lemma_constant(double ell, double ell_star);
double scaling_bound(double ell, double ell_star, double e_star);
double c_ell_constant(double ell);

// +infinity when f > 0 on a cell where g == 0.
double relative_entropy(const DensityField& f, const DensityField& g);
double l1_distance(const DensityField& f, const DensityField& g);

DistanceReport compute_distance(DistanceKind kind, double order, const DensityField& f,
                                 const DensityField& g, const SpectralGrid& sg);

}  // namespace lvfp
