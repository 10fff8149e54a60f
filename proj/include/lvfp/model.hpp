#pragma once

#include <array>

namespace lvfp {

enum class Species { prey = 1, predator = 2 };

inline constexpr std::array<Species, 2> kSpecies{Species::prey, Species::predator};

inline int index_of(Species s) { return s == Species::prey ? 0 : 1; }

struct ModelParams {
    double alpha = 1.0;
    double beta = 0.5;
    double gamma = 0.15;
    double K = 100.0;
    double sigma1 = 0.05;
    double sigma2 = 0.05;
    double chi = 0.0;
    double theta = 0.0;
    double nu = 1.0;
    double mu = 10.0;
    double p = 0.5;

    // Predator death rate; derived, never stored.
    double delta() const { return gamma * mu - nu; }

    // Throws std::domain_error naming the first violated invariant.
    // Diffusion strengths may be zero (deterministic limit) but not negative.
    void validate() const;
    // validate() plus the coexistence requirement gamma*K - delta > 0.
    void validate_admissible() const;
};

struct MomentState {
    double t = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
};

// Drift/diffusion triple of one species.
struct SpeciesCoeffs {
    double sigma_sq = 0.0;
    double lambda = 0.0;
    double mu = 0.0;
};

struct CoefficientSet {
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;

    SpeciesCoeffs of(Species s) const
    {
        if (s == Species::prey)
            return {sigma1_sq, lambda1, mu1};
        return {sigma2_sq, lambda2, mu2};
    }
};

CoefficientSet coefficients_from_means(const ModelParams& params, double m1, double m2);

std::array<double, 2> equilibrium_mean(const ModelParams& params);

CoefficientSet asymptotic_coefficients(const ModelParams& params);

// Closed forms exist only for p = 1/2 and p = 1.
std::array<double, 2> stationary_variances(const ModelParams& params);

bool is_half(double p);
bool is_one(double p);

}  // namespace lvfp
