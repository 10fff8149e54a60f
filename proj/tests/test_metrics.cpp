#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lvfp/acceptance.hpp"
#include "lvfp/metrics.hpp"

using namespace lvfp;

namespace {

// Cell-aligned unit blocks, so the histogram is the exact uniform density.
const GridSpec aligned{50.0, 1000};

DensityField block(double centre) { return uniform_density(centre - 0.5, centre + 0.5, aligned); }

// Brute-force double sum of |x-y|^r with midpoint nodes refined inside each cell.
double energy_bruteforce(const DensityField& f, const DensityField& g, double r, int sub)
{
    const double dx = f.grid.dx(), h = dx / sub;
    std::vector<double> xs, wf, wg;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (f.values[i] == 0.0 && g.values[i] == 0.0)
            continue;
        for (int k = 0; k < sub; ++k) {
            xs.push_back(static_cast<double>(i) * dx + (k + 0.5) * h);
            wf.push_back(f.values[i] * h);
            wg.push_back(g.values[i] * h);
        }
    }
    double s = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = 0; b < xs.size(); ++b)
            s += (wf[a] - wg[a]) * (wf[b] - wg[b]) * std::pow(std::abs(xs[a] - xs[b]), r);
    return -s;
}

}  // namespace

TEST_CASE("unit blocks one apart")
{
    const auto f = block(4.0), g = block(5.0);
    const auto sg = SpectralGrid::make();
    CHECK(cramer_cdf(f, g) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(energy_distance_r(f, g, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(weighted_integral(spectral_profile(f, g, sg), 2.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-4));
    CHECK(cramer_fourier(f, g, sg) == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("energy distance of order 1 is twice the Cramer distance")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 5; ++k) {
        const auto f = random_density(rng, GridSpec{}), g = random_density(rng, GridSpec{});
        CHECK(energy_distance_r(f, g, 1.0) == doctest::Approx(2.0 * cramer_cdf(f, g)).epsilon(1e-10));
    }
}

TEST_CASE("cell-pair kernel matches refined brute force")
{
    const GridSpec g{10.0, 100};
    const auto f = uniform_density(2.0, 3.5, g), h = uniform_density(2.7, 4.1, g);
    for (double r : {0.5, 1.0, 1.5}) {
        const double exact = energy_distance_r(f, h, r);
        const double brute = energy_bruteforce(f, h, r, 8);
        CHECK(brute == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("energy distance is a symmetric, nonnegative, translation-invariant divergence")
{
    std::mt19937_64 rng(11);
    for (int k = 0; k < 8; ++k) {
        const auto f = random_density(rng, GridSpec{}), g = random_density(rng, GridSpec{});
        for (double r : {0.5, 1.0, 1.5}) {
            const double a = energy_distance_r(f, g, r);
            CHECK(a > 0.0);
            CHECK(energy_distance_r(g, f, r) == doctest::Approx(a).epsilon(1e-12));
            CHECK(std::abs(energy_distance_r(f, f, r)) < 1e-14);
        }
    }
    auto shift = [](const DensityField& f, std::size_t s) {
        DensityField out = f;
        std::fill(out.values.begin(), out.values.end(), 0.0);
        for (std::size_t i = 0; i + s < f.values.size(); ++i)
            out.values[i + s] = f.values[i];
        return out;
    };
    const auto f = block(4.0), g = block(7.0);
    CHECK(energy_distance_r(shift(f, 40), shift(g, 40), 1.5) == doctest::Approx(energy_distance_r(f, g, 1.5)).epsilon(1e-12));
}

TEST_CASE("energy constant")
{
    CHECK(c_r_constant(1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    // c_r = Gamma(1+r) sin(pi r/2) / pi stays positive on (0, 2).
    for (double r : {0.1, 0.5, 1.5, 1.9})
        CHECK(c_r_constant(r) == doctest::Approx(std::tgamma(1.0 + r) * std::sin(std::numbers::pi * r / 2.0) / std::numbers::pi));
    CHECK_THROWS_AS(c_r_constant(2.0), std::domain_error);
    CHECK_THROWS_AS(energy_distance_r(block(4.0), block(5.0), 0.0), std::domain_error);
}

TEST_CASE("scaling constants")
{
    CHECK(lemma_constant(1.0, 1.25) == 6.0);
    CHECK(c_ell_constant(1.25) == doctest::Approx(9.21004).epsilon(1e-5));
    CHECK_THROWS_AS(lemma_constant(1.2, 1.0), std::domain_error);
    CHECK_THROWS_AS(lemma_constant(0.4, 1.0), std::domain_error);
    CHECK_THROWS_AS(c_ell_constant(1.0), std::domain_error);
    CHECK(scaling_bound(1.0, 1.25, 0.0) == 0.0);
}

TEST_CASE("scaling bound holds for random pairs")
{
    std::mt19937_64 rng(13);
    const auto sg = SpectralGrid::make();
    for (int k = 0; k < 10; ++k) {
        const auto prof = spectral_profile(random_density(rng, GridSpec{}), random_density(rng, GridSpec{}), sg);
        for (auto [l, ls] : {std::pair{0.7, 0.9}, std::pair{1.0, 1.3}}) {
            const double e = weighted_integral(prof, 2 * l), es = weighted_integral(prof, 2 * ls);
            CHECK(e <= scaling_bound(l, ls, es) * (1.0 + 1e-3));
        }
    }
}

TEST_CASE("energy norm report carries the truncation bound")
{
    const auto sg = SpectralGrid::make(1e-4, 1e3, 512);
    const auto rep = energy_norm_ell(block(4.0), block(6.0), 1.0, sg);
    CHECK(rep.kind == DistanceKind::energy_norm_ell);
    CHECK(rep.nodes == 1024);
    CHECK(rep.xi_max == 1e3);
    CHECK(rep.tail_bound == doctest::Approx(8.0 / 1e3));
    CHECK(rep.value == doctest::Approx(2.0 * std::numbers::pi * 5.0 / 3.0).epsilon(1e-3));
    CHECK_THROWS_AS(energy_norm_ell(block(4.0), block(6.0), 1.5, sg), std::domain_error);
    CHECK_THROWS_AS(SpectralGrid::make(0.0, 1.0, 10), std::domain_error);
}

TEST_CASE("distance kind names round-trip")
{
    for (auto k : {DistanceKind::energy_r, DistanceKind::energy_norm_ell, DistanceKind::cramer_cdf,
                   DistanceKind::cramer_fourier, DistanceKind::sobolev, DistanceKind::rel_entropy})
        CHECK(distance_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(distance_kind_from_string("wasserstein"), std::domain_error);
    const auto sg = SpectralGrid::make();
    const auto a = compute_distance(DistanceKind::cramer_fourier, 3.0, block(4.0), block(5.0), sg);
    CHECK(a.order == 1.0);
    CHECK(a.value == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("relative entropy and L1")
{
    const auto f = block(4.0), g = uniform_density(3.0, 6.0, aligned);
    CHECK(relative_entropy(f, g) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(relative_entropy(g, f) == std::numeric_limits<double>::infinity());
    CHECK(relative_entropy(f, f) == 0.0);
    CHECK(l1_distance(f, g) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(l1_distance(f, block(10.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(l1_distance(f, uniform_density(3.5, 4.5, GridSpec{50.0, 500})), std::domain_error);
}

TEST_CASE("Csiszar-Kullback inequality on random pairs")
{
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        const auto f = random_density(rng, GridSpec{}), g = random_density(rng, GridSpec{});
        const double h = relative_entropy(f, g), l1 = l1_distance(f, g);
        CHECK(h >= 0.0);
        CHECK(l1 * l1 <= 2.0 * h + 1e-12);
    }
}
