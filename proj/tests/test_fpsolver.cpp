#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lvfp/errors.hpp"
#include "lvfp/fpsolver.hpp"
#include "lvfp/metrics.hpp"
#include "lvfp/moments.hpp"

using namespace lvfp;

namespace {

SystemState initial(const ModelParams& q, const GridSpec& g)
{
    return make_initial_state(q, indicator_initial(4.0, g), indicator_initial(3.0, g));
}

// Applies the flux operator to f: (L f)_i = (G_{i+1/2} - G_{i-1/2}) / dx.
std::vector<double> apply(const FaceFluxes& ff, double dx, const std::vector<double>& f)
{
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 0; j < ff.A.size(); ++j) {
        const double g = ff.A[j] * f[j + 1] - ff.B[j] * f[j];
        out[j] += g / dx;
        out[j + 1] -= g / dx;
    }
    return out;
}

const SpeciesCoeffs mild{0.5, 1.0, 3.0};

}  // namespace

TEST_CASE("drift-diffusion split")
{
    const auto bd = drift_diffusion_split(mild, 0.5, 4.0);
    CHECK(bd.D == doctest::Approx(0.25 * 4.0));
    CHECK(bd.B == doctest::Approx(4.0 - 3.0 + 0.25));
    const auto b1 = drift_diffusion_split(mild, 1.0, 2.0);
    CHECK(b1.D == doctest::Approx(0.25 * 4.0));
    CHECK(b1.B == doctest::Approx(2.0 - 3.0 + 0.5 * 2.0));
    CHECK_THROWS_AS(drift_diffusion_split(mild, 0.5, -1.0), std::domain_error);
}

TEST_CASE("flux coefficients are nonnegative and conserve mass")
{
    const GridSpec g{50.0, 400};
    for (auto scheme : {FluxScheme::moment_fitted, FluxScheme::chang_cooper})
        for (double p : {0.5, 0.75, 1.0}) {
            const auto ff = face_fluxes(mild, p, g, scheme);
            for (std::size_t j = 0; j < ff.A.size(); ++j) {
                CHECK(ff.A[j] >= 0);
                CHECK(ff.B[j] >= 0);
            }
            const auto f = uniform_density(2.0, 5.0, g);
            const auto lf = apply(ff, g.dx(), f.values);
            double s = 0.0;
            for (double v : lf)
                s += v;
            CHECK(std::abs(s) < 1e-10);
        }
}

TEST_CASE("moment-fitted fluxes move the mean exactly by mu - lambda m")
{
    const GridSpec g{50.0, 400};
    for (double p : {0.5, 0.75, 1.0}) {
        const auto ff = face_fluxes(mild, p, g, FluxScheme::moment_fitted);
        const auto f = uniform_density(2.0, 6.0, g);
        const auto lf = apply(ff, g.dx(), f.values);
        double dm = 0.0;
        for (std::size_t i = 0; i < lf.size(); ++i)
            dm += g.x(i) * lf[i] * g.dx();
        CHECK(dm == doctest::Approx(mild.mu - mild.lambda * f.mean()).epsilon(1e-9));
    }
}

TEST_CASE("implicit solve inverts I - hL")
{
    const GridSpec g{50.0, 300};
    const auto ff = face_fluxes(mild, 0.5, g, FluxScheme::moment_fitted);
    const auto f = uniform_density(2.0, 5.0, g);
    const double h = 0.3;
    const auto u = implicit_solve(ff, h, g.dx(), f.values);
    const auto lu = apply(ff, g.dx(), u);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(u[i] - h * lu[i] == doctest::Approx(f.values[i]).epsilon(1e-10).scale(1.0));
    for (double v : u)
        CHECK(v >= 0.0);
}

TEST_CASE("sampled quasi-equilibrium is nearly stationary under frozen coefficients")
{
    ModelParams q;
    SolverConfig c;
    c.grid = {50.0, 1001};
    c.frozen = asymptotic_coefficients(q);
    c.t_end = 5.0;
    for (double p : {0.5, 1.0}) {
        q.p = p;
        const auto f1 = sample_on_grid(equilibrium_density(q, Species::prey), c.grid);
        const auto f2 = sample_on_grid(equilibrium_density(q, Species::predator), c.grid);
        const auto end = run(q, c, make_initial_state(q, f1, f2), nullptr);
        CHECK(l1_distance(end.f1, f1) < 10 * c.grid.dx() * c.grid.dx());
        CHECK(l1_distance(end.f2, f2) < 10 * c.grid.dx() * c.grid.dx());
    }
}

TEST_CASE("mass and positivity are preserved by every scheme combination")
{
    ModelParams q;
    const GridSpec g{50.0, 301};
    for (auto flux : {FluxScheme::moment_fitted, FluxScheme::chang_cooper})
        for (auto time : {TimeScheme::fitted_midpoint, TimeScheme::euler})
            for (auto coupling : {Coupling::self_consistent, Coupling::prescribed_ode}) {
                SolverConfig c;
                c.grid = g;
                c.t_end = 5.0;
                c.flux = flux;
                c.time = time;
                c.coupling = coupling;
                run(q, c, initial(q, g), [&](const SystemState& s) {
                    CHECK(std::abs(s.f1.mass() - 1.0) < 1e-12);
                    CHECK(std::abs(s.f2.mass() - 1.0) < 1e-12);
                    CHECK(s.f1.min() >= 0.0);
                    CHECK(s.f2.min() >= 0.0);
                });
            }
}

TEST_CASE("self-consistent and prescribed coupling agree to discretization error")
{
    ModelParams q;
    SolverConfig c;
    c.grid = {50.0, 501};
    c.t_end = 5.0;
    const auto a = run(q, c, initial(q, c.grid), nullptr);
    c.coupling = Coupling::prescribed_ode;
    const auto b = run(q, c, initial(q, c.grid), nullptr);
    CHECK(std::abs(a.f1.mean() - b.f1.mean()) < 0.02);
    CHECK(std::abs(a.f2.mean() - b.f2.mean()) < 0.02);
    // Prescribed means follow RK4 from the discrete initial means.
    const auto m0 = initial(q, c.grid).ode_means;
    const auto tr = integrate_means(q, {0.0, m0[0], m0[1], 0.0, 0.0}, 5.0, 1e-3);
    CHECK(b.ode_means[0] == doctest::Approx(tr.back().m1).epsilon(1e-6));
}

TEST_CASE("fitted midpoint tracks the mean equations at second order")
{
    ModelParams q;
    auto deviation = [&](int n) {
        SolverConfig c;
        c.grid = {50.0, n};
        c.t_end = 10.0;
        std::array<double, 2> m{4.0, 3.0};
        double t_ref = 0.0, worst = 0.0;
        run(q, c, initial(q, c.grid), [&](const SystemState& s) {
            const int sub = static_cast<int>(std::ceil((s.t - t_ref) / 1e-3 - 1e-9));
            for (int k = 0; k < sub; ++k)
                m = lv_rk4_step(q, m, (s.t - t_ref) / sub);
            t_ref = s.t;
            worst = std::max({worst, std::abs(s.f1.mean() - m[0]), std::abs(s.f2.mean() - m[1])});
        });
        return worst;
    };
    const double r = deviation(251) / deviation(501);
    CHECK(r > 3.0);
    CHECK(r < 5.0);
}

TEST_CASE("observer cadence and final time")
{
    ModelParams q;
    SolverConfig c;
    c.grid = {50.0, 201};
    c.dt = 0.1;
    c.t_end = 1.05;
    c.output_stride = 4;
    const auto states = run(q, c, initial(q, c.grid));
    REQUIRE(states.size() == 4);  // t = 0, 0.4, 0.8, 1.05
    CHECK(states.back().t == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(states[1].t == doctest::Approx(0.4));
}

TEST_CASE("configuration and initial data errors")
{
    const GridSpec g;
    CHECK_THROWS_AS(indicator_initial(0.2, g), std::domain_error);
    CHECK_THROWS_AS(indicator_initial(49.8, g), std::domain_error);
    SolverConfig c;
    c.output_stride = 0;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = {};
    c.t_end = -1.0;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    ModelParams q;
    c = {};
    c.grid = {50.0, 501};
    CHECK_THROWS_AS(run(q, c, initial(q, GridSpec{}), nullptr), std::domain_error);
}

TEST_CASE("deterministic limit transports without spreading mass to the wrong side")
{
    ModelParams q;
    q.sigma1 = q.sigma2 = 0.0;
    SolverConfig c;
    c.grid = {50.0, 501};
    c.t_end = 2.0;
    const auto end = run(q, c, initial(q, c.grid), nullptr);
    CHECK(end.f1.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(end.f1.min() >= 0.0);
}
