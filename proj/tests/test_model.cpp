#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lvfp/model.hpp"
#include "lvfp/moments.hpp"

using namespace lvfp;

namespace {

// Independent root of the mean equations by nested bisection on m1, using
// the predator nullcline for m1 and the prey nullcline for m2.
std::array<double, 2> bisect_fixed_point(const ModelParams& q)
{
    auto predator_rate = [&](double m1) { return q.gamma * m1 - q.delta(); };
    double lo = 1e-9, hi = q.K;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (predator_rate(mid) < 0 ? lo : hi) = mid;
    }
    const double m1 = 0.5 * (lo + hi);
    return {m1, q.alpha * (1.0 - m1 / q.K) / q.beta};
}

}  // namespace

TEST_CASE("default parameters are admissible and delta is derived")
{
    ModelParams q;
    CHECK(q.delta() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_NOTHROW(q.validate_admissible());
    q.mu = 20.0;
    CHECK(q.delta() == doctest::Approx(2.0));
}

TEST_CASE("validation names the violated field")
{
    ModelParams q;
    q.beta = 0.0;
    CHECK_THROWS_WITH_AS(q.validate(), doctest::Contains("beta"), std::domain_error);
    q = {};
    q.p = 1.2;
    CHECK_THROWS_AS(q.validate(), std::domain_error);
    q = {};
    q.mu = 5.0;  // delta = -0.25
    CHECK_THROWS_WITH_AS(q.validate(), doctest::Contains("delta"), std::domain_error);
    q = {};
    q.sigma1 = -0.1;
    CHECK_THROWS_AS(q.validate(), std::domain_error);
    q = {};
    q.sigma1 = q.sigma2 = 0.0;
    CHECK_NOTHROW(q.validate());
}

TEST_CASE("small carrying capacity has no coexistence state")
{
    ModelParams q;
    q.K = 0.01;
    CHECK_NOTHROW(q.validate());
    CHECK_THROWS_WITH_AS(equilibrium_mean(q), doctest::Contains("coexistence"), std::domain_error);
}

TEST_CASE("fixed point matches closed form and a bisection oracle")
{
    ModelParams q;
    const auto m = equilibrium_mean(q);
    CHECK(m[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(m[1] == doctest::Approx(29.0 / 15.0).epsilon(1e-15));
    for (double K : {20.0, 100.0, 1e4}) {
        q.K = K;
        const auto a = equilibrium_mean(q);
        const auto b = bisect_fixed_point(q);
        CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
        CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
        const auto r = lv_rhs(q, a[0], a[1]);
        CHECK(std::abs(r[0]) < 1e-13);
        CHECK(std::abs(r[1]) < 1e-13);
    }
}

TEST_CASE("coefficients from means")
{
    ModelParams q;
    const auto c = coefficients_from_means(q, 4.0, 3.0);
    CHECK(c.sigma1_sq == doctest::Approx(0.0025 * 7.0));
    CHECK(c.lambda1 == doctest::Approx(1.5 + 0.04));
    CHECK(c.mu1 == doctest::Approx(4.0));
    CHECK(c.sigma2_sq == doctest::Approx(0.0025 * 4.0));
    CHECK(c.lambda2 == doctest::Approx(0.15 * 6.0));
    CHECK(c.mu2 == doctest::Approx(3.0));
    CHECK(c.of(Species::prey).lambda == c.lambda1);
    CHECK(c.of(Species::predator).mu == c.mu2);
    CHECK_THROWS_AS(coefficients_from_means(q, 0.0, 1.0), std::domain_error);
}

TEST_CASE("asymptotic coefficients at the default parameters")
{
    const auto c = asymptotic_coefficients(ModelParams{});
    CHECK(c.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.mu1 == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(c.lambda2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.mu2 == doctest::Approx(29.0 / 15.0).epsilon(1e-14));
    CHECK(c.sigma1_sq == doctest::Approx(0.0025 * (10.0 / 3.0 + 29.0 / 15.0)).epsilon(1e-14));
    CHECK(c.sigma2_sq == doctest::Approx(0.0025 * 10.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("mean drift of the coefficients reproduces the mean equations")
{
    ModelParams q;
    q.chi = 0.2;
    q.theta = 0.4;
    for (double m1 : {0.3, 2.0, 7.5})
        for (double m2 : {0.1, 1.0, 4.0}) {
            const auto c = coefficients_from_means(q, m1, m2);
            const auto r = lv_rhs(q, m1, m2);
            CHECK(c.mu1 - c.lambda1 * m1 == doctest::Approx(r[0]).epsilon(1e-12).scale(1.0));
            CHECK(c.mu2 - c.lambda2 * m2 == doctest::Approx(r[1]).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("asymptotic coefficients keep the mean at mu/lambda")
{
    for (double chi : {0.0, 0.3})
        for (double theta : {0.0, 0.5}) {
            ModelParams q;
            q.chi = chi;
            q.theta = theta;
            const auto m = equilibrium_mean(q);
            const auto c = asymptotic_coefficients(q);
            CHECK(c.mu1 / c.lambda1 == doctest::Approx(m[0]).epsilon(1e-13));
            CHECK(c.mu2 / c.lambda2 == doctest::Approx(m[1]).epsilon(1e-13));
        }
}

TEST_CASE("stationary variances")
{
    ModelParams q;
    auto v = stationary_variances(q);
    CHECK(v[0] == doctest::Approx(0.0219444).epsilon(5e-6));
    CHECK(v[1] == doctest::Approx(0.00805556).epsilon(5e-6));
    q.p = 1.0;
    v = stationary_variances(q);
    CHECK(v[0] == doctest::Approx(0.073633).epsilon(5e-6));
    CHECK(v[1] == doctest::Approx(0.0156392).epsilon(5e-6));
    q.p = 0.75;
    CHECK_THROWS_AS(stationary_variances(q), std::domain_error);
}

TEST_CASE("stationary variances are zero without noise")
{
    ModelParams q;
    q.sigma1 = q.sigma2 = 0.0;
    for (double p : {0.5, 1.0}) {
        q.p = p;
        const auto v = stationary_variances(q);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
    }
}
