#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lvfp/errors.hpp"
#include "lvfp/moments.hpp"

using namespace lvfp;

TEST_CASE("mean vector field at (4, 3)")
{
    const auto r = lv_rhs(ModelParams{}, 4.0, 3.0);
    CHECK(r[0] == doctest::Approx(-2.16).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(0.3).epsilon(1e-14));  // -0.5*3 + 0.15*4*3
}

TEST_CASE("moment closure")
{
    CHECK(closed_moment_2p(0.5, 3.0, 0.2) == 3.0);
    CHECK(closed_moment_2p(1.0, 3.0, 0.2) == doctest::Approx(9.2));
    CHECK_THROWS_WITH_AS(closed_moment_2p(0.75, 3.0, 0.2), doctest::Contains("closure"), std::domain_error);
    ModelParams q;
    q.p = 0.75;
    CHECK_THROWS_AS(integrate_moments(q, {0, 4, 3, 0.1, 0.1}, 1.0, 1e-2), std::domain_error);
    CHECK_NOTHROW(integrate_means(q, {0, 4, 3, 0, 0}, 1.0, 1e-2));
}

TEST_CASE("variance equation relaxes linearly towards its source")
{
    ModelParams q;
    MomentState s{0.0, 4.0, 3.0, 0.0, 0.0};
    const auto c = coefficients_from_means(q, 4.0, 3.0);
    const auto dv = variance_rhs(q, s, 4.0, 3.0);
    CHECK(dv[0] == doctest::Approx(c.sigma1_sq * 4.0));
    CHECK(dv[1] == doctest::Approx(c.sigma2_sq * 3.0));
    s.v1 = 0.5;
    CHECK(variance_rhs(q, s, 4.0, 3.0)[0] == doctest::Approx(c.sigma1_sq * 4.0 - c.lambda1));
}

TEST_CASE("RK4 converges at fourth order")
{
    ModelParams q;
    const MomentState init{0.0, 4.5, 0.75, 0.1, 0.1};
    auto end_at = [&](double dt) { return integrate_moments(q, init, 5.0, dt).back(); };
    const auto ref = end_at(1e-4);
    const auto a = end_at(0.1), b = end_at(0.05);
    const double ea = std::abs(a.m1 - ref.m1) + std::abs(a.m2 - ref.m2) + std::abs(a.v1 - ref.v1);
    const double eb = std::abs(b.m1 - ref.m1) + std::abs(b.m2 - ref.m2) + std::abs(b.v1 - ref.v1);
    CHECK(std::log2(ea / eb) >= 3.8);
}

TEST_CASE("last step lands on t_end and recording stride is honoured")
{
    ModelParams q;
    const auto tr = integrate_moments(q, {0.0, 4.0, 3.0, 0.0, 0.0}, 1.05, 0.1, 3);
    CHECK(tr.times.back() == doctest::Approx(1.05).epsilon(1e-15));
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.size() == 5);  // t = 0, 0.3, 0.6, 0.9, 1.05
    const auto zero = integrate_moments(q, {0.0, 4.0, 3.0, 0.0, 0.0}, 0.0, 0.1);
    CHECK(zero.size() == 1);
}

TEST_CASE("equilibrium is a fixed point of the full system")
{
    for (double p : {0.5, 1.0}) {
        ModelParams q;
        q.p = p;
        const auto m = equilibrium_mean(q);
        const auto v = stationary_variances(q);
        const auto tr = integrate_moments(q, {0.0, m[0], m[1], v[0], v[1]}, 10.0, 1e-2);
        CHECK(tr.back().m1 == doctest::Approx(m[0]).epsilon(1e-12));
        CHECK(tr.back().m2 == doctest::Approx(m[1]).epsilon(1e-12));
        CHECK(tr.back().v1 == doctest::Approx(v[0]).epsilon(1e-10));
        CHECK(tr.back().v2 == doctest::Approx(v[1]).epsilon(1e-10));
    }
}

TEST_CASE("means stay positive and the first integral is conserved without self-limitation")
{
    // With K -> infinity the system is conservative; H = gamma m1 - delta ln m1 + beta m2 - alpha ln m2.
    ModelParams q;
    q.K = 1e300;
    auto H = [&](double m1, double m2) {
        return q.gamma * m1 - q.delta() * std::log(m1) + q.beta * m2 - q.alpha * std::log(m2);
    };
    const auto tr = integrate_means(q, {0.0, 4.5, 0.75, 0.0, 0.0}, 50.0, 1e-3, 1000);
    const double h0 = H(4.5, 0.75);
    for (const auto& s : tr.states) {
        CHECK(s.m1 > 0);
        CHECK(s.m2 > 0);
        CHECK(H(s.m1, s.m2) == doctest::Approx(h0).epsilon(1e-9));
    }
}

TEST_CASE("prescribed step matches the trajectory")
{
    ModelParams q;
    std::array<double, 2> m{4.0, 3.0};
    for (int k = 0; k < 100; ++k)
        m = lv_rk4_step(q, m, 0.01);
    const auto tr = integrate_means(q, {0.0, 4.0, 3.0, 0.0, 0.0}, 1.0, 0.01);
    CHECK(m[0] == doctest::Approx(tr.back().m1).epsilon(1e-13));
    CHECK(m[1] == doctest::Approx(tr.back().m2).epsilon(1e-13));
}

TEST_CASE("bad input is rejected")
{
    ModelParams q;
    CHECK_THROWS_AS(integrate_moments(q, {0, 4, 3, 0, 0}, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(integrate_moments(q, {0, -1, 3, 0, 0}, 1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(integrate_moments(q, {0, 4, 3, -1, 0}, 1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(integrate_means(q, {0, 4, 3, 0, 0}, 100.0, 50.0), NumericError);
}
