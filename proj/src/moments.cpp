#include "lvfp/moments.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lvfp/errors.hpp"

namespace lvfp {

std::array<double, 2> lv_rhs(const ModelParams& q, double m1, double m2)
{
    return {q.alpha * (1.0 - m1 / q.K) * m1 - q.beta * m1 * m2,
            -q.delta() * m2 + q.gamma * m1 * m2};
}

std::array<double, 2> variance_rhs(const ModelParams& q, const MomentState& s, double m2p_1,
                                   double m2p_2)
{
    if (m2p_1 < 0 || m2p_2 < 0)
        throw std::domain_error("variance_rhs: moments of order 2p must be nonnegative");
    const auto c = coefficients_from_means(q, s.m1, s.m2);
    return {c.sigma1_sq * m2p_1 - 2.0 * c.lambda1 * s.v1,
            c.sigma2_sq * m2p_2 - 2.0 * c.lambda2 * s.v2};
}

double closed_moment_2p(double p, double mean, double variance)
{
    if (is_half(p))
        return mean;
    if (is_one(p))
        return variance + mean * mean;
    std::ostringstream os;
    os << "moment closure unavailable for p = " << p
       << ": the variance equation needs E[X^{2p}], which must be computed from a density field";
    throw std::domain_error(os.str());
}

namespace {

using State4 = std::array<double, 4>;

State4 full_rhs(const ModelParams& q, const State4& y)
{
    const auto dm = lv_rhs(q, y[0], y[1]);
    MomentState s{0.0, y[0], y[1], y[2], y[3]};
    const auto dv = variance_rhs(q, s, closed_moment_2p(q.p, y[0], y[2]),
                                 closed_moment_2p(q.p, y[1], y[3]));
    return {dm[0], dm[1], dv[0], dv[1]};
}

State4 means_rhs(const ModelParams& q, const State4& y)
{
    const auto dm = lv_rhs(q, y[0], y[1]);
    return {dm[0], dm[1], 0.0, 0.0};
}

template <class F>
State4 rk4(F&& f, const State4& y, double h)
{
    auto axpy = [](const State4& a, double s, const State4& b) {
        State4 r;
        for (int i = 0; i < 4; ++i)
            r[i] = a[i] + s * b[i];
        return r;
    };
    const State4 k1 = f(y);
    const State4 k2 = f(axpy(y, 0.5 * h, k1));
    const State4 k3 = f(axpy(y, 0.5 * h, k2));
    const State4 k4 = f(axpy(y, h, k3));
    State4 r;
    for (int i = 0; i < 4; ++i)
        r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return r;
}

template <class F>
MomentTrajectory integrate(F&& f, const MomentState& init, double t_end, double dt,
                           std::size_t every)
{
    if (!(dt > 0) || !std::isfinite(dt))
        throw std::domain_error("integrate_moments: dt must be positive");
    if (!(t_end >= 0) || !std::isfinite(t_end))
        throw std::domain_error("integrate_moments: t_end must be nonnegative");
    if (!(init.m1 > 0) || !(init.m2 > 0) || init.v1 < 0 || init.v2 < 0)
        throw std::domain_error("integrate_moments: initial state needs m > 0 and v >= 0");
    if (every == 0)
        every = 1;

    MomentTrajectory traj;
    traj.times.push_back(init.t);
    traj.states.push_back(init);

    const auto nsteps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    State4 y{init.m1, init.m2, init.v1, init.v2};
    for (std::size_t k = 1; k <= nsteps; ++k) {
        const double t_prev = init.t + static_cast<double>(k - 1) * dt;
        const double t = (k == nsteps) ? init.t + t_end : init.t + static_cast<double>(k) * dt;
        y = rk4(f, y, t - t_prev);
        if (!(y[0] > 0) || !(y[1] > 0) || !std::isfinite(y[2]) || !std::isfinite(y[3])) {
            std::ostringstream os;
            os << "moment integration lost positivity at t = " << t << " (m1=" << y[0]
               << ", m2=" << y[1] << "); reduce dt";
            throw NumericError(os.str());
        }
        if (k % every == 0 || k == nsteps) {
            traj.times.push_back(t);
            traj.states.push_back({t, y[0], y[1], y[2], y[3]});
        }
    }
    return traj;
}

}  // namespace

std::array<double, 2> lv_rk4_step(const ModelParams& q, std::array<double, 2> m, double h)
{
    const State4 y = rk4([&](const State4& s) { return means_rhs(q, s); },
                         State4{m[0], m[1], 0.0, 0.0}, h);
    return {y[0], y[1]};
}

MomentTrajectory integrate_moments(const ModelParams& q, const MomentState& init, double t_end,
                                   double dt, std::size_t every)
{
    closed_moment_2p(q.p, 1.0, 0.0);  // fail fast on unsupported p
    return integrate([&](const State4& y) { return full_rhs(q, y); }, init, t_end, dt, every);
}

MomentTrajectory integrate_means(const ModelParams& q, const MomentState& init, double t_end,
                                 double dt, std::size_t every)
{
    return integrate([&](const State4& y) { return means_rhs(q, y); }, init, t_end, dt, every);
}

}  // namespace lvfp
