#include "lvfp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lvfp {

PerturbationCoeffs perturbation_coeffs(const ModelParams& params, const MomentTrajectory& traj,
                                       Species species, const GridSpec& grid, double converged_tol)
{
    if (traj.size() == 0)
        throw std::domain_error("perturbation_coeffs: empty trajectory");
    const SpeciesCoeffs inf = asymptotic_coefficients(params).of(species);
    if (!(inf.sigma_sq > 0))
        throw std::domain_error("perturbation_coeffs: asymptotic sigma^2 must be positive");
    const DensityField feq = sample_on_grid(equilibrium_density(params, species), grid);

    PerturbationCoeffs pc;
    double sf = 0.0, sxf = 0.0;
    for (std::size_t i = 0; i < feq.values.size(); ++i) {
        const double v = feq.values[i], x = grid.x(i);
        sf += v * v;
        sxf += x * x * v * v;
    }
    pc.norm_f = std::sqrt(sf * grid.dx());
    pc.norm_xf = std::sqrt(sxf * grid.dx());

    const std::size_t n = traj.size();
    pc.times = traj.times;
    pc.a.resize(n);
    pc.b.resize(n);
    pc.m.resize(n);
    pc.forcing.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& s = traj.states[k];
        const SpeciesCoeffs c = coefficients_from_means(params, s.m1, s.m2).of(species);
        const double rel = (c.sigma_sq - inf.sigma_sq) / inf.sigma_sq;
        pc.a[k] = (c.lambda - inf.lambda) - inf.lambda * rel;
        pc.b[k] = inf.mu * rel - (c.mu - inf.mu);
        pc.m[k] = pc.a[k] * pc.norm_xf + pc.b[k] * pc.norm_f;
        pc.forcing[k] = std::abs(pc.a[k]) * pc.norm_xf + std::abs(pc.b[k]) * pc.norm_f;
    }
    const auto m_inf = equilibrium_mean(params);
    pc.converged = std::abs(traj.back().m1 - m_inf[0]) <= converged_tol &&
                   std::abs(traj.back().m2 - m_inf[1]) <= converged_tol;
    return pc;
}

CramerEnvelope cramer_envelope(const ModelParams& params, Species species, double d0,
                               const MomentTrajectory& traj, const GridSpec& grid)
{
    if (!(d0 >= 0))
        throw std::domain_error("cramer_envelope: d0 must be nonnegative");
    const PerturbationCoeffs pc = perturbation_coeffs(params, traj, species, grid);
    const std::size_t n = traj.size();
    std::vector<double> lam(n);
    for (std::size_t k = 0; k < n; ++k)
        lam[k] = coefficients_from_means(params, traj.states[k].m1, traj.states[k].m2).of(species).lambda;

    CramerEnvelope env;
    env.lambda_star = *std::min_element(lam.begin(), lam.end());
    if (!(env.lambda_star > 0)) {
        std::ostringstream os;
        os << "cramer envelope not applicable: min lambda along the trajectory is " << env.lambda_star;
        throw std::domain_error(os.str());
    }
    env.times = traj.times;
    env.duhamel.resize(n);
    env.closed.resize(n);

    const double t0 = traj.times.front();
    const double root_d0 = std::sqrt(d0);
    double big_lambda = 0.0;  // integral of lambda from t0
    double forced = 0.0;      // Duhamel integral of the forcing
    double sup_forcing = pc.forcing[0];
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double h = traj.times[k] - traj.times[k - 1];
            const double dl = 0.5 * h * (lam[k] + lam[k - 1]);
            const double decay = std::exp(-0.5 * dl);
            forced = decay * forced + 0.5 * h * (decay * pc.forcing[k - 1] + pc.forcing[k]);
            big_lambda += dl;
            sup_forcing = std::max(sup_forcing, pc.forcing[k]);
        }
        const double y = root_d0 * std::exp(-0.5 * big_lambda) + forced;
        env.duhamel[k] = y * y;
        const double t = traj.times[k] - t0;
        const double e = std::exp(-0.5 * env.lambda_star * t);
        const double yc = root_d0 * e + 2.0 * sup_forcing / env.lambda_star * (1.0 - e);
        env.closed[k] = yc * yc;
    }
    return env;
}

double energy_decay_rate(double p, double ell, const SpeciesCoeffs& c)
{
    if (is_half(p)) {
        if (!(ell >= 1.0 && ell < 1.5)) {
            std::ostringstream os;
            os << "decay rate for p = 1/2 needs 1 <= ell < 3/2, got ell = " << ell;
            throw std::domain_error(os.str());
        }
        return c.lambda * (2.0 * ell - 1.0);
    }
    if (is_one(p)) {
        if (!(ell > 0.5 && ell < 1.5)) {
            std::ostringstream os;
            os << "decay rate for p = 1 needs 1/2 < ell < 3/2, got ell = " << ell;
            throw std::domain_error(os.str());
        }
        return (2.0 * ell - 1.0) * (c.sigma_sq * (3.0 - 2.0 * ell) / 4.0 + c.lambda);
    }
    std::ostringstream os;
    os << "no decay rate available for p = " << p << " (only p = 1/2 and p = 1)";
    throw std::domain_error(os.str());
}

std::optional<FitResult> fit_rate(const std::vector<double>& times, const std::vector<double>& values)
{
    if (times.size() != values.size() || values.empty())
        return std::nullopt;
    const double v0 = values.front();
    if (!(v0 > 0))
        return std::nullopt;
    const double lo = 1e-10 * v0, hi = 1e-2 * v0;
    auto in_band = [&](std::size_t i) { return values[i] >= lo && values[i] <= hi; };

    std::size_t end = values.size();
    while (end > 0 && !in_band(end - 1))
        --end;
    std::size_t begin = end;
    while (begin > 0 && in_band(begin - 1))
        --begin;
    const std::size_t count = end - begin;
    if (count < 10)
        return std::nullopt;

    double st = 0.0, sy = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        st += times[i];
        sy += std::log(values[i]);
    }
    const double tm = st / count, ym = sy / count;
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        num += (times[i] - tm) * (std::log(values[i]) - ym);
        den += (times[i] - tm) * (times[i] - tm);
    }
    if (!(den > 0))
        return std::nullopt;
    return FitResult{-num / den, times[begin], times[end - 1], count};
}

}  // namespace lvfp
