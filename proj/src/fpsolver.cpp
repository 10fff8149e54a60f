#include "lvfp/fpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "lvfp/errors.hpp"
#include "lvfp/moments.hpp"

namespace lvfp {

void SolverConfig::validate() const
{
    grid.validate();
    if (!(step_size() > 0) || !std::isfinite(step_size()))
        throw std::domain_error("solver: dt must be positive");
    if (!(t_end >= 0) || !std::isfinite(t_end))
        throw std::domain_error("solver: t_end must be nonnegative");
    if (output_stride < 1)
        throw std::domain_error("solver: output_stride must be >= 1");
}

void SystemState::validate(double mass_tol) const
{
    f1.validate(mass_tol);
    f2.validate(mass_tol);
}

DriftDiffusion drift_diffusion_split(const SpeciesCoeffs& c, double p, double x)
{
    if (x < 0)
        throw std::domain_error("drift_diffusion_split: x must be >= 0");
    DriftDiffusion r;
    r.D = 0.5 * c.sigma_sq * std::pow(x, 2.0 * p);
    // d_x (D f) = D d_x f + D' f; the D' part joins the drift.
    const double dprime = (x == 0.0 && p > 0.5) ? 0.0 : c.sigma_sq * p * std::pow(x, 2.0 * p - 1.0);
    r.B = c.lambda * x - c.mu + dprime;
    return r;
}

namespace {

constexpr double kMaxExp = 700.0;

double safe_exp(double z) { return std::exp(std::min(z, kMaxExp)); }

// Bernoulli function z / (e^z - 1).
double bernoulli(double z)
{
    if (std::abs(z) < 1e-6)
        return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

// Potential of the zero-flux profile, up to a constant: f^q = exp(-phi).
std::vector<double> potential(const SpeciesCoeffs& c, double p, const GridSpec& grid)
{
    const double s2 = c.sigma_sq;
    std::vector<double> phi(static_cast<std::size_t>(grid.n));
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double x = grid.x(i);
        if (is_half(p))
            phi[i] = 2.0 * c.lambda / s2 * x - (2.0 * c.mu / s2 - 1.0) * std::log(x);
        else if (is_one(p))
            phi[i] = (2.0 + 2.0 * c.lambda / s2) * std::log(x) + 2.0 * c.mu / s2 / x;
        else
            phi[i] = 2.0 * p * std::log(x) +
                     2.0 * c.lambda / (s2 * (2.0 - 2.0 * p)) * std::pow(x, 2.0 - 2.0 * p) +
                     2.0 * c.mu / (s2 * (2.0 * p - 1.0)) * std::pow(x, 1.0 - 2.0 * p);
    }
    return phi;
}

// Linear tilt eps such that exp(-phi - eps x) has mean `target` on the grid.
double mean_tilt(const std::vector<double>& phi, const GridSpec& grid, double target)
{
    const std::size_t n = phi.size();
    auto moments = [&](double eps) {
        double zmax = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            zmax = std::max(zmax, -phi[i] - eps * grid.x(i));
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.x(i);
            const double w = std::exp(-phi[i] - eps * x - zmax);
            s0 += w;
            s1 += w * x;
            s2 += w * x * x;
        }
        const double m = s1 / s0;
        return std::pair<double, double>(m - target, -(s2 / s0 - m * m));
    };

    double lo = -1.0, hi = 1.0;
    const double limit = 1e6 / grid.dx();
    while (moments(lo).first < 0) {
        lo *= 2.0;
        if (-lo > limit)
            return 0.0;
    }
    while (moments(hi).first > 0) {
        hi *= 2.0;
        if (hi > limit)
            return 0.0;
    }
    std::uintmax_t iters = 200;
    return boost::math::tools::newton_raphson_iterate(moments, 0.0, lo, hi, 50, iters);
}

FaceFluxes moment_fitted_fluxes(const SpeciesCoeffs& c, double p, const GridSpec& grid)
{
    const std::size_t n = static_cast<std::size_t>(grid.n);
    const double dx = grid.dx();
    FaceFluxes ff;
    ff.A.assign(n - 1, 0.0);
    ff.B.assign(n - 1, 0.0);

    std::vector<double> cc(n);
    for (std::size_t i = 0; i < n; ++i)
        cc[i] = c.lambda * grid.x(i) - c.mu;

    // First cell whose drift points left; faces below it are built from the
    // left, faces at or above it from the right.
    std::size_t s = n;
    if (c.lambda > 0)
        s = static_cast<std::size_t>(std::find_if(cc.begin(), cc.end(), [](double v) { return v >= 0; }) -
                                     cc.begin());

    const bool diffusive = c.sigma_sq > 0;
    std::vector<double> w(n - 1, 0.0);
    if (diffusive) {
        const auto phi = potential(c, p, grid);
        if (c.lambda > 0 && s > 0 && s < n)
            ff.tilt = mean_tilt(phi, grid, c.mu / c.lambda);
        for (std::size_t j = 0; j + 1 < n; ++j)
            w[j] = phi[j + 1] - phi[j] + ff.tilt * dx;
    }

    double a_prev = 0.0;
    for (std::size_t j = 0; j < std::min(s, n - 1); ++j) {
        ff.B[j] = a_prev - cc[j];
        ff.A[j] = diffusive ? ff.B[j] * safe_exp(w[j]) : 0.0;
        a_prev = ff.A[j];
    }
    double b_next = 0.0;
    for (std::size_t j = n - 1; j-- > s;) {
        ff.A[j] = b_next + cc[j + 1];
        ff.B[j] = diffusive ? ff.A[j] * safe_exp(-w[j]) : 0.0;
        b_next = ff.B[j];
    }
    return ff;
}

FaceFluxes chang_cooper_fluxes(const SpeciesCoeffs& c, double p, const GridSpec& grid)
{
    const std::size_t n = static_cast<std::size_t>(grid.n);
    const double dx = grid.dx();
    FaceFluxes ff;
    ff.A.assign(n - 1, 0.0);
    ff.B.assign(n - 1, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto bd = drift_diffusion_split(c, p, static_cast<double>(j + 1) * dx);
        if (bd.D > 0) {
            const double z = dx * bd.B / bd.D;
            ff.A[j] = bd.D / dx * bernoulli(-z);
            ff.B[j] = bd.D / dx * bernoulli(z);
        } else {
            ff.A[j] = std::max(bd.B, 0.0);
            ff.B[j] = std::max(-bd.B, 0.0);
        }
    }
    return ff;
}

}  // namespace

FaceFluxes face_fluxes(const SpeciesCoeffs& c, double p, const GridSpec& grid, FluxScheme scheme)
{
    FaceFluxes ff = scheme == FluxScheme::moment_fitted ? moment_fitted_fluxes(c, p, grid)
                                                        : chang_cooper_fluxes(c, p, grid);
    for (std::size_t j = 0; j < ff.A.size(); ++j) {
        if (!(ff.A[j] >= 0) || !(ff.B[j] >= 0) || !std::isfinite(ff.A[j]) || !std::isfinite(ff.B[j])) {
            std::ostringstream os;
            os << "face flux coefficients lost positivity at face " << j << " (A=" << ff.A[j]
               << ", B=" << ff.B[j] << ", lambda=" << c.lambda << ", mu=" << c.mu << ")";
            throw NumericError(os.str());
        }
    }
    return ff;
}

std::vector<double> implicit_solve(const FaceFluxes& ff, double h, double dx,
                                   const std::vector<double>& f)
{
    const std::size_t n = f.size();
    const double r = h / dx;
    std::vector<double> cp(n), dp(n);
    auto diag = [&](std::size_t i) {
        const double out_right = i + 1 < n ? ff.B[i] : 0.0;
        const double out_left = i > 0 ? ff.A[i - 1] : 0.0;
        return 1.0 + r * (out_right + out_left);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double sub = i > 0 ? -r * ff.B[i - 1] : 0.0;
        const double sup = i + 1 < n ? -r * ff.A[i] : 0.0;
        const double m = diag(i) - (i > 0 ? sub * cp[i - 1] : 0.0);
        if (!(m > 0) || !std::isfinite(m)) {
            std::ostringstream os;
            os << "tridiagonal solve singular at row " << i << " (pivot " << m << ")";
            throw NumericError(os.str());
        }
        cp[i] = sup / m;
        dp[i] = (f[i] - (i > 0 ? sub * dp[i - 1] : 0.0)) / m;
    }
    std::vector<double> g(n);
    g[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        g[i] = dp[i] - cp[i] * g[i + 1];
    return g;
}

DensityField indicator_initial(double m0, const GridSpec& grid)
{
    grid.validate();
    const double a = m0 - 0.5, b = m0 + 0.5;
    if (!(a > 0) || !(b < grid.L)) {
        std::ostringstream os;
        os << "indicator support [" << a << ", " << b << "] must lie inside (0, " << grid.L << ")";
        throw std::domain_error(os.str());
    }
    return uniform_density(a, b, grid);
}

SystemState make_initial_state(const ModelParams& params, const DensityField& f1,
                               const DensityField& f2)
{
    params.validate();
    SystemState s{f1, f2, 0.0, {}, {f1.mean(), f2.mean()}};
    s.validate();
    s.coeffs = coefficients_from_means(params, s.ode_means[0], s.ode_means[1]);
    return s;
}

SystemState step(const SystemState& state, const ModelParams& params, const SolverConfig& config)
{
    const double dt = config.step_size();
    const bool prescribed = config.coupling == Coupling::prescribed_ode;
    const bool fitted = config.time == TimeScheme::fitted_midpoint;
    const std::array<double, 2> m =
        prescribed ? state.ode_means : std::array<double, 2>{state.f1.mean(), state.f2.mean()};

    SystemState next = state;
    try {
        if (config.frozen) {
            next.coeffs = *config.frozen;
        } else if (fitted) {
            std::array<double, 2> mh;
            if (prescribed) {
                mh = lv_rk4_step(params, m, 0.5 * dt);
            } else {
                const auto r = lv_rhs(params, m[0], m[1]);
                mh = {m[0] + 0.5 * dt * r[0], m[1] + 0.5 * dt * r[1]};
            }
            next.coeffs = coefficients_from_means(params, mh[0], mh[1]);
        } else {
            next.coeffs = coefficients_from_means(params, m[0], m[1]);
        }
    } catch (const std::domain_error& e) {
        std::ostringstream os;
        os << "step at t=" << state.t << " with dt=" << dt << ": " << e.what();
        throw NumericError(os.str());
    }

    for (Species sp : kSpecies) {
        const SpeciesCoeffs c = next.coeffs.of(sp);
        const FaceFluxes ff = face_fluxes(c, params.p, config.grid, config.flux);
        double h = dt;
        if (fitted && c.lambda != 0.0)
            h = std::expm1(c.lambda * dt) / c.lambda;
        DensityField& out = sp == Species::prey ? next.f1 : next.f2;
        out.values = implicit_solve(ff, h, config.grid.dx(), state.f(sp).values);
        const double lo = out.min();
        if (lo < -1e-13) {
            std::ostringstream os;
            os << "negative density " << lo << " for species " << index_of(sp) + 1 << " at t="
               << state.t + dt;
            throw NumericError(os.str());
        }
    }

    next.t = state.t + dt;
    next.ode_means = prescribed ? lv_rk4_step(params, state.ode_means, dt)
                                : std::array<double, 2>{next.f1.mean(), next.f2.mean()};
    return next;
}

SystemState run(const ModelParams& params, const SolverConfig& config, const SystemState& initial,
                const SnapshotObserver& observe)
{
    config.validate();
    params.validate();
    if (initial.f1.grid.n != config.grid.n || initial.f1.grid.L != config.grid.L)
        throw std::domain_error("run: initial state grid differs from solver grid");

    const double dt = config.step_size();
    const auto nsteps = static_cast<long>(std::ceil(config.t_end / dt - 1e-9));
    SystemState s = initial;
    if (observe)
        observe(s);
    const double t0 = initial.t;
    for (long k = 1; k <= nsteps; ++k) {
        SolverConfig c = config;
        const double t_target = k == nsteps ? t0 + config.t_end : t0 + static_cast<double>(k) * dt;
        c.dt = t_target - s.t;
        s = step(s, params, c);
        s.t = t_target;
        if (observe && (k % config.output_stride == 0 || k == nsteps))
            observe(s);
    }
    return s;
}

std::vector<SystemState> run(const ModelParams& params, const SolverConfig& config,
                             const SystemState& initial)
{
    std::vector<SystemState> out;
    run(params, config, initial, [&](const SystemState& s) { out.push_back(s); });
    return out;
}

}  // namespace lvfp
