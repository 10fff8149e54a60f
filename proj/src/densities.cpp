#include "lvfp/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "lvfp/errors.hpp"

namespace lvfp {

std::vector<double> GridSpec::centers() const
{
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = x(i);
    return xs;
}

void GridSpec::validate() const
{
    if (!(L > 0) || !std::isfinite(L))
        throw std::domain_error("grid: L must be positive");
    if (n < 16)
        throw std::domain_error("grid: n must be at least 16");
}

double DensityField::mass() const
{
    double s = 0.0;
    for (double v : values)
        s += v;
    return s * grid.dx();
}

double DensityField::moment(double k) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += std::pow(grid.x(i), k) * values[i];
    return s * grid.dx();
}

double DensityField::mean() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += grid.x(i) * values[i];
    return s * grid.dx() / mass();
}

double DensityField::variance() const
{
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = grid.x(i) - m;
        s += d * d * values[i];
    }
    return s * grid.dx() / mass();
}

double DensityField::min() const { return *std::min_element(values.begin(), values.end()); }

void DensityField::validate(double mass_tol) const
{
    if (values.size() != static_cast<std::size_t>(grid.n))
        throw std::domain_error("density: value count does not match grid");
    for (double v : values)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::domain_error("density: values must be finite and nonnegative");
    if (std::abs(mass() - 1.0) > mass_tol) {
        std::ostringstream os;
        os << "density: mass " << mass() << " differs from 1 by more than " << mass_tol;
        throw std::domain_error(os.str());
    }
}

namespace {

namespace bq = boost::math::quadrature;

struct GenShape {
    double p, a, b;  // log f = -2p log x - a x^{2-2p} - b x^{1-2p} + const

    double operator()(double x) const
    {
        return -2.0 * p * std::log(x) - a * std::pow(x, 2.0 - 2.0 * p) - b * std::pow(x, 1.0 - 2.0 * p);
    }
};

GenShape shape_of(const GenGammaParams& g)
{
    return {g.p, 2.0 * g.lam / (g.sigma_sq * (2.0 - 2.0 * g.p)),
            2.0 * g.mu / (g.sigma_sq * (2.0 * g.p - 1.0))};
}

double mode_of(const GenGammaParams& g)
{
    // Zero of x^{2p} d/dx log f; decreasing, positive at 0, negative at mu/lam.
    auto h = [&](double x) {
        return -2.0 * g.p * std::pow(x, 2.0 * g.p - 1.0) - 2.0 * g.lam / g.sigma_sq * x +
               2.0 * g.mu / g.sigma_sq;
    };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(h, 0.0, g.mu / g.lam,
                                               boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

// Integral of x^k exp(logf(x) - logf(mode)) over (lo, inf), split at the mode.
double integrate_shape(const GenShape& s, double mode, double k, double lo, double* rel_err)
{
    const double ref = s(mode);
    auto f = [&](double x) {
        if (!(x > 0))
            return 0.0;
        const double e = s(x) - ref;
        if (e < -745.0)
            return 0.0;
        return std::pow(x, k) * std::exp(e);
    };
    const double tol = 1e-13;
    double total = 0.0, err = 0.0;
    if (lo < mode) {
        bq::tanh_sinh<double> ts;
        double e1 = 0.0, l1 = 0.0;
        total += ts.integrate(f, lo, mode, tol, &e1, &l1);
        err += e1;
    }
    bq::exp_sinh<double> es;
    double e2 = 0.0, l2 = 0.0;
    total += es.integrate(f, std::max(lo, mode), std::numeric_limits<double>::infinity(), tol, &e2, &l2);
    err += e2;
    if (rel_err)
        *rel_err = total > 0 ? err / total : std::numeric_limits<double>::infinity();
    return total;
}

void require_positive(const SpeciesCoeffs& c)
{
    if (!(c.lambda > 0) || !(c.mu > 0) || !(c.sigma_sq > 0) || !std::isfinite(c.lambda) ||
        !std::isfinite(c.mu) || !std::isfinite(c.sigma_sq)) {
        std::ostringstream os;
        os << "quasi-equilibrium needs positive coefficients, got sigma^2=" << c.sigma_sq
           << ", lambda=" << c.lambda << ", mu=" << c.mu;
        throw std::domain_error(os.str());
    }
}

}  // namespace

double GenGammaParams::shape() const
{
    switch (family) {
    case DensityFamily::gamma: return 2.0 * mu / sigma_sq;
    case DensityFamily::inverse_gamma: return 1.0 + 2.0 * lam / sigma_sq;
    default: throw std::domain_error("shape(): defined only for p = 1/2 and p = 1");
    }
}

double GenGammaParams::scale() const
{
    switch (family) {
    case DensityFamily::gamma: return sigma_sq / (2.0 * lam);
    case DensityFamily::inverse_gamma: return 2.0 * mu / sigma_sq;
    default: throw std::domain_error("scale(): defined only for p = 1/2 and p = 1");
    }
}

double GenGammaParams::log_pdf(double x) const
{
    if (!(x > 0))
        return -std::numeric_limits<double>::infinity();
    switch (family) {
    case DensityFamily::gamma: return log_norm + (shape() - 1.0) * std::log(x) - x / scale();
    case DensityFamily::inverse_gamma: return log_norm - (shape() + 1.0) * std::log(x) - scale() / x;
    default: return log_norm + shape_of(*this)(x);
    }
}

double GenGammaParams::pdf(double x) const { return std::exp(log_pdf(x)); }

double GenGammaParams::mean() const
{
    switch (family) {
    case DensityFamily::gamma: return shape() * scale();
    case DensityFamily::inverse_gamma: return scale() / (shape() - 1.0);
    default: {
        const GenShape s = shape_of(*this);
        const double xm = mode_of(*this);
        return integrate_shape(s, xm, 1.0, 0.0, nullptr) / integrate_shape(s, xm, 0.0, 0.0, nullptr);
    }
    }
}

double GenGammaParams::tail_mass(double L) const
{
    switch (family) {
    case DensityFamily::gamma: return boost::math::gamma_q(shape(), L / scale());
    case DensityFamily::inverse_gamma: return boost::math::gamma_p(shape(), scale() / L);
    default: {
        const GenShape s = shape_of(*this);
        const double xm = mode_of(*this);
        return std::exp(s(xm) + log_norm) * integrate_shape(s, xm, 0.0, L, nullptr);
    }
    }
}

GenGammaParams quasi_equilibrium(const SpeciesCoeffs& c, double p)
{
    require_positive(c);
    if (!(p >= 0.5 && p <= 1.0))
        throw std::domain_error("quasi_equilibrium: p must lie in [1/2, 1]");
    GenGammaParams g;
    g.p = p;
    g.lam = c.lambda;
    g.mu = c.mu;
    g.sigma_sq = c.sigma_sq;
    if (is_half(p)) {
        g.family = DensityFamily::gamma;
        g.log_norm = -std::lgamma(g.shape()) - g.shape() * std::log(g.scale());
    } else if (is_one(p)) {
        g.family = DensityFamily::inverse_gamma;
        g.log_norm = g.shape() * std::log(g.scale()) - std::lgamma(g.shape());
    } else {
        g.family = DensityFamily::generalized;
        const GenShape s = shape_of(g);
        const double xm = mode_of(g);
        double rel = 0.0;
        const double z = integrate_shape(s, xm, 0.0, 0.0, &rel);
        if (!(z > 0) || !std::isfinite(z) || rel > 1e-9) {
            std::ostringstream os;
            os << "generalized gamma normalization did not converge (p=" << p << ", lambda="
               << c.lambda << ", mu=" << c.mu << ", sigma^2=" << c.sigma_sq << ", mode=" << xm
               << ", integral=" << z << ", relative error estimate=" << rel << ")";
            throw NumericError(os.str());
        }
        g.log_norm = -(s(xm) + std::log(z));
    }
    return g;
}

GenGammaParams quasi_equilibrium(const CoefficientSet& coeffs, Species species, double p)
{
    return quasi_equilibrium(coeffs.of(species), p);
}

GenGammaParams equilibrium_density(const ModelParams& params, Species species)
{
    return quasi_equilibrium(asymptotic_coefficients(params), species, params.p);
}

SampledDensity sample_on_grid_checked(const GenGammaParams& gg, const GridSpec& grid)
{
    grid.validate();
    const double tail = gg.tail_mass(grid.L);
    if (!(tail < 1e-8)) {
        std::ostringstream os;
        os << "grid too small: density mass beyond L=" << grid.L << " is " << tail;
        throw std::domain_error(os.str());
    }
    SampledDensity out;
    out.field.grid = grid;
    out.field.values.resize(static_cast<std::size_t>(grid.n));
    double s = 0.0;
    for (std::size_t i = 0; i < out.field.values.size(); ++i) {
        out.field.values[i] = gg.pdf(grid.x(i));
        s += out.field.values[i];
    }
    s *= grid.dx();
    out.renormalization = 1.0 / s;
    if (!(std::abs(out.renormalization - 1.0) <= 1e-6)) {
        std::ostringstream os;
        os << "grid too coarse for this density: midpoint mass " << s
           << " needs renormalization beyond 1e-6 (dx=" << grid.dx() << ")";
        throw std::domain_error(os.str());
    }
    for (double& v : out.field.values)
        v *= out.renormalization;
    return out;
}

DensityField sample_on_grid(const GenGammaParams& gg, const GridSpec& grid)
{
    return sample_on_grid_checked(gg, grid).field;
}

DensityField uniform_density(double a, double b, const GridSpec& grid)
{
    grid.validate();
    if (!(a >= 0 && b > a && b <= grid.L)) {
        std::ostringstream os;
        os << "uniform density support [" << a << ", " << b << "] must lie inside [0, " << grid.L << "]";
        throw std::domain_error(os.str());
    }
    DensityField f{grid, std::vector<double>(static_cast<std::size_t>(grid.n), 0.0)};
    const double dx = grid.dx();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double l = static_cast<double>(i) * dx, r = l + dx;
        f.values[i] = std::max(0.0, std::min(r, b) - std::max(l, a)) / (dx * (b - a));
    }
    const double mass = f.mass();
    for (double& v : f.values)
        v /= mass;
    return f;
}

double flux_residual(const DensityField& f, const SpeciesCoeffs& c, double p)
{
    const auto& v = f.values;
    const double dx = f.grid.dx();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double xl = f.grid.x(i - 1), xr = f.grid.x(i + 1), x = f.grid.x(i);
        const double dflux = (std::pow(xr, 2 * p) * v[i + 1] - std::pow(xl, 2 * p) * v[i - 1]) / (2 * dx);
        const double j = 0.5 * c.sigma_sq * dflux + (c.lambda * x - c.mu) * v[i];
        worst = std::max(worst, std::abs(j));
    }
    return worst;
}

}  // namespace lvfp
