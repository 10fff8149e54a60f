#include "lvfp/metrics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lvfp/errors.hpp"

namespace lvfp {

namespace {

void require_same_grid(const DensityField& f, const DensityField& g)
{
    if (f.grid.n != g.grid.n || f.grid.L != g.grid.L || f.values.size() != g.values.size())
        throw std::domain_error("distance between densities on different grids");
}

std::vector<double> difference(const DensityField& f, const DensityField& g)
{
    require_same_grid(f, g);
    std::vector<double> d(f.values.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = f.values[i] - g.values[i];
    return d;
}

void require_ell(double ell)
{
    if (!(ell > 0.5 && ell < 1.5)) {
        std::ostringstream os;
        os << "order ell = " << ell << " outside (1/2, 3/2)";
        throw std::domain_error(os.str());
    }
}

// Cell-pair kernel for |x-y|^r between unit cells k apart: second difference of
// |t|^{r+2} / ((r+1)(r+2)).
double cell_kernel(double r, std::size_t k)
{
    const double a = r + 2.0;
    const double norm = (r + 1.0) * (r + 2.0);
    if (k < 4) {
        const double kk = static_cast<double>(k);
        return (std::pow(kk + 1.0, a) - 2.0 * std::pow(kk, a) + std::pow(std::abs(kk - 1.0), a)) / norm;
    }
    // k^a [(1+u)^a + (1-u)^a - 2] with u = 1/k as an even binomial series.
    const double u = 1.0 / static_cast<double>(k);
    double coef = 1.0, sum = 0.0, upow = 1.0;
    for (int m = 1; m < 80; ++m) {
        coef *= (a - m + 1.0) / m;
        upow *= u;
        if (m % 2 == 1)
            continue;
        const double term = 2.0 * coef * upow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return std::pow(static_cast<double>(k), a) * sum / norm;
}

}  // namespace

SpectralGrid SpectralGrid::make(double xi_min, double xi_max, int m)
{
    if (!(xi_min > 0) || !(xi_max > xi_min) || m < 2)
        throw std::domain_error("spectral grid needs 0 < xi_min < xi_max and m >= 2");
    SpectralGrid sg;
    sg.xi_min = xi_min;
    sg.xi_max = xi_max;
    sg.m = m;
    sg.nodes.resize(static_cast<std::size_t>(m));
    sg.weights.resize(static_cast<std::size_t>(m));
    const double u0 = std::log(xi_min), du = (std::log(xi_max) - u0) / (m - 1);
    for (int j = 0; j < m; ++j) {
        const double xi = std::exp(u0 + j * du);
        sg.nodes[j] = xi;
        sg.weights[j] = du * xi * ((j == 0 || j == m - 1) ? 0.5 : 1.0);
    }
    return sg;
}

std::string to_string(DistanceKind k)
{
    switch (k) {
    case DistanceKind::energy_r: return "energy_r";
    case DistanceKind::energy_norm_ell: return "energy_norm_ell";
    case DistanceKind::cramer_cdf: return "cramer_cdf";
    case DistanceKind::cramer_fourier: return "cramer_fourier";
    case DistanceKind::sobolev: return "sobolev";
    case DistanceKind::rel_entropy: return "rel_entropy";
    }
    return "unknown";
}

DistanceKind distance_kind_from_string(const std::string& s)
{
    for (auto k : {DistanceKind::energy_r, DistanceKind::energy_norm_ell, DistanceKind::cramer_cdf,
                   DistanceKind::cramer_fourier, DistanceKind::sobolev, DistanceKind::rel_entropy})
        if (to_string(k) == s)
            return k;
    throw std::domain_error("unknown distance kind '" + s + "'");
}

SpectralProfile spectral_profile(const DensityField& f, const DensityField& g, const SpectralGrid& sg)
{
    const auto d = difference(f, g);
    const double dx = f.grid.dx();
    SpectralProfile prof;
    prof.grid = &sg;
    prof.mean_diff = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        prof.mean_diff += f.grid.x(i) * d[i] * dx;
    prof.power.resize(sg.nodes.size());
    for (std::size_t j = 0; j < sg.nodes.size(); ++j) {
        const double xi = sg.nodes[j];
        const std::complex<double> z = std::polar(1.0, -xi * dx);
        std::complex<double> s = d.back();
        for (std::size_t i = d.size() - 1; i-- > 0;)
            s = s * z + d[i];
        // Transform of the piecewise-constant field: cell sums times sinc.
        const double h = 0.5 * xi * dx;
        const double sinc = std::abs(h) < 1e-8 ? 1.0 : std::sin(h) / h;
        prof.power[j] = std::norm(s) * dx * dx * sinc * sinc;
    }
    return prof;
}

double weighted_integral(const SpectralProfile& prof, double s)
{
    const SpectralGrid& sg = *prof.grid;
    double acc = 0.0;
    for (std::size_t j = 0; j < sg.nodes.size(); ++j)
        acc += sg.weights[j] * prof.power[j] * std::pow(sg.nodes[j], -s);
    // Below xi_min the power is (mean difference)^2 xi^2 to leading order.
    acc += prof.mean_diff * prof.mean_diff * std::pow(sg.xi_min, 3.0 - s) / (3.0 - s);
    return 2.0 * acc;
}

double c_r_constant(double r)
{
    if (!(r > 0 && r < 2)) {
        std::ostringstream os;
        os << "c_r needs 0 < r < 2, got r = " << r;
        throw std::domain_error(os.str());
    }
    return r * std::tgamma(0.5 * (1.0 + r)) /
           (std::pow(2.0, 1.0 - r) * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (2.0 - r)));
}

double energy_distance_r(const DensityField& f, const DensityField& g, double r)
{
    if (!(r > 0 && r < 2)) {
        std::ostringstream os;
        os << "energy distance order r = " << r << " outside (0, 2)";
        throw std::domain_error(os.str());
    }
    const auto d = difference(f, g);
    const std::size_t n = d.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double corr = 0.0;
        for (std::size_t i = 0; i + k < n; ++i)
            corr += d[i] * d[i + k];
        total += (k == 0 ? 1.0 : 2.0) * cell_kernel(r, k) * corr;
    }
    const double dx = f.grid.dx();
    return std::max(0.0, -total * std::pow(dx, 2.0 + r));
}

double energy_distance_fourier(const DensityField& f, const DensityField& g, double r,
                               const SpectralGrid& sg)
{
    const double c = c_r_constant(r);
    return c * weighted_integral(spectral_profile(f, g, sg), 1.0 + r);
}

DistanceReport energy_norm_ell(const DensityField& f, const DensityField& g, double ell,
                               const SpectralGrid& sg)
{
    require_ell(ell);
    DistanceReport rep;
    rep.kind = DistanceKind::energy_norm_ell;
    rep.order = ell;
    rep.value = weighted_integral(spectral_profile(f, g, sg), 2.0 * ell);
    rep.xi_max = sg.xi_max;
    rep.nodes = 2 * sg.m;
    rep.tail_bound = 8.0 * std::pow(sg.xi_max, 1.0 - 2.0 * ell) / (2.0 * ell - 1.0);
    return rep;
}

double cramer_cdf(const DensityField& f, const DensityField& g)
{
    const auto d = difference(f, g);
    const double dx = f.grid.dx();
    // Exact integral of the squared piecewise-linear CDF difference.
    double h_prev = 0.0, acc = 0.0;
    for (double di : d) {
        const double h = h_prev + di * dx;
        acc += h_prev * h_prev + h_prev * h + h * h;
        h_prev = h;
    }
    return acc * dx / 3.0;
}

double cramer_fourier(const DensityField& f, const DensityField& g, const SpectralGrid& sg)
{
    return weighted_integral(spectral_profile(f, g, sg), 2.0) / (2.0 * std::numbers::pi);
}

double lemma_constant(double ell, double ell_star)
{
    if (!(0.5 < ell && ell < ell_star && ell_star < 1.5)) {
        std::ostringstream os;
        os << "scaling bound needs 1/2 < ell < ell* < 3/2, got ell=" << ell << ", ell*=" << ell_star;
        throw std::domain_error(os.str());
    }
    return std::pow(4.0 / (ell_star - ell), 2.0 * (ell_star - ell)) *
           std::pow((2.0 * ell_star - 1.0) / (2.0 * ell - 1.0), 2.0 * ell - 1.0);
}

double scaling_bound(double ell, double ell_star, double e_star)
{
    const double c = lemma_constant(ell, ell_star);
    if (!(e_star >= 0))
        throw std::domain_error("scaling bound needs e_star >= 0");
    return std::pow(c * std::pow(e_star, 2.0 * ell - 1.0), 1.0 / (2.0 * ell_star - 1.0));
}

double c_ell_constant(double ell)
{
    if (!(ell > 1.0 && ell < 1.5)) {
        std::ostringstream os;
        os << "C_ell needs 1 < ell < 3/2, got ell = " << ell;
        throw std::domain_error(os.str());
    }
    const double two_pi = 2.0 * std::numbers::pi;
    return std::pow(two_pi, 3.0 - 2.0 * ell) *
           (3.0 * std::pow((2.0 * ell - 2.0) / 3.0, 3.0 - 2.0 * ell) +
            std::pow(3.0 / (2.0 * ell - 2.0), 2.0 * ell - 2.0));
}

double relative_entropy(const DensityField& f, const DensityField& g)
{
    require_same_grid(f, g);
    constexpr double floor = 1e-300;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double fi = f.values[i], gi = g.values[i];
        if (fi <= floor)
            continue;
        if (gi <= 0)
            return std::numeric_limits<double>::infinity();
        acc += fi * (std::log(fi) - std::log(std::max(gi, floor)));
    }
    return acc * f.grid.dx();
}

double l1_distance(const DensityField& f, const DensityField& g)
{
    const auto d = difference(f, g);
    double acc = 0.0;
    for (double v : d)
        acc += std::abs(v);
    return acc * f.grid.dx();
}

DistanceReport compute_distance(DistanceKind kind, double order, const DensityField& f,
                                 const DensityField& g, const SpectralGrid& sg)
{
    DistanceReport rep;
    switch (kind) {
    case DistanceKind::energy_r:
        rep.value = energy_distance_r(f, g, order);
        break;
    case DistanceKind::energy_norm_ell:
    case DistanceKind::sobolev:
        rep = energy_norm_ell(f, g, order, sg);
        break;
    case DistanceKind::cramer_cdf:
        order = 1.0;
        rep.value = cramer_cdf(f, g);
        break;
    case DistanceKind::cramer_fourier:
        rep = energy_norm_ell(f, g, 1.0, sg);
        rep.value /= 2.0 * std::numbers::pi;
        rep.tail_bound /= 2.0 * std::numbers::pi;
        order = 1.0;
        break;
    case DistanceKind::rel_entropy:
        rep.value = relative_entropy(f, g);
        break;
    }
    rep.kind = kind;
    rep.order = order;
    return rep;
}

}  // namespace lvfp
