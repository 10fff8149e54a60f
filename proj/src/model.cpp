#include "lvfp/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lvfp {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw std::domain_error("invalid model parameters: " + what);
}

bool finite_all(const ModelParams& q)
{
    for (double v : {q.alpha, q.beta, q.gamma, q.K, q.sigma1, q.sigma2, q.chi, q.theta, q.nu, q.mu, q.p})
        if (!std::isfinite(v))
            return false;
    return true;
}

}  // namespace

bool is_half(double p) { return std::abs(p - 0.5) < 1e-12; }
bool is_one(double p) { return std::abs(p - 1.0) < 1e-12; }

void ModelParams::validate() const
{
    require(finite_all(*this), "all fields must be finite");
    require(alpha > 0, "alpha must be > 0");
    require(beta > 0, "beta must be > 0");
    require(gamma > 0, "gamma must be > 0");
    require(K > 0, "K must be > 0");
    require(nu > 0, "nu must be > 0");
    require(mu > 0, "mu must be > 0");
    require(sigma1 >= 0 && sigma2 >= 0, "sigma1, sigma2 must be >= 0");
    require(chi > -1 && theta > -1, "chi and theta must be > -1");
    require(p >= 0.5 && p <= 1.0, "p must lie in [1/2, 1]");
    require(delta() > 0, "delta = gamma*mu - nu must be > 0");
}

void ModelParams::validate_admissible() const
{
    validate();
    if (!(gamma * K - delta() > 0)) {
        std::ostringstream os;
        os << "no coexistence equilibrium: gamma*K - delta = " << gamma * K - delta()
           << " must be > 0 (gamma=" << gamma << ", K=" << K << ", delta=" << delta() << ")";
        throw std::domain_error(os.str());
    }
}

CoefficientSet coefficients_from_means(const ModelParams& q, double m1, double m2)
{
    if (!(m1 > 0) || !(m2 > 0) || !std::isfinite(m1) || !std::isfinite(m2)) {
        std::ostringstream os;
        os << "coefficients need positive finite means, got m1=" << m1 << ", m2=" << m2;
        throw std::domain_error(os.str());
    }
    CoefficientSet c;
    c.sigma1_sq = q.sigma1 * q.sigma1 * (m1 + m2);
    c.lambda1 = q.beta * m2 + (q.alpha / q.K) * m1 + q.alpha * q.chi;
    c.mu1 = q.alpha * (q.chi + 1.0) * m1;
    c.sigma2_sq = q.sigma2 * q.sigma2 * m1;
    c.lambda2 = q.gamma * (q.mu - m1) + q.nu * q.theta;
    c.mu2 = q.nu * (q.theta + 1.0) * m2;
    return c;
}

std::array<double, 2> equilibrium_mean(const ModelParams& q)
{
    q.validate_admissible();
    const double d = q.delta();
    return {d / q.gamma, q.alpha * (q.gamma * q.K - d) / (q.beta * q.gamma * q.K)};
}

CoefficientSet asymptotic_coefficients(const ModelParams& q)
{
    const auto m = equilibrium_mean(q);
    return coefficients_from_means(q, m[0], m[1]);
}

std::array<double, 2> stationary_variances(const ModelParams& q)
{
    const auto m = equilibrium_mean(q);
    const auto c = coefficients_from_means(q, m[0], m[1]);
    if (is_half(q.p))
        return {c.sigma1_sq * m[0] / (2.0 * c.lambda1), c.sigma2_sq * m[1] / (2.0 * c.lambda2)};
    if (is_one(q.p)) {
        // V = sigma^2 m^2 / (2 lambda - sigma^2); the denominator must stay positive.
        const double d1 = 2.0 * c.lambda1 - c.sigma1_sq;
        const double d2 = 2.0 * c.lambda2 - c.sigma2_sq;
        if (!(d1 > 0) || !(d2 > 0)) {
            std::ostringstream os;
            os << "p = 1 stationary variances need 2*lambda_k > sigma_k^2 at equilibrium; got "
               << "2*lambda1 - sigma1^2 = " << d1 << ", 2*lambda2 - sigma2^2 = " << d2;
            throw std::domain_error(os.str());
        }
        return {c.sigma1_sq * m[0] * m[0] / d1, c.sigma2_sq * m[1] * m[1] / d2};
    }
    std::ostringstream os;
    os << "stationary variances have no closed form for p = " << q.p << " (only p = 1/2 and p = 1)";
    throw std::domain_error(os.str());
}

}  // namespace lvfp
