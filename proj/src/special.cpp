#include "nodalkit/special.hpp"

namespace nodalkit {

double amplitude_A(double p, int N)
{
    if (!(p > 1.0) || N < 3)
        throw DomainError("amplitude_A: need p > 1 and N >= 3");
    const double g0 = 0.25 * (N - 2) * (N - 2);
    const double e = 1.0 / (p - 1.0);
    return std::pow(g0, e) * std::pow(0.5 * (p + 1.0), e) * std::pow(2.0, 2.0 * e);
}

ProfileConstants profile_constants(double p, int N)
{
    ProfileConstants c;
    c.p = p;
    c.N = N;
    c.gamma0 = 0.25 * (N - 2) * (N - 2);
    c.amplitude_A = amplitude_A(p, N);
    c.lambda_N = N <= 6 ? std::pow(double(N - 2), -double(N - 2)) : 0.0;
    return c;
}

std::pair<double, double> pohozaev_check(const ProfileConstants& c, const QuadratureSpec& q)
{
    if (q.half_width < 40.0)
        throw DomainError("pohozaev_check: quadrature window must reach |t| >= 40");
    const double grad = integrate_line([&](double t) { double d = eval_w_prime(t, c); return d * d; }, q);
    const double lp1 = integrate_line([&](double t) { return std::pow(eval_w(t, c), c.p + 1.0); }, q);
    const double l2 = integrate_line([&](double t) { double w = eval_w(t, c); return w * w; }, q);
    const double r1 = std::abs(grad - (0.5 - 1.0 / (c.p + 1.0)) * lp1) / grad;
    const double r2 = std::abs(grad - c.gamma0 * (c.p - 1.0) / (c.p + 3.0) * l2) / grad;
    return {r1, r2};
}

} // namespace nodalkit
