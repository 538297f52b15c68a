#include "nodalkit/ansatz.hpp"

#include <algorithm>
#include <cmath>

namespace nodalkit {

double w_shift(double t, double tj, const FowlerParams& fp)
{
    return eval_w(t - tj, profile_of(fp));
}

double w_corrected(double t, double tj, const FowlerParams& fp)
{
    const ProfileConstants c = profile_of(fp);
    const double scale = std::exp(0.5 * (fp.N - 2) * tj) * c.amplitude_A;
    return eval_w(t - tj, c) + scale * correction_profile(t, fp.N);
}

double w_corrected_dtj(double t, double tj, const FowlerParams& fp)
{
    const ProfileConstants c = profile_of(fp);
    const double k = 0.5 * (fp.N - 2);
    return -eval_w_prime(t - tj, c) + k * std::exp(k * tj) * c.amplitude_A * correction_profile(t, fp.N);
}

double w_corrected_dtj_dt(double t, double tj, const FowlerParams& fp)
{
    const ProfileConstants c = profile_of(fp);
    const double k = 0.5 * (fp.N - 2);
    return -eval_w_second(t - tj, c) + k * std::exp(k * tj) * c.amplitude_A * correction_profile_prime(t, fp.N);
}

UniformGrid ansatz_grid(const AnsatzParams& ap, double h, double margin, double right)
{
    return make_grid(std::min(ap.t1, ap.t2) - margin, right, h);
}

TransformedSolution build_ansatz(const AnsatzParams& ap, const UniformGrid& grid, double min_margin)
{
    if (grid.front() > std::min(ap.t1, ap.t2) - min_margin)
        throw DomainError("build_ansatz: insufficient grid margin to the left of the bumps");
    TransformedSolution v;
    v.grid = grid;
    v.params = ap.params;
    v.values_v = sample(grid, [&](double t) {
        return w_corrected(t, ap.t1, ap.params) - w_corrected(t, ap.t2, ap.params);
    });
    return v;
}

Vector ansatz_dtj(int j, const AnsatzParams& ap, const UniformGrid& grid)
{
    if (j != 1 && j != 2)
        throw DomainError("ansatz_dtj: j must be 1 or 2");
    const double tj = j == 1 ? ap.t1 : ap.t2;
    const double sign = j == 1 ? 1.0 : -1.0;
    return sample(grid, [&](double t) { return sign * w_corrected_dtj(t, tj, ap.params); });
}

Vector z_vector(int j, const AnsatzParams& ap, const UniformGrid& grid)
{
    if (j != 1 && j != 2)
        throw DomainError("z_vector: j must be 1 or 2");
    const FowlerParams& fp = ap.params;
    const ProfileConstants c = profile_of(fp);
    const double tj = j == 1 ? ap.t1 : ap.t2;
    const double sign = j == 1 ? -1.0 : 1.0;
    return sample(grid, [&](double t) {
        const double w = eval_w(t - tj, c);
        const double psi = w_corrected_dtj(t, tj, fp);
        const double dpsi = w_corrected_dtj_dt(t, tj, fp);
        return sign * (fp.p * std::pow(w, fp.p - 1.0) * eval_w_prime(t - tj, c) - fp.beta * dpsi -
                       (fp.gamma - fp.gamma0) * psi);
    });
}

Vector residual_S(const TransformedSolution& v, int order)
{
    const FowlerParams& fp = v.params;
    const UniformGrid& g = v.grid;
    const Vector& f = v.values_v;
    Vector s(g.n);
    if (order == 4) {
        const Vector d1 = derivative4(f, g.h);
        const Vector d2 = second_derivative4(f, g.h);
        for (Index i = 0; i < g.n; ++i) {
            const double t = g[i];
            s[i] = d2[i] - fp.beta * d1[i] - (fp.gamma + std::exp(2.0 * t)) * f[i] +
                   std::pow(std::abs(f[i]), fp.p - 1.0) * f[i];
        }
        return s;
    }
    if (order != 2)
        throw DomainError("residual_S: order must be 2 or 4");
    s[0] = s[g.n - 1] = 0.0;
    const double h2 = g.h * g.h;
    const double ep = std::exp(-0.5 * fp.beta * g.h), em = std::exp(0.5 * fp.beta * g.h);
    for (Index i = 1; i + 1 < g.n; ++i) {
        const double t = g[i];
        s[i] = (ep * (f[i + 1] - f[i]) - em * (f[i] - f[i - 1])) / h2 - (fp.gamma + std::exp(2.0 * t)) * f[i] +
               std::pow(std::abs(f[i]), fp.p - 1.0) * f[i];
    }
    return s;
}

double default_tau(const FowlerParams& fp)
{
    const double upper = 0.5 * std::min(fp.p, 2.0);
    const double tau = fp.N == 3 ? 0.75 : 0.9;
    return (tau > 0.5 && tau < upper) ? tau : 0.5 * (0.5 + upper);
}

double residual_bound(const AnsatzParams& ap, double tau)
{
    const FowlerParams& fp = ap.params;
    const double sep = std::abs(ap.t1 - ap.t2);
    if (fp.N == 3)
        return fp.beta + std::exp(tau * ap.t2) + std::exp(-tau * sep / 2.0);
    if (fp.N == 4)
        return fp.beta + std::pow(std::abs(ap.t2), tau) * std::exp(2.0 * tau * ap.t2) + std::exp(-tau * sep);
    return fp.beta + std::exp(2.0 * tau * ap.t2) + std::exp(-tau * (fp.N - 2) * sep / 2.0);
}

ResidualNorms residual_norms(const AnsatzParams& ap, double tau, double h)
{
    ResidualNorms out;
    out.tau = tau > 0.0 ? tau : default_tau(ap.params);
    const UniformGrid g = ansatz_grid(ap, h);
    const TransformedSolution v = build_ansatz(ap, g);
    const Vector s = residual_S(v, 4);
    out.sup = s.cwiseAbs().maxCoeff();
    const Vector ew = sample(g, [&](double t) { return std::exp(-ap.params.beta * t); });
    out.weighted_l1 = trapezoid(s.cwiseAbs().cwiseProduct(ew), g);
    out.bound = residual_bound(ap, out.tau);
    out.ratio = out.sup / out.bound;
    return out;
}

InteractionResult interaction(double eta, double theta, double r, double s, const FowlerParams& fp)
{
    if (!(theta > 0.0) || !(eta > theta))
        throw DomainError("interaction: need eta > theta > 0");
    const ProfileConstants c = profile_of(fp);
    const double sg = std::sqrt(fp.gamma0);
    const double lo = std::min(r, s) - 60.0, hi = std::max(r, s) + 60.0;
    const UniformGrid g = make_grid(lo, hi, 1e-3);
    const Vector f = sample(g, [&](double t) {
        return std::pow(eval_w(t - r, c), eta) * std::pow(eval_w(t - s, c), theta);
    });
    InteractionResult out;
    out.lhs = trapezoid(f, g);
    QuadratureSpec q;
    q.half_width = std::max(60.0, 40.0 / ((eta - theta) * sg));
    q.tol = 1e-8;
    const double m = integrate_line([&](double t) { return std::pow(eval_w(t, c), eta) * std::exp(theta * sg * t); }, q);
    out.rhs_prediction = std::pow(eval_w(std::abs(r - s), c), theta) * m;
    return out;
}

} // namespace nodalkit
