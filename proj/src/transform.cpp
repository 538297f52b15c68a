#include "nodalkit/transform.hpp"

#include <algorithm>
#include <cmath>

namespace nodalkit {

FowlerParams params_of(double eps, int N)
{
    if (N < 3)
        throw DomainError("params_of: N must be at least 3");
    if (!(eps >= 0.0) || !(eps < 4.0 / (N - 2)))
        throw DomainError("params_of: eps outside [0, 4/(N-2))");
    FowlerParams fp;
    const double n2 = N - 2;
    fp.eps = eps;
    fp.N = N;
    fp.p = (N + 2.0) / n2 - eps;
    fp.beta = n2 * n2 * eps / (4.0 - n2 * eps);
    fp.gamma0 = 0.25 * n2 * n2;
    fp.gamma = fp.gamma0 - 0.25 * fp.beta * fp.beta;
    fp.alpha_exp = 2.0 / (fp.p - 1.0);
    fp.A = amplitude_A(fp.p, N);
    return fp;
}

FowlerParams params_of_p(double p, int N)
{
    if (N < 3)
        throw DomainError("params_of_p: N must be at least 3");
    FowlerParams fp = params_of((N + 2.0) / (N - 2.0) - p, N);
    fp.p = p;
    fp.alpha_exp = 2.0 / (p - 1.0);
    fp.A = amplitude_A(p, N);
    return fp;
}

ProfileConstants profile_of(const FowlerParams& fp)
{
    return profile_constants(fp.p, fp.N);
}

namespace {

// K_nu(r) for nu = twice_nu / 2, integer or half-integer.
double bessel_k_general(int twice_nu, double r)
{
    double km, k;
    int start;
    if (twice_nu % 2 == 1) {
        km = std::sqrt(M_PI / (2.0 * r)) * std::exp(-r); // K_{-1/2} = K_{1/2}
        k = km;
        start = 1;
    } else {
        km = bessel_k(1, r); // K_{-1} = K_1
        k = bessel_k(0, r);
        start = 0;
    }
    for (int tn = start; tn < twice_nu; tn += 2) {
        const double next = km + (double(tn) / r) * k;
        km = k;
        k = next;
    }
    return k;
}

} // namespace

double far_field(double r, int N)
{
    return std::pow(r, -0.5 * (N - 2)) * bessel_k_general(N - 2, r);
}

double far_field_prime(double r, int N)
{
    return -std::pow(r, -0.5 * (N - 2)) * bessel_k_general(N, r);
}

namespace {

struct Quintic {
    double c[6];
    double H;
};

Quintic quintic(double f0, double d0, double s0, double f1, double d1, double s1, double H)
{
    Quintic q;
    q.H = H;
    q.c[0] = f0;
    q.c[1] = H * d0;
    q.c[2] = 0.5 * H * H * s0;
    const double a = f1 - (q.c[0] + q.c[1] + q.c[2]);
    const double b = H * d1 - (q.c[1] + 2.0 * q.c[2]);
    const double d = H * H * s1 - 2.0 * q.c[2];
    q.c[3] = 10.0 * a - 4.0 * b + 0.5 * d;
    q.c[4] = -15.0 * a + 7.0 * b - d;
    q.c[5] = 6.0 * a - 3.0 * b + 0.5 * d;
    return q;
}

double second_from_ode(const RadialSolution& u, double r, double val, double der)
{
    return val - std::pow(std::abs(val), u.p - 1.0) * val - (u.N - 1) * der / r;
}

double third_from_ode(const RadialSolution& u, double r, double val, double der, double sec)
{
    return (u.N - 1) * (der / r - sec) / r + der - u.p * std::pow(std::abs(val), u.p - 1.0) * der;
}

// Returns (u, u') at r using whichever representation covers r.
std::pair<double, double> evaluate(const RadialSolution& u, double r)
{
    const Index n = u.grid_r.size();
    if (n < 2)
        throw DomainError("RadialSolution: too few samples");
    if (r < u.grid_r[0]) {
        if (!u.taylor_start || r < 0.0)
            throw DomainError("RadialSolution: radius below the sampled range");
        const double a = u.alpha0;
        const double f = a - std::pow(a, u.p);
        const double a2 = f / (2.0 * u.N);
        const double a4 = (1.0 - u.p * std::pow(a, u.p - 1.0)) * a2 / (4.0 * (u.N + 2.0));
        const double r2 = r * r;
        return {a + a2 * r2 + a4 * r2 * r2, 2.0 * a2 * r + 4.0 * a4 * r2 * r};
    }
    if (r > u.grid_r[n - 1] || (u.tail.attached && r > u.tail.r_match)) {
        if (!u.tail.attached)
            throw DomainError("RadialSolution: radius beyond the sampled range");
        return {u.tail.c * far_field(r, u.N), u.tail.c * far_field_prime(r, u.N)};
    }
    const double* begin = u.grid_r.data();
    Index i = static_cast<Index>(std::upper_bound(begin, begin + n, r) - begin) - 1;
    i = std::clamp<Index>(i, 0, n - 2);
    const double r0 = u.grid_r[i], r1 = u.grid_r[i + 1];
    const double H = r1 - r0;
    const Quintic q = quintic(u.values_u[i], u.values_du[i], second_from_ode(u, r0, u.values_u[i], u.values_du[i]),
                              u.values_u[i + 1], u.values_du[i + 1],
                              second_from_ode(u, r1, u.values_u[i + 1], u.values_du[i + 1]), H);
    // u' gets its own quintic from (u', u'', u''') rather than the derivative of the u interpolant,
    // which would lose an order.
    const double s0 = second_from_ode(u, r0, u.values_u[i], u.values_du[i]);
    const double s1 = second_from_ode(u, r1, u.values_u[i + 1], u.values_du[i + 1]);
    const Quintic dq = quintic(u.values_du[i], s0, third_from_ode(u, r0, u.values_u[i], u.values_du[i], s0),
                               u.values_du[i + 1], s1, third_from_ode(u, r1, u.values_u[i + 1], u.values_du[i + 1], s1), H);
    const double s = (r - r0) / H;
    const double val = q.c[0] + s * (q.c[1] + s * (q.c[2] + s * (q.c[3] + s * (q.c[4] + s * q.c[5]))));
    const double der = dq.c[0] + s * (dq.c[1] + s * (dq.c[2] + s * (dq.c[3] + s * (dq.c[4] + s * dq.c[5]))));
    return {val, der};
}

} // namespace

double eval_u(const RadialSolution& u, double r)
{
    return evaluate(u, r).first;
}

double eval_du(const RadialSolution& u, double r)
{
    return evaluate(u, r).second;
}

TransformedSolution to_fowler(const RadialSolution& u, const FowlerParams& fp, const UniformGrid& grid)
{
    if (u.N != fp.N || std::abs(u.p - fp.p) > 1e-12 * fp.p)
        throw DomainError("to_fowler: parameter mismatch between profile and FowlerParams");
    if (grid.n < 2)
        throw DomainError("to_fowler: empty grid");
    const double lo = u.taylor_start ? -std::numeric_limits<double>::infinity() : std::log(u.grid_r[0]);
    const double hi = u.tail.attached ? std::numeric_limits<double>::infinity() : std::log(u.grid_r[u.grid_r.size() - 1]);
    if (grid.front() < lo || grid.back() > hi)
        throw DomainError("to_fowler: grid outside the profile's radial range");
    TransformedSolution v;
    v.grid = grid;
    v.params = fp;
    v.values_v.resize(grid.n);
    for (Index i = 0; i < grid.n; ++i) {
        const double t = grid[i];
        v.values_v[i] = std::exp(fp.alpha_exp * t) * eval_u(u, std::exp(t));
    }
    return v;
}

RadialSolution from_fowler(const TransformedSolution& v)
{
    const UniformGrid& g = v.grid;
    const double a = v.params.alpha_exp;
    const Vector dv = derivative4(v.values_v, g.h);
    RadialSolution u;
    u.N = v.params.N;
    u.p = v.params.p;
    u.grid_r.resize(g.n);
    u.values_u.resize(g.n);
    u.values_du.resize(g.n);
    for (Index i = 0; i < g.n; ++i) {
        const double t = g[i];
        const double ea = std::exp(-a * t);
        u.grid_r[i] = std::exp(t);
        u.values_u[i] = ea * v.values_v[i];
        u.values_du[i] = ea * std::exp(-t) * (dv[i] - a * v.values_v[i]);
    }
    u.alpha0 = u.values_u[0];
    for (Index i = 0; i + 1 < g.n; ++i) {
        const double f0 = v.values_v[i], f1 = v.values_v[i + 1];
        if ((f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0)) {
            if (f1 == 0.0 && i + 2 < g.n && (v.values_v[i + 2] > 0.0) == (f0 > 0.0))
                continue;
            const double t = g[i] + g.h * f0 / (f0 - f1);
            u.nodes.push_back(std::exp(t));
        }
    }
    return u;
}

Vector simpson_weights(const UniformGrid& g)
{
    const Index n = g.n;
    if (n < 4)
        return trapezoid_weights(g);
    Vector w = Vector::Zero(n);
    const Index m = (n % 2 == 1) ? n : n - 3;
    for (Index i = 0; i + 2 < m; i += 2) {
        w[i] += g.h / 3.0;
        w[i + 1] += 4.0 * g.h / 3.0;
        w[i + 2] += g.h / 3.0;
    }
    if (m != n) {
        const double c = 3.0 * g.h / 8.0;
        w[n - 4] += c;
        w[n - 3] += 3.0 * c;
        w[n - 2] += 3.0 * c;
        w[n - 1] += c;
    }
    return w;
}

namespace {

Vector exp_weight(const FowlerParams& fp, const UniformGrid& g)
{
    return sample(g, [&](double t) { return std::exp(-fp.beta * t); });
}

Vector quad_weights(const UniformGrid& g, Quadrature q)
{
    return q == Quadrature::Simpson ? simpson_weights(g) : trapezoid_weights(g);
}

} // namespace

double weighted_l2(const Vector& f, const Vector& g, const FowlerParams& fp, const UniformGrid& grid, Quadrature q)
{
    if (f.size() != grid.n || g.size() != grid.n)
        throw DomainError("weighted_l2: grid functions must share the grid");
    return (quad_weights(grid, q).array() * exp_weight(fp, grid).array() * f.array() * g.array()).sum();
}

double weighted_inner(const Vector& f, const Vector& g, const FowlerParams& fp, const UniformGrid& grid, Quadrature q)
{
    if (f.size() != grid.n || g.size() != grid.n)
        throw DomainError("weighted_inner: grid functions must share the grid");
    const Vector pot = sample(grid, [&](double t) { return fp.gamma + std::exp(2.0 * t); });
    const Vector w = quad_weights(grid, q).cwiseProduct(exp_weight(fp, grid));
    double grad = 0.0;
    if (q == Quadrature::Simpson) {
        grad = (w.array() * derivative4(f, grid.h).array() * derivative4(g, grid.h).array()).sum();
    } else {
        for (Index i = 0; i + 1 < grid.n; ++i)
            grad += std::exp(-fp.beta * (grid[i] + 0.5 * grid.h)) * (f[i + 1] - f[i]) * (g[i + 1] - g[i]);
        grad /= grid.h;
    }
    return grad + (w.array() * pot.array() * f.array() * g.array()).sum();
}

EnergyResult energy(const TransformedSolution& v, Quadrature q)
{
    const FowlerParams& fp = v.params;
    const Vector& f = v.values_v;
    EnergyResult out;
    const double quad = 0.5 * weighted_inner(f, f, fp, v.grid, q);
    const Vector w = quad_weights(v.grid, q).cwiseProduct(exp_weight(fp, v.grid));
    double nonlin = 0.0;
    for (Index i = 0; i < v.grid.n; ++i)
        nonlin += w[i] * std::pow(std::abs(f[i]), fp.p + 1.0);
    out.value = quad - nonlin / (fp.p + 1.0);
    out.edge_value = std::max(std::abs(f[0]), std::abs(f[v.grid.n - 1]));
    out.truncation_warning = out.edge_value > 1e-10;
    return out;
}

double radial_energy(const RadialSolution& u)
{
    static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    const double p = u.p;
    auto density = [&](double r) {
        const auto [val, der] = evaluate(u, r);
        const double rn = std::pow(r, u.N - 1);
        return (0.5 * (der * der + val * val) - std::pow(std::abs(val), p + 1.0) / (p + 1.0)) * rn;
    };
    auto panel = [&](double a, double b) {
        const double m = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (int k = 0; k < 5; ++k)
            s += wg[k] * density(m + hw * xg[k]);
        return s * hw;
    };
    double total = 0.0;
    const Index n = u.grid_r.size();
    if (u.taylor_start)
        total += panel(0.0, u.grid_r[0]);
    const double end = u.tail.attached ? std::min(u.tail.r_match, u.grid_r[n - 1]) : u.grid_r[n - 1];
    for (Index i = 0; i + 1 < n && u.grid_r[i] < end; ++i) {
        const double b = std::min(u.grid_r[i + 1], end);
        // split panels so each covers at most a quarter of a unit radius
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - u.grid_r[i]) / 0.25)));
        const double step = (b - u.grid_r[i]) / pieces;
        for (int k = 0; k < pieces; ++k)
            total += panel(u.grid_r[i] + k * step, u.grid_r[i] + (k + 1) * step);
    }
    if (u.tail.attached)
        for (int k = 0; k < 400; ++k)
            total += panel(end + 0.25 * k, end + 0.25 * (k + 1));
    return total;
}

} // namespace nodalkit
