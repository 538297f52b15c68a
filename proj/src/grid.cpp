#include "nodalkit/grid.hpp"
#include "nodalkit/errors.hpp"

#include <cmath>

namespace nodalkit {

Vector UniformGrid::nodes() const
{
    Vector t(n);
    for (Index i = 0; i < n; ++i)
        t[i] = (*this)[i];
    return t;
}

UniformGrid make_grid(double lo, double hi, double h)
{
    if (!(h > 0.0) || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("make_grid: need lo < hi and h > 0");
    UniformGrid g;
    g.t0 = lo;
    g.h = h;
    g.n = static_cast<Index>(std::ceil((hi - lo) / h - 1e-9)) + 1;
    return g;
}

UniformGrid coarsen(const UniformGrid& g)
{
    if (g.n % 2 == 0)
        throw DomainError("coarsen: grid must have an odd node count");
    UniformGrid c;
    c.t0 = g.t0;
    c.h = 2.0 * g.h;
    c.n = (g.n + 1) / 2;
    return c;
}

Vector trapezoid_weights(const UniformGrid& g)
{
    Vector w = Vector::Constant(g.n, g.h);
    w[0] = w[g.n - 1] = 0.5 * g.h;
    return w;
}

double trapezoid(const Vector& f, const UniformGrid& g)
{
    return trapezoid_weights(g).dot(f);
}

Vector derivative4(const Vector& f, double h)
{
    const Index n = f.size();
    if (n < 5)
        throw DomainError("derivative4: need at least 5 nodes");
    Vector d(n);
    for (Index i = 2; i < n - 2; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
    return d;
}

Vector second_derivative4(const Vector& f, double h)
{
    const Index n = f.size();
    if (n < 6)
        throw DomainError("second_derivative4: need at least 6 nodes");
    const double s = 12.0 * h * h;
    Vector d(n);
    for (Index i = 2; i < n - 2; ++i)
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / s;
    d[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / s;
    d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / s;
    d[n - 1] = (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]) / s;
    d[n - 2] = (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]) / s;
    return d;
}

} // namespace nodalkit
