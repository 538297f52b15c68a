#pragma once

#include <Eigen/Dense>

namespace nodalkit {

typedef Eigen::VectorXd Vector;
typedef Eigen::Index Index;

// Uniform grid t_i = t0 + i*h, i = 0..n-1.
struct UniformGrid {
    double t0 = 0.0;
    double h = 1e-3;
    Index n = 0;

    double operator[](Index i) const { return t0 + h * static_cast<double>(i); }
    double front() const { return t0; }
    double back() const { return (*this)[n - 1]; }
    Vector nodes() const;
};

// Smallest uniform grid starting at lo with step h whose last node is >= hi.
UniformGrid make_grid(double lo, double hi, double h);

// Every other node of g, starting at node 0 (g.n must be odd).
UniformGrid coarsen(const UniformGrid& g);

Vector trapezoid_weights(const UniformGrid& g);
double trapezoid(const Vector& f, const UniformGrid& g);

// Fourth-order finite differences, one-sided near the ends.
Vector derivative4(const Vector& f, double h);
Vector second_derivative4(const Vector& f, double h);

template <typename F>
Vector sample(const UniformGrid& g, F&& f)
{
    Vector out(g.n);
    for (Index i = 0; i < g.n; ++i)
        out[i] = f(g[i]);
    return out;
}

} // namespace nodalkit
