#pragma once

#include "nodalkit/grid.hpp"
#include "nodalkit/special.hpp"

#include <limits>
#include <vector>

namespace nodalkit {

struct FowlerParams {
    double eps = 0.0;
    int N = 3;
    double p = 5.0;
    double beta = 0.0;
    double gamma = 0.25;
    double gamma0 = 0.25;
    double alpha_exp = 0.5;
    double A = 0.0;
};

FowlerParams params_of(double eps, int N);
// Same parameters addressed by the exponent instead of eps.
FowlerParams params_of_p(double p, int N);
ProfileConstants profile_of(const FowlerParams& fp);

// Far field c * r^{-(N-2)/2} K_{(N-2)/2}(r) used beyond r_match.
struct Tail {
    bool attached = false;
    double c = 0.0;
    double r_match = std::numeric_limits<double>::infinity();
};

double far_field(double r, int N);
double far_field_prime(double r, int N);

struct RadialSolution {
    Vector grid_r;
    Vector values_u;
    Vector values_du;
    double alpha0 = 0.0;
    std::vector<double> nodes;
    int N = 3;
    double p = 5.0;
    bool taylor_start = false; // below grid_r[0] the series at r = 0 applies
    Tail tail;
};

// Evaluates u (and u') anywhere in the solution's domain: the r = 0 series,
// quintic Hermite interpolation between samples, or the attached tail.
double eval_u(const RadialSolution& u, double r);
double eval_du(const RadialSolution& u, double r);

struct TransformedSolution {
    UniformGrid grid;
    Vector values_v;
    FowlerParams params;
};

TransformedSolution to_fowler(const RadialSolution& u, const FowlerParams& fp, const UniformGrid& grid);
RadialSolution from_fowler(const TransformedSolution& v);

enum class Quadrature {
    Consistent, // one-sided differences at half nodes plus trapezoid; matches the discrete operator
    Simpson     // fourth-order differences with composite Simpson
};

double weighted_inner(const Vector& f, const Vector& g, const FowlerParams& fp, const UniformGrid& grid,
                      Quadrature q = Quadrature::Consistent);
double weighted_l2(const Vector& f, const Vector& g, const FowlerParams& fp, const UniformGrid& grid,
                   Quadrature q = Quadrature::Consistent);

struct EnergyResult {
    double value = 0.0;
    bool truncation_warning = false;
    double edge_value = 0.0; // max |v| at the two ends
};

EnergyResult energy(const TransformedSolution& v, Quadrature q = Quadrature::Consistent);

// Energy of u in radial variables, 1/2 int (u'^2 + u^2) r^{N-1} - 1/(p+1) int |u|^{p+1} r^{N-1}.
double radial_energy(const RadialSolution& u);

// Composite Simpson weights (3/8 rule on the last panel when the node count is even).
Vector simpson_weights(const UniformGrid& g);

} // namespace nodalkit
