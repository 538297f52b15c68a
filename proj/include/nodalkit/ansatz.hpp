#pragma once

#include "nodalkit/transform.hpp"

namespace nodalkit {

struct AnsatzParams {
    double t1 = 0.0; // location of the positive bump
    double t2 = 0.0; // location of the negative bump, t1 < t2
    FowlerParams params;
};

double w_shift(double t, double tj, const FowlerParams& fp);
double w_corrected(double t, double tj, const FowlerParams& fp);
// Derivative of w_corrected in tj, and its t-derivative.
double w_corrected_dtj(double t, double tj, const FowlerParams& fp);
double w_corrected_dtj_dt(double t, double tj, const FowlerParams& fp);

// Grid [min(t1,t2) - margin, right] with step h.
UniformGrid ansatz_grid(const AnsatzParams& ap, double h = 1e-3, double margin = 30.0, double right = 4.0);

TransformedSolution build_ansatz(const AnsatzParams& ap, const UniformGrid& grid, double min_margin = 20.0);

// d/dt_j of the two-bump ansatz on the grid.
Vector ansatz_dtj(int j, const AnsatzParams& ap, const UniformGrid& grid);

Vector z_vector(int j, const AnsatzParams& ap, const UniformGrid& grid);

// S[v] = v'' - beta v' - (gamma + e^{2t}) v + |v|^{p-1} v. Order 4 uses
// five-point differences; order 2 uses the conservative form
// e^{beta t}(e^{-beta t} v')' that is the exact gradient of the discrete energy
// (zero at the two end nodes).
Vector residual_S(const TransformedSolution& v, int order = 4);

struct ResidualNorms {
    double sup = 0.0;
    double weighted_l1 = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double tau = 0.0;
};

// tau inside the admissible window (1/2, min(p,2)/2).
double default_tau(const FowlerParams& fp);
double residual_bound(const AnsatzParams& ap, double tau);
ResidualNorms residual_norms(const AnsatzParams& ap, double tau = 0.0, double h = 1e-3);

struct InteractionResult {
    double lhs = 0.0;
    double rhs_prediction = 0.0;
};

InteractionResult interaction(double eta, double theta, double r, double s, const FowlerParams& fp);

} // namespace nodalkit
