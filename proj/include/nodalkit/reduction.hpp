#pragma once

#include "nodalkit/ansatz.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nodalkit {

typedef Eigen::Vector2d Point2;

struct ReductionConstants {
    int N = 3;
    double eps = 0.0; // exponent offset at which the integrals below were taken
    double p = 5.0;
    double a0 = 0.0;  // limit constants, always at eps = 0
    double b0 = 0.0;
    double grad_w_sq = 0.0;     // int |w'|^2
    double w_pow_p1 = 0.0;      // int w^{p+1}
    double w_sq = 0.0;          // int w^2
    double tail_moment = 0.0;   // int w^p e^{sqrt(gamma0) t}
    double weighted_w_sq = 0.0; // int w^2 e^{2t}, finite for N >= 5 only
    double A = 0.0;
};

ReductionConstants constants_ab(int N, double eps = 0.0);

// Box coordinates of the configuration space: (x, y) = (e^{t2}, e^{(t1-t2)/2})
// for N = 3, (-2 t2 e^{2 t2}, e^{t1-t2}) for N = 4 and
// (e^{2 t2}, e^{(N-2)(t1-t2)/2}) for N >= 5. The box is the open rectangle
// x/(a0 beta), y/(b0 beta) in (1/2, 3/2).
struct LambdaBox {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
};

LambdaBox lambda_box(const FowlerParams& fp, const ReductionConstants& rc);
Point2 lambda_coords(const Point2& t, int N);
Point2 from_lambda_coords(double x, double y, int N);
bool in_lambda(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc);

Point2 predicted_t(const FowlerParams& fp, const ReductionConstants& rc);

double K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc);
Point2 grad_K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc);
Eigen::Matrix2d hess_K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc);

struct StartResult {
    Point2 start = Point2::Zero();
    Point2 end = Point2::Zero();
    bool converged = false;
};

struct ReducedEnergyReport {
    int N = 3;
    double eps = 0.0;
    double beta = 0.0;
    Point2 t_star = Point2::Zero();
    Point2 t_pred = Point2::Zero();
    double K_tilde_value = 0.0;
    double K_numeric_value = std::numeric_limits<double>::quiet_NaN();
    Eigen::Matrix2d hessian_scaled = Eigen::Matrix2d::Zero();
    Point2 hessian_eigs = Point2::Zero(); // ascending
    LambdaBox box;
    double discrepancy_K = std::numeric_limits<double>::quiet_NaN();    // |K - K~|/beta at t_pred
    double discrepancy_grad = std::numeric_limits<double>::quiet_NaN(); // |grad K - grad K~|/beta at t_pred
    int iterations = 0;
    std::vector<double> trace; // gradient norms along the Newton run from t_pred
    std::vector<StartResult> multistart;
    int distinct_critical_points = 0;
};

ReducedEnergyReport critical_point(const FowlerParams& fp, const ReductionConstants& rc);

struct ReductionGrid {
    double h = 1e-3;
    double margin = 30.0;
    double right = 4.0;
};

UniformGrid reduction_grid(const Point2& t, const ReductionGrid& spec = {});

struct ProjectedOptions {
    double tol = 1e-12;
    int max_iter = 200;
};

struct ProjectedSolve {
    UniformGrid grid;
    Vector ansatz;
    Vector phi;
    double c1 = 0.0;
    double c2 = 0.0;
    Point2 ortho_defects = Point2::Zero();
    int iterations = 0;
    double sup_norm = 0.0;
    double residual_sup = 0.0; // sup of the discrete residual of the ansatz
    double damping = 1.0;
    std::vector<double> updates;
};

ProjectedSolve solve_projected(const Point2& t, const FowlerParams& fp, const UniformGrid& grid,
                               const ProjectedOptions& opt = {});

double K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid);
// Central differences on a fixed grid.
Point2 grad_K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid, double step = 1e-3);
// step <= 0 selects max(1e-3, beta/10).
Eigen::Matrix2d hess_K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid, double step = 0.0);

struct NumericCriticalPoint {
    Point2 t = Point2::Zero();
    Point2 grad = Point2::Zero();
    int iterations = 0;
    ProjectedSolve solve;
};

// Newton on the finite-difference gradient of K_numeric, grid frozen at the start.
NumericCriticalPoint critical_point_numeric(const Point2& start, const FowlerParams& fp, const ReductionGrid& spec = {},
                                            int max_iter = 8);

// Fills K_numeric_value at t_star and the two discrepancies at t_pred.
void attach_numeric(ReducedEnergyReport& report, const FowlerParams& fp, const ReductionConstants& rc,
                    const ReductionGrid& spec = {});

double energy_expansion_check(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc,
                              const ReductionGrid& spec = {});

struct PairingMatrix {
    Eigen::Matrix2d measured = Eigen::Matrix2d::Zero();
    // Closed form for N = 3; NaN otherwise.
    Eigen::Matrix2d predicted = Eigen::Matrix2d::Constant(std::numeric_limits<double>::quiet_NaN());
};

PairingMatrix lbar_pairing(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc,
                           const ReductionGrid& spec = {});

} // namespace nodalkit
