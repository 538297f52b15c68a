#pragma once

#include "nodalkit/reduction.hpp"
#include "nodalkit/shooting.hpp"

#include <limits>
#include <vector>

namespace nodalkit {

// Spherical-harmonic level j: eigenvalue j(N-2+j) of the Laplace-Beltrami
// operator with its multiplicity.
struct ModeSpec {
    int level = 0;
    double lambda = 0.0;
    long multiplicity = 1;
};

ModeSpec mode_spec(int level, int N);

// Symmetric tridiagonal matrix: diag (n) and off-diagonal (n-1).
struct SymTridiag {
    Vector diag;
    Vector off;
};

// Number of eigenvalues strictly below x.
Index sturm_count(const SymTridiag& T, double x);
// Eigenvalues with ascending indices [first, first + count), by bisection.
std::vector<double> tridiag_eigenvalues(const SymTridiag& T, Index first, Index count);
// Unit eigenvector for a computed eigenvalue (inverse iteration).
Vector tridiag_eigenvector(const SymTridiag& T, double lambda, const std::vector<Vector>& deflate = {});

struct SpectrumGrid {
    double h = 1e-3;          // fine step; the coarse level uses 2h
    double left_margin = 30.0; // left end = leftmost extremum of v minus this
    double right = 5.0;
    double tol = 1e-4;        // allowed eigenvalue shift between the two levels
};

struct SpectrumReport {
    ModeSpec mode;
    int N = 3;
    double p = 5.0;
    double eps = 0.0;
    UniformGrid grid; // fine grid; eigenvectors live here
    std::vector<double> eigenvalues; // ascending, extrapolated from h and 2h
    std::vector<double> fine;        // raw values at h
    std::vector<double> coarse;      // raw values at 2h
    std::vector<Vector> eigenvectors; // psi (not chi), unit norm in the e^{-beta t} weight
    // Filled by small_eigen_scan.
    std::vector<double> fits;
    std::vector<double> xi;
    double c0_estimate = std::numeric_limits<double>::quiet_NaN();
};

UniformGrid spectrum_grid(const RadialSolution& u, const SpectrumGrid& spec = {});

// Top m eigenpairs of psi'' - beta psi' - (gamma + lambda_k + e^{2t}) psi + p|v|^{p-1} psi.
SpectrumReport mode_eigens(const RadialSolution& u, int level, int m, const SpectrumGrid& spec = {});

// l-th Hardy-weighted eigenvalue (l = 1, 2, ...).
double nu(const RadialSolution& u, int l, const SpectrumGrid& spec = {});

// Bottom of the spectrum of the form without the nonlinear potential, over gamma0.
double hardy_ratio(const RadialSolution& u, const SpectrumGrid& spec = {});

struct ScanEntry {
    double eps = 0.0;
    double beta = 0.0;
    double alpha0 = 0.0;
    int small_count = 0;             // eigenvalues with |mu| < 10 eps
    std::vector<double> small;       // the two smallest |mu|, in increasing |mu|
    double third_abs = 0.0;          // third smallest |mu|
    Point2 xi = Point2::Zero();      // ascending eigenvalues of beta^{-1} hess K~ at t*
    Point2 ratios = Point2::Zero();  // (mu_j / eps) / (-xi_j)
    Point2 alignment = Point2::Zero(); // cosine to span of the two bump derivatives
};

struct ScanResult {
    int N = 3;
    std::vector<ScanEntry> entries;
    double c0_estimate = std::numeric_limits<double>::quiet_NaN();
};

ScanResult small_eigen_scan(const std::vector<double>& eps_list, int N, const SpectrumGrid& spec = {},
                            const SolverConfig& cfg = {});

struct KernelCheck {
    double eigenvalue = 0.0;
    double op_residual = 0.0;
    double wronskian_dev = 0.0;
    double cosine = 0.0;
};

KernelCheck kernel_mode1_check(const RadialSolution& u, const SpectrumGrid& spec = {});

struct LimitSpectrum {
    UniformGrid grid;
    std::vector<double> eigenvalues; // ascending
    std::vector<Vector> eigenvectors;
};

// psi'' - gamma0 psi + p w0^{p-1} psi = mu psi on [-half_width, half_width].
LimitSpectrum limit_spectrum(int N, int m, double half_width = 30.0, double h = 1e-3, double tol = 1e-4);

} // namespace nodalkit
