#pragma once

#include "nodalkit/transform.hpp"

#include <string>
#include <vector>

namespace nodalkit {

struct SolverConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double r_max = 100.0;
    double start_scale = 1e-4;    // r0 = start_scale * min(1, alpha^{-(p-1)/2})
    double decay_tol = 1e-6;      // |u| below this for the tail test
    double decay_slope_tol = 0.2; // |u'/u + 1| below this for the tail test
    bool detect_decay = true;
    double event_rel = 1e-12; // crossings refined to this relative width
    double bisect_rel = 1e-14;
    int bisect_max = 200;
    double bracket_factor = 1.25;
    double alpha_max = 1e9;
    bool extended_precision = false; // integrate in long double
    int workers = 0;                 // 0: hardware concurrency
};

enum class Tag { BlowUpPositive, BlowUpNegative, Decay, Indeterminate };

struct Classification {
    Tag tag = Tag::Indeterminate;
    int crossings = 0;
    bool operator==(const Classification&) const = default;
};

std::string tag_name(Tag tag);
Tag tag_from_name(const std::string& name);

struct Trajectory {
    Vector grid_r;
    Vector values_u;
    Vector values_du;
    std::vector<double> crossings;
    Classification terminal;
    double alpha0 = 0.0;
    int N = 3;
    double p = 5.0;
    std::string diagnostics;
};

double start_radius(double alpha0, double p, const SolverConfig& cfg);

Trajectory integrate(double alpha0, int N, double p, const SolverConfig& cfg = {});
Classification classify(const Trajectory& traj, const SolverConfig& cfg = {});

// Decaying solution with exactly k nodes and u(0) > 0, tail attached.
RadialSolution find_nodal(int k, int N, double p, const SolverConfig& cfg = {});

struct SweepInterval {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    Classification cls;
};

// Log-spaced samples of alpha0 merged into maximal constant-tag intervals; the
// boundary between BlowUp(k) and BlowUp(k+1) runs is refined and reported as a
// degenerate Decay(k) interval when the tail test passes there.
std::vector<SweepInterval> sweep(double alpha_lo, double alpha_hi, int samples, int N, double p,
                                 const SolverConfig& cfg = {});

RadialSolution attach_tail(const RadialSolution& sol, const SolverConfig& cfg = {});

} // namespace nodalkit
