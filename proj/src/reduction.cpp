#include "nodalkit/reduction.hpp"

#include "nodalkit/tridiag.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nodalkit {

namespace {

struct LineIntegrals {
    double grad_w_sq, w_pow_p1, w_sq, tail_moment, weighted_w_sq, A;
};

LineIntegrals line_integrals(double eps, int N)
{
    const FowlerParams fp = params_of(eps, N);
    const ProfileConstants c = profile_of(fp);
    const double sg = std::sqrt(c.gamma0);
    QuadratureSpec q;
    q.half_width = 60.0;
    LineIntegrals out;
    out.grad_w_sq = integrate_line([&](double t) { const double d = eval_w_prime(t, c); return d * d; }, q);
    out.w_pow_p1 = integrate_line([&](double t) { return std::pow(eval_w(t, c), c.p + 1.0); }, q);
    out.w_sq = integrate_line([&](double t) { const double w = eval_w(t, c); return w * w; }, q);
    out.tail_moment = integrate_line([&](double t) { return std::pow(eval_w(t, c), c.p) * std::exp(sg * t); }, q);
    out.weighted_w_sq = N >= 5 ? integrate_line([&](double t) {
        const double w = eval_w(t, c);
        return w * w * std::exp(2.0 * t);
    }, q)
                               : std::numeric_limits<double>::quiet_NaN();
    out.A = c.amplitude_A;
    return out;
}

void check_pair(const FowlerParams& fp, const ReductionConstants& rc)
{
    if (fp.N != rc.N || std::abs(fp.p - rc.p) > 1e-12)
        throw DomainError("reduction constants were computed for a different (N, p)");
}

// t2 with -2 t2 e^{2 t2} = x on [-40, -1], where the left side is increasing.
double solve_dim4(double x)
{
    auto g = [&](double t) { return -2.0 * t * std::exp(2.0 * t) - x; };
    double lo = -40.0, hi = -1.0;
    if (!(g(lo) < 0.0 && g(hi) > 0.0))
        throw ConvergenceError("predicted_t: no root of -2 t e^{2t} = a beta in [-40, -1]");
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Leading interaction X(d), d = t1 - t2, and the t2 self term T(t2) with
// their derivatives.
struct Terms {
    double X, dX, ddX, T, dT, ddT;
};

Terms terms(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc)
{
    const double d = t[0] - t[1];
    const double kappa = 0.5 * (fp.N - 2);
    const double aj = rc.A * rc.tail_moment;
    Terms out;
    out.X = std::exp(-kappa * std::abs(d)) * aj;
    out.dX = (d > 0.0 ? -kappa : kappa) * out.X;
    out.ddX = kappa * kappa * out.X;
    const double t2 = t[1];
    if (fp.N == 3) {
        out.T = out.dT = out.ddT = 0.5 * std::exp(t2) * aj;
    } else if (fp.N == 4) {
        const double e = std::exp(2.0 * t2);
        out.T = -0.25 * t2 * e * aj;
        out.dT = -0.25 * (1.0 + 2.0 * t2) * e * aj;
        out.ddT = -(1.0 + t2) * e * aj;
    } else {
        const double e = std::exp(2.0 * t2) * rc.weighted_w_sq;
        out.T = 0.5 * e;
        out.dT = e;
        out.ddT = 2.0 * e;
    }
    return out;
}

double self_coeff(const FowlerParams& fp, const ReductionConstants& rc)
{
    return (0.5 - 1.0 / (fp.p + 1.0)) * rc.w_pow_p1;
}

bool newton(Point2& t, const FowlerParams& fp, const ReductionConstants& rc, std::vector<double>* trace,
            int* iterations)
{
    const double scale = fp.beta * self_coeff(fp, rc);
    Point2 g = grad_K_tilde(t, fp, rc);
    for (int it = 0; it < 100; ++it) {
        if (trace)
            trace->push_back(g.norm());
        if (iterations)
            *iterations = it;
        if (g.norm() <= 1e-12 * scale)
            return true;
        const Point2 step = hess_K_tilde(t, fp, rc).ldlt().solve(g);
        double lambda = 1.0;
        Point2 next = t - step;
        Point2 gn = grad_K_tilde(next, fp, rc);
        while (gn.norm() >= g.norm() && lambda > 1e-6) {
            lambda *= 0.5;
            next = t - lambda * step;
            gn = grad_K_tilde(next, fp, rc);
        }
        if (gn.norm() >= g.norm())
            return g.norm() <= 1e-10 * scale;
        t = next;
        g = gn;
    }
    return false;
}

} // namespace

ReductionConstants constants_ab(int N, double eps)
{
    if (N < 3)
        throw DomainError("constants_ab: N must be at least 3");
    const LineIntegrals lim = line_integrals(0.0, N);
    const LineIntegrals cur = eps == 0.0 ? lim : line_integrals(eps, N);
    ReductionConstants rc;
    rc.N = N;
    rc.eps = eps;
    rc.p = params_of(eps, N).p;
    rc.grad_w_sq = cur.grad_w_sq;
    rc.w_pow_p1 = cur.w_pow_p1;
    rc.w_sq = cur.w_sq;
    rc.tail_moment = cur.tail_moment;
    rc.weighted_w_sq = cur.weighted_w_sq;
    rc.A = cur.A;
    const double aj = lim.A * lim.tail_moment;
    if (N == 3) {
        rc.a0 = 4.0 * lim.grad_w_sq / aj;
        rc.b0 = 0.5 * rc.a0;
    } else if (N == 4) {
        rc.a0 = 8.0 * lim.grad_w_sq / aj;
        rc.b0 = lim.grad_w_sq / aj;
    } else {
        rc.a0 = 2.0 * lim.grad_w_sq / lim.weighted_w_sq;
        rc.b0 = 2.0 * lim.grad_w_sq / ((N - 2) * aj);
    }
    return rc;
}

LambdaBox lambda_box(const FowlerParams& fp, const ReductionConstants& rc)
{
    LambdaBox box;
    box.x_lo = 0.5 * rc.a0 * fp.beta;
    box.x_hi = 1.5 * rc.a0 * fp.beta;
    box.y_lo = 0.5 * rc.b0 * fp.beta;
    box.y_hi = 1.5 * rc.b0 * fp.beta;
    return box;
}

Point2 lambda_coords(const Point2& t, int N)
{
    const double d = t[0] - t[1];
    if (N == 3)
        return {std::exp(t[1]), std::exp(0.5 * d)};
    if (N == 4)
        return {-2.0 * t[1] * std::exp(2.0 * t[1]), std::exp(d)};
    return {std::exp(2.0 * t[1]), std::exp(0.5 * (N - 2) * d)};
}

Point2 from_lambda_coords(double x, double y, int N)
{
    if (!(x > 0.0) || !(y > 0.0))
        throw DomainError("from_lambda_coords: coordinates must be positive");
    if (N == 3) {
        const double t2 = std::log(x);
        return {t2 + 2.0 * std::log(y), t2};
    }
    if (N == 4) {
        const double t2 = solve_dim4(x);
        return {t2 + std::log(y), t2};
    }
    const double t2 = 0.5 * std::log(x);
    return {t2 + 2.0 / (N - 2) * std::log(y), t2};
}

bool in_lambda(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc)
{
    const LambdaBox box = lambda_box(fp, rc);
    const Point2 xy = lambda_coords(t, fp.N);
    return xy[0] > box.x_lo && xy[0] < box.x_hi && xy[1] > box.y_lo && xy[1] < box.y_hi;
}

Point2 predicted_t(const FowlerParams& fp, const ReductionConstants& rc)
{
    if (!(fp.beta > 0.0))
        throw DomainError("predicted_t: beta must be positive");
    return from_lambda_coords(rc.a0 * fp.beta, rc.b0 * fp.beta, fp.N);
}

double K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc)
{
    check_pair(fp, rc);
    const Terms k = terms(t, fp, rc);
    return self_coeff(fp, rc) * (std::exp(-fp.beta * t[0]) + std::exp(-fp.beta * t[1])) + k.T + k.X;
}

Point2 grad_K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc)
{
    check_pair(fp, rc);
    const Terms k = terms(t, fp, rc);
    const double c = self_coeff(fp, rc) * fp.beta;
    return {-c * std::exp(-fp.beta * t[0]) + k.dX, -c * std::exp(-fp.beta * t[1]) + k.dT - k.dX};
}

Eigen::Matrix2d hess_K_tilde(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc)
{
    check_pair(fp, rc);
    const Terms k = terms(t, fp, rc);
    const double c = self_coeff(fp, rc) * fp.beta * fp.beta;
    Eigen::Matrix2d h;
    h(0, 0) = c * std::exp(-fp.beta * t[0]) + k.ddX;
    h(0, 1) = h(1, 0) = -k.ddX;
    h(1, 1) = c * std::exp(-fp.beta * t[1]) + k.ddT + k.ddX;
    return h;
}

ReducedEnergyReport critical_point(const FowlerParams& fp, const ReductionConstants& rc)
{
    check_pair(fp, rc);
    if (!(fp.beta > 0.0))
        throw DomainError("critical_point: beta must be positive");
    ReducedEnergyReport rep;
    rep.N = fp.N;
    rep.eps = fp.eps;
    rep.beta = fp.beta;
    rep.box = lambda_box(fp, rc);
    rep.t_pred = predicted_t(fp, rc);
    Point2 t = rep.t_pred;
    const bool ok = newton(t, fp, rc, &rep.trace, &rep.iterations);
    if (!ok || !in_lambda(t, fp, rc)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "critical_point: " << (ok ? "left the configuration box" : "Newton did not converge") << " at t = ("
            << t[0] << ", " << t[1] << "); gradient norms:";
        for (double g : rep.trace)
            msg << ' ' << g;
        throw ConvergenceError(msg.str());
    }
    rep.t_star = t;
    rep.K_tilde_value = K_tilde(t, fp, rc);
    rep.hessian_scaled = hess_K_tilde(t, fp, rc) / fp.beta;
    rep.hessian_eigs = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(rep.hessian_scaled).eigenvalues();

    const double fr[3] = {0.6, 1.0, 1.4};
    std::vector<Point2> found;
    for (double fx : fr) {
        for (double fy : fr) {
            StartResult s;
            s.start = from_lambda_coords(fx * rc.a0 * fp.beta, fy * rc.b0 * fp.beta, fp.N);
            Point2 x = s.start;
            s.converged = newton(x, fp, rc, nullptr, nullptr) && in_lambda(x, fp, rc);
            s.end = x;
            if (s.converged && std::none_of(found.begin(), found.end(), [&](const Point2& f) {
                    return (f - x).lpNorm<Eigen::Infinity>() < 1e-8;
                }))
                found.push_back(x);
            rep.multistart.push_back(s);
        }
    }
    rep.distinct_critical_points = static_cast<int>(found.size());
    return rep;
}

UniformGrid reduction_grid(const Point2& t, const ReductionGrid& spec)
{
    return make_grid(std::min(t[0], t[1]) - spec.margin, spec.right, spec.h);
}

namespace {

AnsatzParams ansatz_at(const Point2& t, const FowlerParams& fp)
{
    AnsatzParams ap;
    ap.t1 = t[0];
    ap.t2 = t[1];
    ap.params = fp;
    return ap;
}

// Tridiagonal part of the conservative second-order operator
// e^{beta t}(e^{-beta t} f')' - (gamma + e^{2t}) f + pot f, Dirichlet rows at the ends.
struct Band {
    Vector lower, diag, upper;
};

Band operator_band(const FowlerParams& fp, const UniformGrid& g, const Vector& pot)
{
    const Index n = g.n;
    const double h2 = g.h * g.h;
    const double ep = std::exp(-0.5 * fp.beta * g.h) / h2, em = std::exp(0.5 * fp.beta * g.h) / h2;
    Band b{Vector::Zero(n - 1), Vector::Ones(n), Vector::Zero(n - 1)};
    for (Index i = 1; i + 1 < n; ++i) {
        b.lower[i - 1] = em;
        b.upper[i] = ep;
        b.diag[i] = -(ep + em) - (fp.gamma + std::exp(2.0 * g[i])) + pot[i];
    }
    return b;
}

Vector apply_band(const Band& b, const Vector& f)
{
    const Index n = f.size();
    Vector out(n);
    out[0] = f[0];
    out[n - 1] = f[n - 1];
    for (Index i = 1; i + 1 < n; ++i)
        out[i] = b.lower[i - 1] * f[i - 1] + b.diag[i] * f[i] + b.upper[i] * f[i + 1];
    return out;
}

} // namespace

ProjectedSolve solve_projected(const Point2& t, const FowlerParams& fp, const UniformGrid& grid,
                               const ProjectedOptions& opt)
{
    const AnsatzParams ap = ansatz_at(t, fp);
    const TransformedSolution W = build_ansatz(ap, grid);
    const Index n = grid.n;
    const double p = fp.p;
    ProjectedSolve out;
    out.grid = grid;
    out.ansatz = W.values_v;
    const Vector S = residual_S(W, 2);
    out.residual_sup = S.cwiseAbs().maxCoeff();

    const Vector pot = W.values_v.unaryExpr([p](double w) { return p * std::pow(std::abs(w), p - 1.0); });
    const Band band = operator_band(fp, grid, pot);
    const TridiagonalLU<double> lu(band.lower, band.diag, band.upper);

    Vector Z[2] = {z_vector(1, ap, grid), z_vector(2, ap, grid)};
    Eigen::Matrix<double, Eigen::Dynamic, 2> X(n, 2);
    Eigen::Matrix<double, 2, Eigen::Dynamic> C(2, n);
    const Vector wts = trapezoid_weights(grid).cwiseProduct(sample(grid, [&](double s) { return std::exp(-fp.beta * s); }));
    for (int j = 0; j < 2; ++j) {
        Z[j][0] = Z[j][n - 1] = 0.0;
        X.col(j) = lu.solve(Z[j]);
        C.row(j) = wts.cwiseProduct(Z[j]).transpose();
    }
    const Eigen::Matrix2d M = C * X;
    const Eigen::FullPivLU<Eigen::Matrix2d> mlu(M);
    if (!mlu.isInvertible() || std::abs(M.determinant()) < 1e-14 * M.cwiseAbs().maxCoeff() * M.cwiseAbs().maxCoeff())
        throw ConvergenceError("solve_projected: bordered system is singular");

    Vector phi = Vector::Zero(n);
    Point2 c = Point2::Zero();
    double damping = 1.0;
    int growth = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opt.max_iter; ++it) {
        Vector rhs(n);
        for (Index i = 0; i < n; ++i) {
            const double w = W.values_v[i], v = w + phi[i];
            const double nl = std::pow(std::abs(v), p - 1.0) * v - std::pow(std::abs(w), p - 1.0) * w - pot[i] * phi[i];
            rhs[i] = -S[i] - nl;
        }
        rhs[0] = rhs[n - 1] = 0.0;
        const Vector y = lu.solve(rhs);
        const Point2 cn = -mlu.solve(C * y);
        const Vector next = y + X * cn;
        const double upd = damping * (next - phi).cwiseAbs().maxCoeff();
        phi += damping * (next - phi);
        c = cn;
        out.updates.push_back(upd);
        out.iterations = it;
        if (upd < opt.tol)
            break;
        growth = upd > prev ? growth + 1 : 0;
        prev = upd;
        if (growth >= 3) {
            if (damping < 1.0)
                throw ConvergenceError("solve_projected: fixed point iteration is not contracting");
            damping = 0.5;
            growth = 0;
        }
        if (it == opt.max_iter)
            throw ConvergenceError("solve_projected: no convergence within the iteration limit");
    }
    out.phi = phi;
    out.c1 = c[0];
    out.c2 = c[1];
    out.damping = damping;
    out.sup_norm = phi.cwiseAbs().maxCoeff();
    for (int j = 0; j < 2; ++j)
        out.ortho_defects[j] = weighted_l2(phi, z_vector(j + 1, ap, grid), fp, grid);
    return out;
}

double K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid)
{
    const ProjectedSolve s = solve_projected(t, fp, grid);
    TransformedSolution v;
    v.grid = grid;
    v.params = fp;
    v.values_v = s.ansatz + s.phi;
    return energy(v).value;
}

Point2 grad_K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid, double step)
{
    Point2 g;
    for (int i = 0; i < 2; ++i) {
        Point2 e = Point2::Zero();
        e[i] = step;
        g[i] = (K_numeric(t + e, fp, grid) - K_numeric(t - e, fp, grid)) / (2.0 * step);
    }
    return g;
}

Eigen::Matrix2d hess_K_numeric(const Point2& t, const FowlerParams& fp, const UniformGrid& grid, double step)
{
    const double s = step > 0.0 ? step : std::max(1e-3, fp.beta / 10.0);
    Eigen::Matrix2d h;
    const double k0 = K_numeric(t, fp, grid);
    for (int i = 0; i < 2; ++i) {
        Point2 ei = Point2::Zero();
        ei[i] = s;
        h(i, i) = (K_numeric(t + ei, fp, grid) - 2.0 * k0 + K_numeric(t - ei, fp, grid)) / (s * s);
    }
    const Point2 e0(s, 0.0), e1(0.0, s);
    h(0, 1) = h(1, 0) = (K_numeric(t + e0 + e1, fp, grid) - K_numeric(t + e0 - e1, fp, grid) -
                         K_numeric(t - e0 + e1, fp, grid) + K_numeric(t - e0 - e1, fp, grid)) /
                        (4.0 * s * s);
    return h;
}

NumericCriticalPoint critical_point_numeric(const Point2& start, const FowlerParams& fp, const ReductionGrid& spec,
                                            int max_iter)
{
    const UniformGrid grid = reduction_grid(start, spec);
    NumericCriticalPoint out;
    Point2 t = start;
    const double tol = 1e-8 * fp.beta;
    for (int it = 0; it < max_iter; ++it) {
        out.grad = grad_K_numeric(t, fp, grid);
        out.iterations = it;
        if (out.grad.norm() < tol)
            break;
        t -= hess_K_numeric(t, fp, grid, 2e-3).ldlt().solve(out.grad);
        out.iterations = it + 1;
    }
    out.t = t;
    out.grad = grad_K_numeric(t, fp, grid);
    out.solve = solve_projected(t, fp, grid);
    return out;
}

void attach_numeric(ReducedEnergyReport& report, const FowlerParams& fp, const ReductionConstants& rc,
                    const ReductionGrid& spec)
{
    report.K_numeric_value = K_numeric(report.t_star, fp, reduction_grid(report.t_star, spec));
    const UniformGrid g = reduction_grid(report.t_pred, spec);
    report.discrepancy_K = std::abs(K_numeric(report.t_pred, fp, g) - K_tilde(report.t_pred, fp, rc)) / fp.beta;
    report.discrepancy_grad = (grad_K_numeric(report.t_pred, fp, g) - grad_K_tilde(report.t_pred, fp, rc)).norm() / fp.beta;
}

double energy_expansion_check(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc,
                              const ReductionGrid& spec)
{
    const TransformedSolution W = build_ansatz(ansatz_at(t, fp), reduction_grid(t, spec));
    return std::abs(energy(W).value - K_tilde(t, fp, rc)) / fp.beta;
}

PairingMatrix lbar_pairing(const Point2& t, const FowlerParams& fp, const ReductionConstants& rc,
                           const ReductionGrid& spec)
{
    check_pair(fp, rc);
    const UniformGrid grid = reduction_grid(t, spec);
    const AnsatzParams ap = ansatz_at(t, fp);
    const ProjectedSolve s = solve_projected(t, fp, grid);
    const double p = fp.p;
    const Vector pot = (s.ansatz + s.phi).unaryExpr([p](double v) { return p * std::pow(std::abs(v), p - 1.0); });
    const Band band = operator_band(fp, grid, pot);
    Vector d[2] = {ansatz_dtj(1, ap, grid), ansatz_dtj(2, ap, grid)};
    PairingMatrix out;
    for (int i = 0; i < 2; ++i) {
        Vector l = apply_band(band, d[i]);
        l[0] = l[grid.n - 1] = 0.0;
        for (int j = 0; j < 2; ++j)
            out.measured(i, j) = weighted_l2(l, d[j], fp, grid);
    }
    if (fp.N == 3) {
        const double aj = rc.A * rc.tail_moment;
        const double e12 = std::exp(0.5 * (t[0] - t[1]));
        out.predicted(0, 0) = -0.25 * e12 * aj;
        out.predicted(0, 1) = out.predicted(1, 0) = 0.25 * e12 * aj;
        out.predicted(1, 1) = -(0.25 * e12 + 0.5 * std::exp(t[1])) * aj;
    }
    return out;
}

} // namespace nodalkit
