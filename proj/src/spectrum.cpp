#include "nodalkit/spectrum.hpp"

#include "nodalkit/tridiag.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nodalkit {

namespace {

long binomial(long n, long k)
{
    if (k < 0 || n < k)
        return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace

ModeSpec mode_spec(int level, int N)
{
    if (level < 0 || N < 2)
        throw DomainError("mode_spec: need level >= 0 and N >= 2");
    ModeSpec m;
    m.level = level;
    m.lambda = static_cast<double>(level) * (N - 2 + level);
    m.multiplicity = binomial(N + level - 1, N - 1) - binomial(N + level - 3, N - 1);
    return m;
}

Index sturm_count(const SymTridiag& T, double x)
{
    const Index n = T.diag.size();
    const double pivmin = DBL_MIN * std::max(1.0, T.off.size() ? T.off.cwiseAbs2().maxCoeff() : 1.0);
    Index count = 0;
    double q = T.diag[0] - x;
    for (Index i = 0;; ++i) {
        if (std::abs(q) < pivmin)
            q = -pivmin;
        if (q < 0.0)
            ++count;
        if (i + 1 == n)
            break;
        q = T.diag[i + 1] - x - T.off[i] * T.off[i] / q;
    }
    return count;
}

std::vector<double> tridiag_eigenvalues(const SymTridiag& T, Index first, Index count)
{
    const Index n = T.diag.size();
    if (first < 0 || count < 0 || first + count > n)
        throw DomainError("tridiag_eigenvalues: index range outside the matrix");
    double glo = std::numeric_limits<double>::infinity(), ghi = -glo;
    for (Index i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(T.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(T.off[i]) : 0.0);
        glo = std::min(glo, T.diag[i] - r);
        ghi = std::max(ghi, T.diag[i] + r);
    }
    const double pad = 1e-12 * std::max(std::abs(glo), std::abs(ghi)) + 1e-300;
    std::vector<double> out;
    for (Index k = first; k < first + count; ++k) {
        double lo = glo - pad, hi = ghi + pad; // count(lo) <= k < count(hi)
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi || hi - lo <= 4.0 * DBL_EPSILON * std::max(std::abs(lo), std::abs(hi)))
                break;
            (sturm_count(T, mid) > k ? hi : lo) = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

Vector tridiag_eigenvector(const SymTridiag& T, double lambda, const std::vector<Vector>& deflate)
{
    const Index n = T.diag.size();
    Vector x(n);
    for (Index i = 0; i < n; ++i)
        x[i] = 1.0 + 0.5 * std::sin(0.37 * static_cast<double>(i));
    double shift = 1e-10 * (1.0 + std::abs(lambda));
    for (int attempt = 0; attempt < 6; ++attempt, shift *= 10.0) {
        try {
            const TridiagonalLU<double> lu(T.off, T.diag.array() - (lambda + shift), T.off);
            for (int it = 0; it < 3; ++it) {
                for (const Vector& d : deflate)
                    x -= d.dot(x) * d;
                x = lu.solve(x);
                x /= x.norm();
            }
            for (const Vector& d : deflate)
                x -= d.dot(x) * d;
            x /= x.norm();
            Index imax;
            x.cwiseAbs().maxCoeff(&imax);
            if (x[imax] < 0.0)
                x = -x;
            return x;
        } catch (const ConvergenceError&) {
        }
    }
    throw ConvergenceError("tridiag_eigenvector: inverse iteration failed");
}

namespace {

// Interior-node matrix of chi'' - (shift + e^{2t}) chi + pot chi with Dirichlet ends.
SymTridiag assemble(const UniformGrid& g, const Vector& pot, double shift, bool confine)
{
    const Index m = g.n - 2;
    SymTridiag T{Vector(m), Vector::Constant(m - 1, 1.0 / (g.h * g.h))};
    for (Index i = 0; i < m; ++i) {
        const double t = g[i + 1];
        T.diag[i] = -2.0 / (g.h * g.h) - shift - (confine ? std::exp(2.0 * t) : 0.0) + pot[i + 1];
    }
    return T;
}

Vector embed(const Vector& interior)
{
    Vector full = Vector::Zero(interior.size() + 2);
    full.segment(1, interior.size()) = interior;
    return full;
}

struct Levels {
    UniformGrid fine, coarse;
    std::vector<double> ef, ec, extrapolated;
    std::vector<Vector> vf, vc; // chi on each grid, unit in the trapezoid norm, ends zero
};

// Top m eigenpairs on g and on every other node of g.
template <typename Build>
Levels solve_levels(const UniformGrid& g, int m, double tol, Build&& build, bool coarse_vectors)
{
    Levels L;
    L.fine = g;
    L.coarse = coarsen(g);
    const SymTridiag Tf = build(L.fine), Tc = build(L.coarse);
    const Index nf = Tf.diag.size(), nc = Tc.diag.size();
    if (m < 1 || m > nc)
        throw DomainError("spectrum: invalid number of eigenpairs");
    L.ef = tridiag_eigenvalues(Tf, nf - m, m);
    L.ec = tridiag_eigenvalues(Tc, nc - m, m);
    for (int k = 0; k < m; ++k) {
        if (std::abs(L.ef[k] - L.ec[k]) > tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "spectrum: eigenvalue not grid-converged: " << L.ec[k] << " at h = " << L.coarse.h << ", "
                << L.ef[k] << " at h = " << L.fine.h;
            throw ConvergenceError(msg.str());
        }
        L.extrapolated.push_back((4.0 * L.ef[k] - L.ec[k]) / 3.0);
    }
    auto vectors = [&](const SymTridiag& T, const std::vector<double>& ev, const UniformGrid& grid) {
        std::vector<Vector> out, interior;
        for (int k = 0; k < m; ++k) {
            std::vector<Vector> near;
            for (int j = 0; j < k; ++j)
                if (std::abs(ev[j] - ev[k]) < 1e-6 * (1.0 + std::abs(ev[k])))
                    near.push_back(interior[j]);
            interior.push_back(tridiag_eigenvector(T, ev[k], near));
            out.push_back(embed(interior.back()) / std::sqrt(grid.h));
        }
        return out;
    };
    L.vf = vectors(Tf, L.ef, L.fine);
    if (coarse_vectors)
        L.vc = vectors(Tc, L.ec, L.coarse);
    return L;
}

UniformGrid odd_grid(double lo, double hi, double h)
{
    UniformGrid g = make_grid(lo, hi, h);
    if (g.n % 2 == 0)
        ++g.n;
    return g;
}

double extremum_location(const RadialSolution& u, const FowlerParams& fp, bool maximum)
{
    const double lo = std::log(u.grid_r[0]) - 5.0;
    const UniformGrid scan = make_grid(lo, std::log(std::max(u.grid_r[u.grid_r.size() - 1], 1.0)), 1e-3);
    const TransformedSolution v = to_fowler(u, fp, scan);
    Index i;
    if (maximum)
        v.values_v.maxCoeff(&i);
    else
        v.values_v.minCoeff(&i);
    return scan[i];
}

FowlerParams params_for(const RadialSolution& u)
{
    return params_of_p(u.p, u.N);
}

Vector nonlinear_potential(const TransformedSolution& v)
{
    const double p = v.params.p;
    return v.values_v.unaryExpr([p](double x) { return p * std::pow(std::abs(x), p - 1.0); });
}

Levels mode_levels(const RadialSolution& u, int level, int m, const SpectrumGrid& spec, bool coarse_vectors)
{
    const FowlerParams fp = params_for(u);
    const double shift = fp.gamma0 + mode_spec(level, u.N).lambda;
    const UniformGrid g = spectrum_grid(u, spec);
    return solve_levels(g, m, spec.tol, [&](const UniformGrid& grid) {
        return assemble(grid, nonlinear_potential(to_fowler(u, fp, grid)), shift, true);
    }, coarse_vectors);
}

// Weighted L2 in the e^{-beta t} measure for psi-type functions.
double wdot(const Vector& a, const Vector& b, const FowlerParams& fp, const UniformGrid& g)
{
    return weighted_l2(a, b, fp, g);
}

} // namespace

UniformGrid spectrum_grid(const RadialSolution& u, const SpectrumGrid& spec)
{
    if (!u.tail.attached)
        throw DomainError("spectrum: profile needs an attached tail (decaying solution)");
    const double tl = extremum_location(u, params_for(u), u.values_u[0] > 0.0);
    return odd_grid(tl - spec.left_margin, spec.right, spec.h);
}

SpectrumReport mode_eigens(const RadialSolution& u, int level, int m, const SpectrumGrid& spec)
{
    const FowlerParams fp = params_for(u);
    const Levels L = mode_levels(u, level, m, spec, false);
    SpectrumReport rep;
    rep.mode = mode_spec(level, u.N);
    rep.N = u.N;
    rep.p = u.p;
    rep.eps = fp.eps;
    rep.grid = L.fine;
    rep.eigenvalues = L.extrapolated;
    rep.fine = L.ef;
    rep.coarse = L.ec;
    for (const Vector& chi : L.vf) {
        const Vector psi = chi.cwiseProduct(sample(L.fine, [&](double t) { return std::exp(0.5 * fp.beta * t); }));
        rep.eigenvectors.push_back(psi / std::sqrt(wdot(psi, psi, fp, L.fine)));
    }
    return rep;
}

double nu(const RadialSolution& u, int l, const SpectrumGrid& spec)
{
    if (l < 1)
        throw DomainError("nu: l must be at least 1");
    const SpectrumReport rep = mode_eigens(u, 0, l, spec);
    return -rep.eigenvalues[0];
}

double hardy_ratio(const RadialSolution& u, const SpectrumGrid& spec)
{
    const FowlerParams fp = params_for(u);
    const UniformGrid g = spectrum_grid(u, spec);
    const SymTridiag T = assemble(g, Vector::Zero(g.n), fp.gamma0, true);
    const Index n = T.diag.size();
    return -tridiag_eigenvalues(T, n - 1, 1)[0] / fp.gamma0;
}

ScanResult small_eigen_scan(const std::vector<double>& eps_list, int N, const SpectrumGrid& spec,
                            const SolverConfig& cfg)
{
    if (eps_list.size() < 3)
        throw DomainError("small_eigen_scan: need at least three values of eps");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw DomainError("small_eigen_scan: eps values must decrease");
    ScanResult out;
    out.N = N;
    for (double eps : eps_list) {
        const FowlerParams fp = params_of(eps, N);
        const RadialSolution u = find_nodal(1, N, fp.p, cfg);
        const SpectrumReport rep = mode_eigens(u, 0, 8, spec);
        ScanEntry e;
        e.eps = eps;
        e.beta = fp.beta;
        e.alpha0 = u.alpha0;
        std::vector<int> order(rep.eigenvalues.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(rep.eigenvalues[a]) < std::abs(rep.eigenvalues[b]);
        });
        for (double mu : rep.eigenvalues)
            e.small_count += std::abs(mu) < 10.0 * eps;
        e.small = {rep.eigenvalues[order[0]], rep.eigenvalues[order[1]]};
        e.third_abs = std::abs(rep.eigenvalues[order[2]]);

        const ReductionConstants rc = constants_ab(N, eps);
        const ReducedEnergyReport cp = critical_point(fp, rc);
        e.xi = cp.hessian_eigs;
        for (int j = 0; j < 2; ++j)
            e.ratios[j] = (e.small[j] / eps) / (-e.xi[j]);

        const TransformedSolution v = to_fowler(u, fp, rep.grid);
        Index imax, imin;
        v.values_v.maxCoeff(&imax);
        v.values_v.minCoeff(&imin);
        AnsatzParams ap;
        ap.t1 = rep.grid[imax];
        ap.t2 = rep.grid[imin];
        ap.params = fp;
        const Vector d1 = ansatz_dtj(1, ap, rep.grid), d2 = ansatz_dtj(2, ap, rep.grid);
        Eigen::Matrix2d G;
        G << wdot(d1, d1, fp, rep.grid), wdot(d1, d2, fp, rep.grid), wdot(d2, d1, fp, rep.grid),
            wdot(d2, d2, fp, rep.grid);
        for (int j = 0; j < 2; ++j) {
            const Vector& psi = rep.eigenvectors[order[j]];
            const Point2 b(wdot(d1, psi, fp, rep.grid), wdot(d2, psi, fp, rep.grid));
            e.alignment[j] = std::sqrt(std::max(0.0, b.dot(G.ldlt().solve(b)))); // psi has unit norm
        }
        out.entries.push_back(e);
    }
    out.c0_estimate = out.entries.back().ratios.mean();
    return out;
}

KernelCheck kernel_mode1_check(const RadialSolution& u, const SpectrumGrid& spec)
{
    const FowlerParams fp = params_for(u);
    const Levels L = mode_levels(u, 1, 4, spec, true);
    int k = 0;
    for (int j = 1; j < 4; ++j)
        if (std::abs(L.extrapolated[j]) < std::abs(L.extrapolated[k]))
            k = j;
    KernelCheck out;
    out.eigenvalue = L.extrapolated[k];

    const double a = fp.alpha_exp;
    auto psi_u = [&](double t) { return std::exp(a * t) * eval_du(u, std::exp(t)); };
    auto dpsi_u = [&](double t) {
        const double r = std::exp(t), uu = eval_u(u, r), du = eval_du(u, r);
        const double ddu = -(u.N - 1) / r * du + uu - std::pow(std::abs(uu), u.p - 1.0) * uu;
        return a * psi_u(t) + std::exp((a + 1.0) * t) * ddu;
    };
    const UniformGrid& gc = L.coarse;
    const Vector pu = sample(gc, psi_u), dpu = sample(gc, dpsi_u);
    Index ref;
    pu.cwiseAbs().maxCoeff(&ref);
    const Vector half = sample(gc, [&](double t) { return std::exp(0.5 * fp.beta * t); });

    // Richardson combination of the fine and coarse eigenvectors at the coarse nodes.
    Vector vf_c(gc.n);
    for (Index i = 0; i < gc.n; ++i)
        vf_c[i] = L.vf[k][2 * i];
    Vector ef = vf_c.cwiseProduct(half), ec = L.vc[k].cwiseProduct(half);
    ef /= ef[ref];
    ec /= ec[ref];
    const Vector pe = (4.0 * ef - ec) / 3.0;
    const Vector dpe = derivative4(pe, gc.h);
    const Vector un = pu / pu[ref], dun = dpu / pu[ref];
    double wdev = 0.0;
    for (Index i = 0; i < gc.n; ++i)
        wdev = std::max(wdev, std::abs((dpe[i] * un[i] - pe[i] * dun[i]) * std::exp(-fp.beta * gc[i])));
    out.wronskian_dev = wdev;
    out.cosine = std::abs(wdot(pe, un, fp, gc)) / std::sqrt(wdot(pe, pe, fp, gc) * wdot(un, un, fp, gc));

    // Discrete mode-1 operator on chi_u = e^{-beta t/2} psi_u at both levels.
    const double shift = fp.gamma0 + mode_spec(1, u.N).lambda;
    auto apply = [&](const UniformGrid& g) {
        const Vector chi = sample(g, [&](double t) { return std::exp(-0.5 * fp.beta * t) * psi_u(t); });
        const Vector pot = nonlinear_potential(to_fowler(u, fp, g));
        Vector r = Vector::Zero(g.n);
        const double h2 = g.h * g.h;
        for (Index i = 1; i + 1 < g.n; ++i)
            r[i] = (chi[i + 1] - 2.0 * chi[i] + chi[i - 1]) / h2 - (shift + std::exp(2.0 * g[i])) * chi[i] +
                   pot[i] * chi[i];
        return std::make_pair(r, chi);
    };
    const auto [rf, chif] = apply(L.fine);
    const auto [rc, chic] = apply(gc);
    Vector comb(gc.n);
    for (Index i = 0; i < gc.n; ++i)
        comb[i] = (4.0 * rf[2 * i] - rc[i]) / 3.0;
    out.op_residual = std::sqrt(trapezoid(comb.cwiseAbs2(), gc) / trapezoid(chic.cwiseAbs2(), gc));
    return out;
}

LimitSpectrum limit_spectrum(int N, int m, double half_width, double h, double tol)
{
    if (m < 3)
        throw DomainError("limit_spectrum: m must be at least 3");
    if (N < 3)
        throw DomainError("limit_spectrum: N must be at least 3");
    const double p0 = (N + 2.0) / (N - 2.0);
    const ProfileConstants c = profile_constants(p0, N);
    const UniformGrid g = odd_grid(-half_width, half_width, h);
    const Levels L = solve_levels(g, m, tol, [&](const UniformGrid& grid) {
        const Vector pot = sample(grid, [&](double t) { return p0 * std::pow(eval_w(t, c), p0 - 1.0); });
        return assemble(grid, pot, c.gamma0, false);
    }, false);
    LimitSpectrum out;
    out.grid = L.fine;
    out.eigenvalues = L.extrapolated;
    out.eigenvectors = L.vf;
    return out;
}

} // namespace nodalkit
