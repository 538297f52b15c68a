#include "nodalkit/acceptance.hpp"

#include "nodalkit/cache.hpp"
#include "nodalkit/cli.hpp"
#include "nodalkit/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <fstream>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace nodalkit {

namespace {

const std::vector<double> kEpsSweep = {0.08, 0.04, 0.02};

class Checks {
public:
    explicit Checks(CriterionResult& r) : r_(r) {}

    void operator()(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)))
    {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        r_.details.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + buf);
        all_ = all_ && ok;
    }

    bool all() const { return all_; }

private:
    CriterionResult& r_;
    bool all_ = true;
};

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1]))
            return false;
    return true;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    char buf[32];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%s%.4g", s.empty() ? "" : ", ", x);
        s += buf;
    }
    return s;
}

double ratio_spread(const std::vector<double>& v)
{
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

// max |f'' - rhs| over the interior of g, f'' by fourth-order differences.
template <typename F, typename R>
double ode_defect(const UniformGrid& g, F&& f, R&& rhs)
{
    const Vector v = sample(g, f);
    const Vector d2 = second_derivative4(v, g.h);
    double worst = 0.0;
    for (Index i = 2; i + 2 < g.n; ++i)
        worst = std::max(worst, std::abs(d2[i] - rhs(g[i], v[i])));
    return worst;
}

void identities(Checks& check)
{
    const std::pair<int, double> cases[4] = {{3, 5.0}, {4, 3.0}, {5, 2.2}, {3, 4.9}};
    for (const auto& [N, p] : cases) {
        const ProfileConstants c = profile_constants(p, N);
        const auto [r1, r2] = pohozaev_check(c);
        check(r1 < 1e-8 && r2 < 1e-8, "Pohozaev identities (N=%d, p=%g): %.2e, %.2e < 1e-8", N, p, r1, r2);
        const UniformGrid g = make_grid(-20.0, 20.0, 1e-3);
        const double scale = eval_w(0.0, c);
        const double d = ode_defect(g, [&](double t) { return eval_w(t, c); },
                                    [&](double, double w) { return c.gamma0 * w - std::pow(w, c.p); }) / scale;
        check(d < 1e-8, "profile ODE defect (N=%d, p=%g): %.2e < 1e-8", N, p, d);
    }
    for (int N = 3; N <= 6; ++N) {
        const double g0 = 0.25 * (N - 2) * (N - 2);
        const UniformGrid g = make_grid(-10.0, 2.5, 1e-3);
        const double d = ode_defect(g, [&](double s) { return correction_profile(s, N); }, [&](double s, double f) {
            return (g0 + std::exp(2.0 * s)) * f + std::exp(-0.5 * (N - 6) * s);
        });
        check(d < 1e-6, "correction profile ODE defect (N=%d): %.2e < 1e-6", N, d);
    }
}

void interaction_asymptotics(Checks& check)
{
    const FowlerParams fp = params_of(0.0, 3);
    const InteractionResult a = interaction(fp.p, 1.0, 0.0, 14.0, fp);
    const InteractionResult b = interaction(fp.p, 1.0, 0.0, 28.0, fp);
    const double ea = std::abs(a.lhs / a.rhs_prediction - 1.0), eb = std::abs(b.lhs / b.rhs_prediction - 1.0);
    check(ea < 0.02, "separation 14: |lhs/rhs - 1| = %.3e < 0.02", ea);
    check(eb < ea, "separation 28: |lhs/rhs - 1| = %.3e below the value at 14", eb);
}

void shooting_structure(Checks& check, const SolverConfig& cfg)
{
    const std::pair<int, double> cases[2] = {{3, 4.9}, {5, 7.0 / 3.0 - 0.05}};
    for (const auto& [N, p] : cases) {
        const RadialSolution u1 = find_nodal(1, N, p, cfg);
        const std::vector<SweepInterval> rows = sweep(1.05, 3.0 * u1.alpha0, 240, N, p, cfg);
        int d0 = 0, d1 = 0;
        for (const SweepInterval& r : rows) {
            d0 += r.cls.tag == Tag::Decay && r.cls.crossings == 0;
            d1 += r.cls.tag == Tag::Decay && r.cls.crossings == 1;
        }
        check(d0 == 1 && d1 == 1, "sweep (N=%d, p=%.6g): decaying thresholds k=0: %d, k=1: %d (want 1 each)", N, p, d0, d1);
        check(u1.nodes.size() == 1 && u1.values_u[0] > 0.0, "k=1 profile (N=%d): %zu node(s), u(0) = %.6g", N,
              u1.nodes.size(), u1.values_u[0]);
    }
    std::vector<double> alpha, node;
    for (double p : {4.9, 4.95, 4.975, 4.99}) {
        const RadialSolution u = find_nodal(1, 3, p, cfg);
        alpha.push_back(u.alpha0);
        node.push_back(u.nodes.front());
    }
    check(std::is_sorted(alpha.begin(), alpha.end()) && std::adjacent_find(alpha.begin(), alpha.end()) == alpha.end(),
          "u(0) increases along p -> 5: %s", join(alpha).c_str());
    check(strictly_decreasing(node), "first node decreases along p -> 5: %s", join(node).c_str());
}

// Locations of the max and min of v for the k = 1 shooting profile.
Point2 extrema(const RadialSolution& u, const FowlerParams& fp)
{
    const UniformGrid g = make_grid(std::log(u.grid_r[0]), std::log(u.grid_r[u.grid_r.size() - 1]), 1e-3);
    const TransformedSolution v = to_fowler(u, fp, g);
    Index imax, imin;
    v.values_v.maxCoeff(&imax);
    v.values_v.minCoeff(&imin);
    return {g[imax], g[imin]};
}

void bump_locations(Checks& check, const SolverConfig& cfg)
{
    std::vector<double> err, gap;
    for (double eps : kEpsSweep) {
        const FowlerParams fp = params_of(eps, 3);
        const ReductionConstants rc = constants_ab(3, eps);
        const ReducedEnergyReport rep = critical_point(fp, rc);
        const double e = std::abs(std::exp(rep.t_star[1]) / fp.beta - rc.a0) / rc.a0;
        err.push_back(e);
        check(e < 0.15, "eps=%g: |e^{t2*}/beta - a0|/a0 = %.4f < 0.15", eps, e);
        const Point2 ext = extrema(find_nodal(1, 3, fp.p, cfg), fp);
        gap.push_back((ext - rep.t_star).cwiseAbs().maxCoeff());
    }
    check(strictly_decreasing(err), "relative error decreases: %s", join(err).c_str());
    check(strictly_decreasing(gap), "gap between shooting extrema and t* decreases: %s", join(gap).c_str());
}

void residual_scaling(Checks& check)
{
    std::vector<double> ratio;
    for (double eps : kEpsSweep) {
        const FowlerParams fp = params_of(eps, 3);
        const Point2 t = predicted_t(fp, constants_ab(3, eps));
        AnsatzParams ap;
        ap.t1 = t[0];
        ap.t2 = t[1];
        ap.params = fp;
        ratio.push_back(residual_norms(ap).ratio);
    }
    check(*std::max_element(ratio.begin(), ratio.end()) <= 1.5 * ratio.front(),
          "sup|S| / bound stays within 1.5x of its eps=0.08 value: %s", join(ratio).c_str());
}

void reduction_consistency(Checks& check)
{
    std::vector<double> dk, dg, phi_ratio;
    for (double eps : kEpsSweep) {
        const FowlerParams fp = params_of(eps, 3);
        const ReductionConstants rc = constants_ab(3, eps);
        ReducedEnergyReport rep = critical_point(fp, rc);
        attach_numeric(rep, fp, rc);
        dk.push_back(rep.discrepancy_K);
        dg.push_back(rep.discrepancy_grad);
        const ProjectedSolve s = solve_projected(rep.t_pred, fp, reduction_grid(rep.t_pred));
        AnsatzParams ap;
        ap.t1 = rep.t_pred[0];
        ap.t2 = rep.t_pred[1];
        ap.params = fp;
        phi_ratio.push_back(s.sup_norm / residual_bound(ap, default_tau(fp)));
        const double od = s.ortho_defects.cwiseAbs().maxCoeff();
        check(od < 1e-10, "eps=%g: orthogonality defects %.2e < 1e-10", eps, od);
        const double shrink = s.updates.back() / s.updates.front();
        check(shrink < 1e-8, "eps=%g: fixed point contracts, last/first update %.1e (%d iterations)", eps, shrink,
              s.iterations);
    }
    check(strictly_decreasing(dk), "|K - K~|/beta decreases: %s", join(dk).c_str());
    check(strictly_decreasing(dg), "|grad K - grad K~|/beta decreases: %s", join(dg).c_str());
    check(ratio_spread(phi_ratio) < 1.5, "sup|phi| / bound uniform (max/min < 1.5): %s", join(phi_ratio).c_str());

    const FowlerParams fp = params_of(kEpsSweep.back(), 3);
    const ReducedEnergyReport rep = critical_point(fp, constants_ab(3, fp.eps));
    const NumericCriticalPoint nc = critical_point_numeric(rep.t_star, fp);
    const double cs = std::abs(nc.solve.c1) + std::abs(nc.solve.c2);
    check(cs < 1e-6 * nc.solve.residual_sup, "eps=%g: |c1| + |c2| = %.2e < 1e-6 sup|S| = %.2e at the K critical point",
          fp.eps, cs, 1e-6 * nc.solve.residual_sup);
    check(nc.grad.norm() < 1e-6 * fp.beta, "eps=%g: |grad K| = %.2e < 1e-6 beta there", fp.eps, nc.grad.norm());
}

void reduced_uniqueness(Checks& check)
{
    std::vector<Point2> xi;
    for (double eps : kEpsSweep) {
        const FowlerParams fp = params_of(eps, 3);
        const ReducedEnergyReport rep = critical_point(fp, constants_ab(3, eps));
        const bool all = std::all_of(rep.multistart.begin(), rep.multistart.end(),
                                     [](const StartResult& s) { return s.converged; });
        check(all && rep.distinct_critical_points == 1, "eps=%g: %zu starts, %d distinct critical point(s)", eps,
              rep.multistart.size(), rep.distinct_critical_points);
        check(rep.hessian_eigs.minCoeff() > 0.0, "eps=%g: scaled Hessian eigenvalues %.4f, %.4f positive", eps,
              rep.hessian_eigs[0], rep.hessian_eigs[1]);
        xi.push_back(rep.hessian_eigs);
    }
    for (std::size_t i = 1; i < xi.size(); ++i) {
        const Point2 drift = ((xi[i] - xi[i - 1]).array() / xi[i - 1].array()).abs();
        check(drift.maxCoeff() < 0.10, "eps %g -> %g: eigenvalue drift %.1f%%, %.1f%% < 10%%", kEpsSweep[i - 1],
              kEpsSweep[i], 100.0 * drift[0], 100.0 * drift[1]);
    }
}

void expansion_and_pairing(Checks& check)
{
    std::vector<double> disc;
    for (double eps : kEpsSweep) {
        const FowlerParams fp = params_of(eps, 3);
        disc.push_back(energy_expansion_check(predicted_t(fp, constants_ab(3, eps)), fp, constants_ab(3, eps)));
    }
    check(strictly_decreasing(disc), "energy expansion discrepancy/beta decreases: %s", join(disc).c_str());
    const FowlerParams fp = params_of(0.02, 3);
    const ReductionConstants rc = constants_ab(3, 0.02);
    const ReducedEnergyReport rep = critical_point(fp, rc);
    const PairingMatrix pm = lbar_pairing(rep.t_star, fp, rc);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double d = std::abs(pm.measured(i, j) - pm.predicted(i, j));
            check(d < 0.2 * fp.beta, "pairing (%d,%d): measured %.5g, predicted %.5g, |diff| = %.2e < 0.2 beta", i + 1,
                  j + 1, pm.measured(i, j), pm.predicted(i, j), d);
        }
    const Eigen::Matrix2d& m = pm.measured;
    check(m(0, 1) > 0.0 && m(0, 0) < 0.0 && m(1, 1) < m(0, 0), "sign pattern: (1,2) > 0, (1,1) < 0, (2,2) < (1,1)");
}

double cosine(const Vector& a, const Vector& b)
{
    return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

void spectrum_checks(Checks& check, const SolverConfig& cfg)
{
    const int N = 3;
    const LimitSpectrum ls = limit_spectrum(N, 4);
    const std::size_t top = ls.eigenvalues.size() - 1;
    const ProfileConstants c0 = profile_constants(5.0, N);
    const Vector principal = sample(ls.grid, [&](double t) { return std::pow(eval_w(t, c0), N / (N - 2.0)); });
    const Vector translation = sample(ls.grid, [&](double t) { return eval_w_prime(t, c0); });
    const double mu1 = ls.eigenvalues[top], mu2 = ls.eigenvalues[top - 1];
    const double cos1 = cosine(ls.eigenvectors[top], principal), cos2 = cosine(ls.eigenvectors[top - 1], translation);
    check(std::abs(mu1 - (N - 1)) < 1e-3 && cos1 > 0.9999, "limit problem: mu1 = %.8f, cosine to w0^{N/(N-2)} %.8f", mu1,
          cos1);
    check(std::abs(mu2) < 1e-3 && cos2 > 0.9999, "limit problem: mu2 = %.2e, cosine to w0' %.8f", mu2, cos2);

    const ScanResult scan = small_eigen_scan(kEpsSweep, N, {}, cfg);
    const ScanEntry& last = scan.entries.back();
    check(last.small_count == 2, "eps=%g: %d eigenvalues with |mu| < 10 eps (want 2)", last.eps, last.small_count);
    check(last.small[0] < 0.0 && last.small[1] < 0.0 && last.xi.minCoeff() > 0.0,
          "small eigenvalues %.5f, %.5f negative with xi %.4f, %.4f positive", last.small[0], last.small[1], last.xi[0],
          last.xi[1]);
    const double spread = std::abs(last.ratios[0] - last.ratios[1]) / last.ratios.cwiseAbs().maxCoeff();
    check(spread < 0.25, "ratios (mu_j/eps)/(-xi_j) = %.4f, %.4f agree within 25%% (%.1f%%)", last.ratios[0],
          last.ratios[1], 100.0 * spread);
    check(last.alignment.minCoeff() > 0.95, "small eigenvectors within cosine %.4f, %.4f of the bump derivatives",
          last.alignment[0], last.alignment[1]);

    for (int k : {1, 0}) {
        const RadialSolution u = find_nodal(k, N, params_of(0.04, N).p, cfg);
        const KernelCheck kc = kernel_mode1_check(u);
        check(std::abs(kc.eigenvalue) < 1e-6 && kc.op_residual < 1e-6 && kc.wronskian_dev < 1e-6 && kc.cosine > 0.9999,
              "mode 1 kernel (k=%d, eps=0.04): mu = %.1e, residual %.1e, Wronskian %.1e, cosine %.8f", k, kc.eigenvalue,
              kc.op_residual, kc.wronskian_dev, kc.cosine);
        if (k == 1) {
            const SpectrumReport high = mode_eigens(u, 2, 4);
            double closest = std::numeric_limits<double>::infinity();
            for (double mu : high.eigenvalues)
                closest = std::min(closest, std::abs(mu));
            check(closest > 1e-3, "mode with lambda = %g: nearest eigenvalue to 0 at distance %.4f > 1e-3",
                  high.mode.lambda, closest);
        }
    }
    std::vector<double> dev;
    for (double p : {4.8, 4.9, 4.95})
        dev.push_back(std::abs(nu(find_nodal(1, N, p, cfg), 1) + (N - 1)));
    check(strictly_decreasing(dev), "|nu1 + (N-1)| decreases along p: %s", join(dev).c_str());
}

std::filesystem::path scratch(const AcceptanceOptions& opt)
{
    if (!opt.scratch_dir.empty())
        return opt.scratch_dir;
    return std::filesystem::temp_directory_path() / ("nodalkit-acceptance-" + std::to_string(::getpid()));
}

int run_cli(const std::vector<std::string>& args, std::string& out)
{
    std::vector<const char*> argv{"nodalkit"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream os, es;
    const int code = run(static_cast<int>(argv.size()), argv.data(), os, es);
    out = os.str();
    return code;
}

void plumbing(Checks& check, const AcceptanceOptions& opt)
{
    const std::filesystem::path dir = scratch(opt) / "cache";
    std::filesystem::remove_all(dir);
    const SolverConfig& cfg = opt.solver;
    const RadialSolution u = find_nodal(1, 3, 4.9, cfg);
    const CacheKey key = cache_key(1, 3, 4.9, cfg);
    cache_store(u, key, dir);
    const RadialSolution back = cache_load(key, dir);
    auto same = [](const Vector& a, const Vector& b) {
        return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
    };
    check(same(u.grid_r, back.grid_r) && same(u.values_u, back.values_u) && same(u.values_du, back.values_du) &&
              u.alpha0 == back.alpha0 && u.nodes == back.nodes && u.tail.c == back.tail.c,
          "cache roundtrip is bit-exact");
    CacheKey other = key;
    other.rtol *= 0.1;
    bool not_found = false;
    try {
        cache_load(other, dir);
    } catch (const NotFoundError&) {
        not_found = true;
    }
    check(not_found, "a different tolerance misses the cache");
    std::vector<int> ok(4, 0);
    std::vector<std::thread> readers;
    for (int i = 0; i < 4; ++i)
        readers.emplace_back([&, i] { ok[i] = same(cache_load(key, dir).values_u, u.values_u); });
    for (auto& t : readers)
        t.join();
    check(std::count(ok.begin(), ok.end(), 1) == 4, "concurrent loads of one key agree");
    {
        std::fstream f(dir / (key.name() + ".json"), std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(-40, std::ios::end);
        const char was = static_cast<char>(f.get());
        f.seekp(-40, std::ios::end);
        f.put(was == '7' ? '3' : '7');
    }
    bool corrupt = false;
    try {
        cache_load(key, dir);
    } catch (const IntegrityError&) {
        corrupt = true;
    }
    check(corrupt, "a corrupted entry raises an integrity error");

    std::string a, b;
    const int ca = run_cli({"reduce", "--dim", "3", "--eps", "0.05"}, a);
    const int cb = run_cli({"reduce", "--dim", "3", "--eps", "0.05"}, b);
    check(ca == 0 && cb == 0 && a == b && !a.empty(), "identical reduce runs give byte-identical reports");
    const std::vector<int> ids = criterion_ids();
    std::string table;
    const int cv = run_cli({"verify", "--suite", "2"}, table);
    check(cv == 0 && table.find("criterion 2 PASS") != std::string::npos && ids.size() == 10,
          "verify aggregates criteria through the CLI (exit %d)", cv);
    std::filesystem::remove_all(scratch(opt));
}

} // namespace

std::vector<int> criterion_ids()
{
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::string criterion_title(int id)
{
    switch (id) {
    case 1: return "identities";
    case 2: return "interaction asymptotics";
    case 3: return "shooting structure";
    case 4: return "bump-location asymptotics";
    case 5: return "residual scaling";
    case 6: return "reduction consistency";
    case 7: return "reduced uniqueness";
    case 8: return "energy expansion and pairing";
    case 9: return "spectrum";
    case 10: return "plumbing";
    default: throw DomainError("unknown criterion " + std::to_string(id));
    }
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt)
{
    CriterionResult r;
    r.id = id;
    r.title = criterion_title(id);
    const auto start = std::chrono::steady_clock::now();
    Checks check(r);
    try {
        switch (id) {
        case 1: identities(check); break;
        case 2: interaction_asymptotics(check); break;
        case 3: shooting_structure(check, opt.solver); break;
        case 4: bump_locations(check, opt.solver); break;
        case 5: residual_scaling(check); break;
        case 6: reduction_consistency(check); break;
        case 7: reduced_uniqueness(check); break;
        case 8: expansion_and_pairing(check); break;
        case 9: spectrum_checks(check, opt.solver); break;
        case 10: plumbing(check, opt); break;
        }
    } catch (const std::exception& e) {
        check(false, "exception: %s", e.what());
    }
    r.passed = check.all();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string summary_line(const CriterionResult& r)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "criterion %d %s %s (%.1fs)", r.id, r.passed ? "PASS" : "FAIL", r.title.c_str(),
                  r.seconds);
    return buf;
}

} // namespace nodalkit
