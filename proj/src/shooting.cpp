#include "nodalkit/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace nodalkit {

std::string tag_name(Tag tag)
{
    switch (tag) {
    case Tag::BlowUpPositive: return "BlowUpPositive";
    case Tag::BlowUpNegative: return "BlowUpNegative";
    case Tag::Decay: return "Decay";
    default: return "Indeterminate";
    }
}

Tag tag_from_name(const std::string& name)
{
    if (name == "BlowUpPositive") return Tag::BlowUpPositive;
    if (name == "BlowUpNegative") return Tag::BlowUpNegative;
    if (name == "Decay") return Tag::Decay;
    if (name == "Indeterminate") return Tag::Indeterminate;
    throw DomainError("unknown classification tag: " + name);
}

double start_radius(double alpha0, double p, const SolverConfig& cfg)
{
    return cfg.start_scale * std::min(1.0, std::pow(alpha0, -0.5 * (p - 1.0)));
}

namespace {

// Terminal test shared by integrate and classify. The energy
// u'^2/2 - u^2/2 + |u|^{p+1}/(p+1) does not increase along trajectories, and
// once negative the orbit is confined to the well on the side of its current sign.
template <typename Scalar>
bool terminal_state(Scalar u, Scalar du, bool moved, int crossings, double p, const SolverConfig& cfg,
                    Classification& out)
{
    const Scalar energy = du * du / 2 - u * u / 2 + std::pow(std::abs(u), Scalar(p) + 1) / (Scalar(p) + 1);
    if (moved && energy < 0) {
        out = {u > 0 ? Tag::BlowUpPositive : Tag::BlowUpNegative, crossings};
        return true;
    }
    if (cfg.detect_decay && u != 0 && std::abs(u) < Scalar(cfg.decay_tol) && u * du < 0 &&
        std::abs(du / u + 1) < Scalar(cfg.decay_slope_tol)) {
        out = {Tag::Decay, crossings};
        return true;
    }
    return false;
}

template <typename Scalar>
struct Rhs {
    int N;
    Scalar p;
    Scalar second(Scalar r, Scalar u, Scalar du) const
    {
        return u - std::pow(std::abs(u), p - 1) * u - Scalar(N - 1) * du / r;
    }
};

template <typename Scalar>
Scalar hermite_value(Scalar s, Scalar H, Scalar f0, Scalar d0, Scalar s0, Scalar f1, Scalar d1, Scalar s1)
{
    const Scalar c0 = f0, c1 = H * d0, c2 = H * H * s0 / 2;
    const Scalar a = f1 - (c0 + c1 + c2);
    const Scalar b = H * d1 - (c1 + 2 * c2);
    const Scalar d = H * H * s1 - 2 * c2;
    const Scalar c3 = 10 * a - 4 * b + d / 2;
    const Scalar c4 = -15 * a + 7 * b - d;
    const Scalar c5 = 6 * a - 3 * b + d / 2;
    return c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
}

template <typename Scalar>
Trajectory integrate_impl(double alpha0, int N, double p, const SolverConfig& cfg)
{
    static const Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
    static const Scalar a21 = Scalar(1) / 5;
    static const Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
    static const Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
    static const Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                        a54 = Scalar(-212) / 729;
    static const Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                        a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
    static const Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                        b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
    static const Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                        e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

    const Rhs<Scalar> f{N, Scalar(p)};
    const Scalar a = alpha0;
    const Scalar P = p;
    const Scalar fa = a - std::pow(a, P);
    const Scalar a2 = fa / Scalar(2 * N);
    const Scalar a4 = (1 - P * std::pow(a, P - 1)) * a2 / Scalar(4 * (N + 2));

    Scalar r = start_radius(alpha0, p, cfg);
    Scalar u = a + a2 * r * r + a4 * r * r * r * r;
    Scalar du = 2 * a2 * r + 4 * a4 * r * r * r;
    Scalar ddu = f.second(r, u, du);

    std::vector<double> rs{double(r)}, us{double(u)}, dus{double(du)};
    Trajectory out;
    out.alpha0 = alpha0;
    out.N = N;
    out.p = p;
    bool moved = du != 0;
    int crossings = 0;
    Scalar h = r / 10;
    const Scalar rmax = cfg.r_max;
    Classification cls{Tag::Indeterminate, 0};
    bool done = false;

    while (!done) {
        if (r >= rmax) {
            cls = {Tag::Indeterminate, crossings};
            out.diagnostics = "reached r_max without a terminal event";
            break;
        }
        h = std::min(h, rmax - r);
        if (h < Scalar(1e-15) * r) {
            cls = {Tag::Indeterminate, crossings};
            out.diagnostics = "step size underflow at r = " + std::to_string(double(r));
            break;
        }
        const Scalar k1u = du, k1d = ddu;
        Scalar yu = u + h * a21 * k1u, yd = du + h * a21 * k1d;
        const Scalar k2u = yd, k2d = f.second(r + c2 * h, yu, yd);
        yu = u + h * (a31 * k1u + a32 * k2u);
        yd = du + h * (a31 * k1d + a32 * k2d);
        const Scalar k3u = yd, k3d = f.second(r + c3 * h, yu, yd);
        yu = u + h * (a41 * k1u + a42 * k2u + a43 * k3u);
        yd = du + h * (a41 * k1d + a42 * k2d + a43 * k3d);
        const Scalar k4u = yd, k4d = f.second(r + c4 * h, yu, yd);
        yu = u + h * (a51 * k1u + a52 * k2u + a53 * k3u + a54 * k4u);
        yd = du + h * (a51 * k1d + a52 * k2d + a53 * k3d + a54 * k4d);
        const Scalar k5u = yd, k5d = f.second(r + c5 * h, yu, yd);
        yu = u + h * (a61 * k1u + a62 * k2u + a63 * k3u + a64 * k4u + a65 * k5u);
        yd = du + h * (a61 * k1d + a62 * k2d + a63 * k3d + a64 * k4d + a65 * k5d);
        const Scalar k6u = yd, k6d = f.second(r + h, yu, yd);
        const Scalar un = u + h * (b1 * k1u + b3 * k3u + b4 * k4u + b5 * k5u + b6 * k6u);
        const Scalar dun = du + h * (b1 * k1d + b3 * k3d + b4 * k4d + b5 * k5d + b6 * k6d);
        const Scalar rn = r + h;
        const Scalar k7u = dun, k7d = f.second(rn, un, dun);
        const Scalar eu = h * (e1 * k1u + e3 * k3u + e4 * k4u + e5 * k5u + e6 * k6u + e7 * k7u);
        const Scalar ed = h * (e1 * k1d + e3 * k3d + e4 * k4d + e5 * k5d + e6 * k6d + e7 * k7d);
        const Scalar su = Scalar(cfg.atol) + Scalar(cfg.rtol) * std::max(std::abs(u), std::abs(un));
        const Scalar sd = Scalar(cfg.atol) + Scalar(cfg.rtol) * std::max(std::abs(du), std::abs(dun));
        const Scalar err = std::max(std::abs(eu) / su, std::abs(ed) / sd);

        if (err <= 1) {
            if ((u > 0 && un < 0) || (u < 0 && un > 0)) {
                Scalar lo = 0, hi = 1;
                for (int it = 0; it < 200 && (hi - lo) * h > Scalar(cfg.event_rel) * r; ++it) {
                    const Scalar mid = (lo + hi) / 2;
                    const Scalar val = hermite_value(mid, h, u, du, ddu, un, dun, k7d);
                    if ((val > 0) == (u > 0) && val != 0)
                        lo = mid;
                    else
                        hi = mid;
                }
                out.crossings.push_back(double(r + h * (lo + hi) / 2));
                ++crossings;
            }
            r = rn;
            u = un;
            du = dun;
            ddu = k7d;
            rs.push_back(double(r));
            us.push_back(double(u));
            dus.push_back(double(du));
            if (du != 0)
                moved = true;
            done = terminal_state(u, du, moved, crossings, p, cfg, cls);
        }
        const Scalar fac = err > 0 ? Scalar(0.9) * std::pow(err, Scalar(-0.2)) : Scalar(5);
        h *= std::clamp(fac, Scalar(0.2), Scalar(5));
    }
    out.terminal = cls;
    out.grid_r = Eigen::Map<Vector>(rs.data(), Index(rs.size()));
    out.values_u = Eigen::Map<Vector>(us.data(), Index(us.size()));
    out.values_du = Eigen::Map<Vector>(dus.data(), Index(dus.size()));
    return out;
}

} // namespace

Trajectory integrate(double alpha0, int N, double p, const SolverConfig& cfg)
{
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
        throw DomainError("integrate: alpha0 must be positive");
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
        throw DomainError("integrate: tolerances must be positive");
    if (N < 1 || !(p > 1.0))
        throw DomainError("integrate: need N >= 1 and p > 1");
    if (cfg.extended_precision)
        return integrate_impl<long double>(alpha0, N, p, cfg);
    return integrate_impl<double>(alpha0, N, p, cfg);
}

Classification classify(const Trajectory& traj, const SolverConfig& cfg)
{
    const Index n = traj.values_u.size();
    if (n == 0)
        return {Tag::Indeterminate, 0};
    const bool moved = (traj.values_du.array() != 0.0).any();
    const int crossings = static_cast<int>(traj.crossings.size());
    Classification cls{Tag::Indeterminate, crossings};
    terminal_state(traj.values_u[n - 1], traj.values_du[n - 1], moved, crossings, traj.p, cfg, cls);
    return cls;
}

namespace {

// Classification with the tie-break: an Indeterminate outcome is re-run once at
// ten times tighter tolerances.
Classification shoot(double alpha0, int N, double p, const SolverConfig& cfg)
{
    Classification c = integrate(alpha0, N, p, cfg).terminal;
    if (c.tag == Tag::Indeterminate) {
        SolverConfig tight = cfg;
        tight.rtol *= 0.1;
        tight.atol *= 0.1;
        c = integrate(alpha0, N, p, tight).terminal;
    }
    return c;
}

// Bisection for the boundary between samples with at most k crossings (lo)
// and at least k+1 (hi); decay detection is off so every sample picks a side.
std::pair<double, double> bisect_boundary(double lo, double hi, int k, int N, double p, const SolverConfig& cfg)
{
    SolverConfig c = cfg;
    c.detect_decay = false;
    for (int it = 0; it < cfg.bisect_max && hi - lo > cfg.bisect_rel * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const Classification m = shoot(mid, N, p, c);
        if (m.crossings <= k)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

RadialSolution to_radial(const Trajectory& t)
{
    RadialSolution s;
    s.grid_r = t.grid_r;
    s.values_u = t.values_u;
    s.values_du = t.values_du;
    s.alpha0 = t.alpha0;
    s.nodes = t.crossings;
    s.N = t.N;
    s.p = t.p;
    s.taylor_start = true;
    return s;
}

} // namespace

namespace {

// Decaying trajectory with k crossings at the bracket midpoint or either end,
// retried in long double before giving up.
std::optional<Trajectory> confirm_decay(double blo, double bhi, int k, int N, double p, const SolverConfig& cfg)
{
    const double candidates[3] = {0.5 * (blo + bhi), blo, bhi};
    for (double a : candidates) {
        for (int attempt = 0; attempt < 2; ++attempt) {
            SolverConfig c = cfg;
            c.detect_decay = true;
            c.extended_precision = attempt == 1 || cfg.extended_precision;
            Trajectory t = integrate(a, N, p, c);
            if (t.terminal.tag == Tag::Decay && t.terminal.crossings == k)
                return t;
        }
    }
    return std::nullopt;
}

} // namespace

RadialSolution find_nodal(int k, int N, double p, const SolverConfig& cfg)
{
    if (k < 0)
        throw DomainError("find_nodal: k must be non-negative");
    if (N > 2 && !(p < (N + 2.0) / (N - 2.0)))
        throw DomainError("find_nodal: p must be subcritical");
    // below this height the energy starts negative and the orbit never leaves the positive well
    double lo = std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
    double hi = lo;
    for (;;) {
        hi *= cfg.bracket_factor;
        if (hi > cfg.alpha_max)
            throw ConvergenceError("find_nodal: no bracket for k = " + std::to_string(k) + " below alpha_max");
        const Classification c = shoot(hi, N, p, cfg);
        if (c.crossings > k)
            break;
        lo = hi;
    }
    const auto [blo, bhi] = bisect_boundary(lo, hi, k, N, p, cfg);
    if (auto t = confirm_decay(blo, bhi, k, N, p, cfg))
        return attach_tail(to_radial(*t), cfg);
    throw ConvergenceError("find_nodal: tail test never passed; bracket [" + std::to_string(blo) + ", " +
                           std::to_string(bhi) + "]");
}

RadialSolution attach_tail(const RadialSolution& sol, const SolverConfig&)
{
    const Index n = sol.grid_r.size();
    if (n < 2 || sol.values_u.cwiseAbs().maxCoeff() == 0.0)
        throw DomainError("attach_tail: no decay window in a vanishing profile");
    const double rd = sol.grid_r[n - 1];
    const double last_node = sol.nodes.empty() ? 0.0 : sol.nodes.back();
    const double a = std::max(last_node + 1.0, rd - 4.0);
    const double b = rd - 1.0;
    if (!(b > a))
        throw DomainError("attach_tail: decay window is empty");
    RadialSolution out = sol;
    out.tail = Tail{};
    const int m = 64;
    std::vector<double> uu(m), ff(m);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
        const double r = a + (b - a) * i / (m - 1);
        uu[i] = eval_u(sol, r);
        ff[i] = far_field(r, sol.N);
        num += uu[i] * ff[i];
        den += ff[i] * ff[i];
    }
    const double c = num / den;
    double mismatch = 0.0;
    for (int i = 0; i < m; ++i)
        mismatch = std::max(mismatch, std::abs(uu[i] - c * ff[i]) / std::abs(c * ff[i]));
    if (!(mismatch < 1e-4))
        throw ConvergenceError("attach_tail: far-field fit mismatch " + std::to_string(mismatch));
    out.tail.attached = true;
    out.tail.c = c;
    out.tail.r_match = b;
    return out;
}

std::vector<SweepInterval> sweep(double alpha_lo, double alpha_hi, int samples, int N, double p,
                                 const SolverConfig& cfg)
{
    if (samples < 2)
        throw DomainError("sweep: need at least two samples");
    if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo))
        throw DomainError("sweep: need 0 < alpha_lo < alpha_hi");
    std::vector<double> alphas(samples);
    const double la = std::log(alpha_lo), lb = std::log(alpha_hi);
    for (int i = 0; i < samples; ++i)
        alphas[i] = std::exp(la + (lb - la) * i / (samples - 1));
    alphas.front() = alpha_lo;
    alphas.back() = alpha_hi;

    SolverConfig sample_cfg = cfg;
    sample_cfg.detect_decay = false;
    std::vector<Classification> cls(samples);
    std::atomic<int> next{0};
    int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, samples);
    auto work = [&]() {
        for (int i = next++; i < samples; i = next++)
            cls[i] = shoot(alphas[i], N, p, sample_cfg);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    std::vector<std::pair<int, int>> runs; // [first, last] sample index
    for (int i = 0; i < samples; ++i) {
        if (runs.empty() || !(cls[i] == cls[runs.back().first]))
            runs.push_back({i, i});
        else
            runs.back().second = i;
    }
    std::vector<SweepInterval> out;
    double left = alpha_lo;
    for (std::size_t j = 0; j < runs.size(); ++j) {
        const Classification c = cls[runs[j].first];
        if (j + 1 == runs.size()) {
            out.push_back({left, alpha_hi, c});
            break;
        }
        const Classification d = cls[runs[j + 1].first];
        const double a = alphas[runs[j].second], b = alphas[runs[j + 1].first];
        const bool adjacent = c.tag != Tag::Indeterminate && d.tag != Tag::Indeterminate && d.crossings == c.crossings + 1;
        if (!adjacent) {
            const double mid = 0.5 * (a + b);
            out.push_back({left, mid, c});
            left = mid;
            continue;
        }
        const auto [blo, bhi] = bisect_boundary(a, b, c.crossings, N, p, cfg);
        out.push_back({left, blo, c});
        if (const auto t = confirm_decay(blo, bhi, c.crossings, N, p, cfg))
            out.push_back({t->alpha0, t->alpha0, t->terminal});
        left = bhi;
    }
    return out;
}

} // namespace nodalkit
