#include "nodalkit/cli.hpp"

#include "nodalkit/acceptance.hpp"
#include "nodalkit/cache.hpp"
#include "nodalkit/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

namespace nodalkit {

namespace {

struct Problem {
    int N = 3;
    std::optional<double> eps;
    std::optional<double> p;

    // Exponent offset; exactly one of eps and p is given.
    FowlerParams params() const
    {
        if (eps.has_value() == p.has_value())
            throw DomainError("give exactly one of --eps and --p");
        return eps ? params_of(*eps, N) : params_of_p(*p, N);
    }
};

void add_problem(CLI::App* cmd, Problem& pr)
{
    cmd->add_option("--dim", pr.N, "space dimension N")->check(CLI::Range(3, 64));
    auto* e = cmd->add_option("--eps", pr.eps, "offset below the critical exponent");
    auto* p = cmd->add_option("--p", pr.p, "exponent, instead of --eps");
    e->excludes(p);
}

void add_solver(CLI::App* cmd, SolverConfig& cfg)
{
    cmd->add_option("--rtol", cfg.rtol, "integrator relative tolerance");
    cmd->add_option("--atol", cfg.atol, "integrator absolute tolerance");
    cmd->add_option("--r-max", cfg.r_max, "truncation radius");
    cmd->add_option("--workers", cfg.workers, "worker threads (0: all cores)");
    cmd->add_flag("--extended", cfg.extended_precision, "integrate in long double");
}

void check_solver(const SolverConfig& cfg)
{
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0) || !(cfg.r_max > 0.0))
        throw DomainError("tolerances and --r-max must be positive");
    if (cfg.workers < 0)
        throw DomainError("--workers must be non-negative");
}

// Writes text to the named file, or to out when the name is empty or "-".
void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os)
        throw std::runtime_error("cannot write " + path);
}

// Sup of the Fowler-variable residual of u on a uniform grid in t = log r.
Json residual_summary(const RadialSolution& u)
{
    const FowlerParams fp = params_of_p(u.p, u.N);
    const double hi = std::log(std::min(u.grid_r[u.grid_r.size() - 1], u.tail.attached ? u.tail.r_match : INFINITY));
    const UniformGrid g = make_grid(std::log(u.grid_r[0]), hi, 1e-3);
    const TransformedSolution v = to_fowler(u, fp, g);
    const Vector s = residual_S(v, 4);
    const double sup = s.segment(2, s.size() - 4).cwiseAbs().maxCoeff();
    Json j;
    j["fowler_residual_sup"] = sup;
    j["fowler_residual_rel"] = sup / v.values_v.cwiseAbs().maxCoeff();
    j["u_end"] = u.values_u[u.values_u.size() - 1];
    j["energy"] = radial_energy(u);
    return j;
}

std::vector<int> parse_suite(const std::string& suite)
{
    if (suite == "all")
        return {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> ids;
    std::stringstream ss(suite);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int id = 0;
        try {
            id = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || id < 1 || id > 10)
            throw DomainError("--suite takes 'all' or a comma list of criteria 1-10, got '" + suite + "'");
        ids.push_back(id);
    }
    if (ids.empty())
        throw DomainError("--suite is empty");
    return ids;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sign-changing radial solutions near the critical exponent", "nodalkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", "nodalkit 0.1.0");

    Problem pr;
    SolverConfig cfg;
    std::string out_path;
    std::string cache_dir;

    auto* solve = app.add_subcommand("solve", "nodal radial solution with k nodes as JSON");
    int k = 1;
    bool no_cache = false;
    add_problem(solve, pr);
    add_solver(solve, cfg);
    solve->add_option("--nodes", k, "number of nodes k")->check(CLI::Range(0, 8));
    solve->add_option("--out", out_path, "output file (default stdout)");
    solve->add_option("--cache-dir", cache_dir, "cache directory (default $NODALKIT_CACHE or ./.nodalkit-cache)");
    solve->add_flag("--no-cache", no_cache, "bypass the profile cache");

    auto* sw = app.add_subcommand("sweep", "classify shooting parameters; CSV alpha_lo,alpha_hi,tag,crossings");
    double alpha_lo = 1.05, alpha_hi = 1e3;
    int samples = 200;
    add_problem(sw, pr);
    add_solver(sw, cfg);
    sw->add_option("--alpha-lo", alpha_lo, "smallest u(0)");
    sw->add_option("--alpha-hi", alpha_hi, "largest u(0)");
    sw->add_option("--samples", samples, "log-spaced samples")->check(CLI::Range(2, 1000000));
    sw->add_option("--out", out_path, "output file (default stdout)");

    auto* reduce = app.add_subcommand("reduce", "critical point of the reduced energy as JSON");
    ReductionGrid rgrid;
    bool skip_numeric = false;
    add_problem(reduce, pr);
    reduce->add_option("--step", rgrid.h, "grid step of the projected problem");
    reduce->add_option("--margin", rgrid.margin, "grid extent left of the first bump");
    reduce->add_option("--right", rgrid.right, "right end of the grid");
    reduce->add_flag("--skip-numeric", skip_numeric, "omit the numerical reduced energy");
    reduce->add_option("--out", out_path, "output file (default stdout)");

    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of one mode of the linearized operator as JSON");
    SpectrumGrid sgrid;
    int level = 0, count = 4;
    bool vectors = false;
    std::vector<double> scan;
    add_problem(spec_cmd, pr);
    add_solver(spec_cmd, cfg);
    spec_cmd->add_option("--nodes", k, "number of nodes k")->check(CLI::Range(0, 8));
    spec_cmd->add_option("--level", level, "spherical-harmonic level")->check(CLI::Range(0, 1000));
    spec_cmd->add_option("--count", count, "number of top eigenvalues")->check(CLI::Range(1, 1000));
    spec_cmd->add_option("--step", sgrid.h, "fine grid step");
    spec_cmd->add_option("--tol", sgrid.tol, "allowed shift between the h and 2h eigenvalues");
    spec_cmd->add_flag("--vectors", vectors, "include eigenvectors");
    spec_cmd->add_option("--scan", scan, "eps list for the small-eigenvalue scan (k = 1, mode 0)")->delimiter(',');
    spec_cmd->add_option("--out", out_path, "output file (default stdout)");
    spec_cmd->add_option("--cache-dir", cache_dir, "cache directory");

    auto* consts = app.add_subcommand("constants", "profile integrals and limit constants a0, b0 as JSON");
    add_problem(consts, pr);
    consts->add_option("--out", out_path, "output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "run acceptance criteria and print a pass/fail table");
    std::string suite = "all";
    bool details = false;
    int verify_dim = 3;
    verify->add_option("--suite", suite, "'all' (criteria 1-9) or a comma list such as 2,5,10");
    verify->add_option("--dim", verify_dim, "space dimension; the suite is defined for N = 3");
    verify->add_flag("--details", details, "print every individual check");
    add_solver(verify, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        check_solver(cfg);
        if (*solve) {
            const FowlerParams fp = pr.params();
            const RadialSolution u = no_cache ? find_nodal(k, pr.N, fp.p, cfg)
                                              : solve_cached(k, pr.N, fp.p, cfg,
                                                             cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir));
            Json body = to_json(u);
            body["k"] = k;
            body["eps"] = fp.eps;
            body["residual"] = residual_summary(u);
            emit(dump(document("solve", body)), out_path, out);
        } else if (*sw) {
            const FowlerParams fp = pr.params();
            if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo))
                throw DomainError("need 0 < --alpha-lo < --alpha-hi");
            std::ostringstream os;
            write_sweep_csv(os, sweep(alpha_lo, alpha_hi, samples, pr.N, fp.p, cfg));
            emit(os.str(), out_path, out);
        } else if (*reduce) {
            const FowlerParams fp = pr.params();
            const ReductionConstants rc = constants_ab(pr.N, fp.eps);
            ReducedEnergyReport rep = critical_point(fp, rc);
            if (!skip_numeric)
                attach_numeric(rep, fp, rc, rgrid);
            emit(dump(document("reduce", to_json(rep))), out_path, out);
        } else if (*spec_cmd) {
            if (!scan.empty()) {
                emit(dump(document("spectrum", to_json(small_eigen_scan(scan, pr.N, sgrid, cfg)))), out_path, out);
            } else {
                const FowlerParams fp = pr.params();
                const RadialSolution u =
                    solve_cached(k, pr.N, fp.p, cfg, cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir));
                emit(dump(document("spectrum", to_json(mode_eigens(u, level, count, sgrid), vectors))), out_path,
                     out);
            }
        } else if (*consts) {
            const double eps = pr.eps || pr.p ? pr.params().eps : 0.0;
            emit(dump(document("constants", to_json(constants_ab(pr.N, eps)))), out_path, out);
        } else if (*verify) {
            if (verify_dim != 3)
                throw DomainError("the acceptance suite is defined for --dim 3 only");
            AcceptanceOptions opt;
            opt.solver = cfg;
            bool all = true;
            for (int id : parse_suite(suite)) {
                const CriterionResult r = run_criterion(id, opt);
                out << summary_line(r) << '\n';
                if (details || !r.passed)
                    for (const std::string& line : r.details)
                        out << line << '\n';
                out.flush();
                all = all && r.passed;
            }
            return all ? 0 : 1;
        }
    } catch (const DomainError& e) {
        err << "nodalkit: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "nodalkit: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace nodalkit
