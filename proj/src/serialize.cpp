#include "nodalkit/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace nodalkit {

namespace {

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

double number_from(const Json& j, double fallback = std::numeric_limits<double>::quiet_NaN())
{
    return j.is_null() ? fallback : j.get<double>();
}

Json point(const Point2& p)
{
    return Json::array({number(p[0]), number(p[1])});
}

Json matrix(const Eigen::Matrix2d& m)
{
    return Json::array({point(m.row(0).transpose()), point(m.row(1).transpose())});
}

Json list(const std::vector<double>& v)
{
    Json out = Json::array();
    for (double x : v)
        out.push_back(number(x));
    return out;
}

Json grid_json(const UniformGrid& g)
{
    return Json{{"t0", g.t0}, {"h", g.h}, {"n", g.n}};
}

} // namespace

Json to_json(const Vector& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(number(v[i]));
    return out;
}

Vector vector_from_json(const Json& j)
{
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Index>(i)] = number_from(j[i]);
    return v;
}

Json to_json(const RadialSolution& u)
{
    Json j;
    j["N"] = u.N;
    j["p"] = u.p;
    j["alpha0"] = u.alpha0;
    j["nodes"] = list(u.nodes);
    j["taylor_start"] = u.taylor_start;
    j["tail"] = Json{{"attached", u.tail.attached}, {"c", number(u.tail.c)}, {"r_match", number(u.tail.r_match)}};
    j["grid_r"] = to_json(u.grid_r);
    j["values_u"] = to_json(u.values_u);
    j["values_du"] = to_json(u.values_du);
    return j;
}

RadialSolution radial_from_json(const Json& j)
{
    try {
        RadialSolution u;
        u.N = j.at("N").get<int>();
        u.p = j.at("p").get<double>();
        u.alpha0 = j.at("alpha0").get<double>();
        for (const Json& x : j.at("nodes"))
            u.nodes.push_back(x.get<double>());
        u.taylor_start = j.at("taylor_start").get<bool>();
        const Json& t = j.at("tail");
        u.tail.attached = t.at("attached").get<bool>();
        u.tail.c = number_from(t.at("c"), 0.0);
        u.tail.r_match = number_from(t.at("r_match"), std::numeric_limits<double>::infinity());
        u.grid_r = vector_from_json(j.at("grid_r"));
        u.values_u = vector_from_json(j.at("values_u"));
        u.values_du = vector_from_json(j.at("values_du"));
        if (u.grid_r.size() != u.values_u.size() || u.grid_r.size() != u.values_du.size())
            throw IntegrityError("radial profile: array lengths differ");
        return u;
    } catch (const nlohmann::json::exception& e) {
        throw IntegrityError(std::string("radial profile: malformed document: ") + e.what());
    }
}

Json to_json(const ReductionConstants& rc)
{
    Json j;
    j["N"] = rc.N;
    j["eps"] = rc.eps;
    j["p"] = rc.p;
    j["a0"] = rc.a0;
    j["b0"] = rc.b0;
    j["integrals"] = Json{{"grad_w_sq", rc.grad_w_sq},
                          {"w_pow_p1", rc.w_pow_p1},
                          {"w_sq", rc.w_sq},
                          {"tail_moment", rc.tail_moment},
                          {"weighted_w_sq", number(rc.weighted_w_sq)},
                          {"A", rc.A}};
    return j;
}

Json to_json(const ReducedEnergyReport& r)
{
    Json j;
    j["N"] = r.N;
    j["eps"] = r.eps;
    j["beta"] = r.beta;
    j["t_pred"] = point(r.t_pred);
    j["t_star"] = point(r.t_star);
    j["K_tilde"] = number(r.K_tilde_value);
    j["K_numeric"] = number(r.K_numeric_value);
    j["hessian_scaled"] = matrix(r.hessian_scaled);
    j["hessian_eigs"] = point(r.hessian_eigs);
    j["lambda_box"] = Json{{"x", Json::array({r.box.x_lo, r.box.x_hi})}, {"y", Json::array({r.box.y_lo, r.box.y_hi})}};
    j["discrepancy"] = Json{{"K", number(r.discrepancy_K)}, {"grad", number(r.discrepancy_grad)}};
    j["newton_iterations"] = r.iterations;
    j["newton_trace"] = list(r.trace);
    Json starts = Json::array();
    for (const StartResult& s : r.multistart)
        starts.push_back(Json{{"start", point(s.start)}, {"end", point(s.end)}, {"converged", s.converged}});
    j["multistart"] = starts;
    j["distinct_critical_points"] = r.distinct_critical_points;
    return j;
}

Json to_json(const SpectrumReport& r, bool with_vectors)
{
    Json j;
    j["N"] = r.N;
    j["p"] = r.p;
    j["eps"] = r.eps;
    j["mode"] = Json{{"level", r.mode.level}, {"lambda", r.mode.lambda}, {"multiplicity", r.mode.multiplicity}};
    j["grid"] = grid_json(r.grid);
    j["eigenvalues"] = list(r.eigenvalues);
    j["eigenvalues_h"] = list(r.fine);
    j["eigenvalues_2h"] = list(r.coarse);
    if (!r.fits.empty())
        j["fits"] = list(r.fits);
    if (!r.xi.empty())
        j["xi"] = list(r.xi);
    j["c0_estimate"] = number(r.c0_estimate);
    if (with_vectors) {
        Json vs = Json::array();
        for (const Vector& v : r.eigenvectors)
            vs.push_back(to_json(v));
        j["eigenvectors"] = vs;
    }
    return j;
}

Json to_json(const ScanResult& r)
{
    Json j;
    j["N"] = r.N;
    Json rows = Json::array();
    for (const ScanEntry& e : r.entries) {
        rows.push_back(Json{{"eps", e.eps},
                            {"beta", e.beta},
                            {"alpha0", e.alpha0},
                            {"small_count", e.small_count},
                            {"small", list(e.small)},
                            {"third_abs", e.third_abs},
                            {"xi", point(e.xi)},
                            {"ratios", point(e.ratios)},
                            {"alignment", point(e.alignment)}});
    }
    j["entries"] = rows;
    j["c0_estimate"] = number(r.c0_estimate);
    return j;
}

Json document(const std::string& command, const Json& body)
{
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    for (auto it = body.begin(); it != body.end(); ++it)
        j[it.key()] = it.value();
    return j;
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepInterval>& rows)
{
    os << "alpha_lo,alpha_hi,tag,crossings\n";
    os << std::setprecision(17);
    for (const SweepInterval& r : rows)
        os << r.alpha_lo << ',' << r.alpha_hi << ',' << tag_name(r.cls.tag) << ',' << r.cls.crossings << '\n';
}

} // namespace nodalkit
