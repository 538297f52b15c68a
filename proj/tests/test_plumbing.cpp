#include "nodalkit/cache.hpp"
#include "nodalkit/cli.hpp"
#include "nodalkit/serialize.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace nodalkit;

namespace {

std::filesystem::path fresh_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / (name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    return dir;
}

int cli(std::vector<std::string> args, std::string& out, std::string& err)
{
    std::vector<const char*> argv{"nodalkit"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    std::ostringstream os, es;
    const int code = run(static_cast<int>(argv.size()), argv.data(), os, es);
    out = os.str();
    err = es.str();
    return code;
}

} // namespace

TEST_CASE("radial solution JSON round trip is exact")
{
    const RadialSolution u = find_nodal(0, 3, 4.9);
    const Json j = to_json(u);
    const RadialSolution back = radial_from_json(Json::parse(dump(j)));
    CHECK(back.values_u == u.values_u);
    CHECK(back.grid_r == u.grid_r);
    CHECK(back.alpha0 == u.alpha0);
    CHECK(back.tail.r_match == u.tail.r_match);
    CHECK_THROWS_AS(radial_from_json(Json::parse("{\"N\": 3}")), IntegrityError);
}

TEST_CASE("non-finite numbers serialize as null")
{
    Vector v(3);
    v << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.1;
    const Json j = to_json(v);
    CHECK(j[1].is_null());
    const Vector back = vector_from_json(j);
    CHECK(std::isnan(back[1]));
    CHECK(back[2] == 0.1);
    const Json doc = document("x", Json{{"a", 1}});
    CHECK(doc.begin().key() == "schema");
    CHECK(doc["schema"] == 1);
}

TEST_CASE("sweep CSV layout")
{
    std::ostringstream os;
    write_sweep_csv(os, {{1.0, 2.5, {Tag::BlowUpPositive, 0}}, {2.5, 2.5, {Tag::Decay, 0}}});
    CHECK(os.str() == "alpha_lo,alpha_hi,tag,crossings\n1,2.5,BlowUpPositive,0\n2.5,2.5,Decay,0\n");
}

TEST_CASE("cache keys separate tolerances")
{
    SolverConfig a, b;
    b.rtol = 1e-11;
    CHECK(cache_key(1, 3, 4.9, a).name() != cache_key(1, 3, 4.9, b).name());
    CHECK(cache_key(1, 3, 4.9, a).name() == cache_key(1, 3, 4.9, a).name());
}

TEST_CASE("cache store, load and corruption")
{
    const auto dir = fresh_dir("nodalkit-unit-cache");
    const RadialSolution u = find_nodal(0, 3, 4.9);
    const CacheKey key = cache_key(0, 3, 4.9, {});
    CHECK_THROWS_AS(cache_load(key, dir), NotFoundError);
    const std::string name = cache_store(u, key, dir);
    CHECK(cache_load(key, dir).values_u == u.values_u);
    CHECK(solve_cached(0, 3, 4.9, {}, dir).values_du == u.values_du);
    {
        std::ofstream os(dir / (name + ".json"), std::ios::binary | std::ios::trunc);
        os << "{\"schema\": 1";
    }
    CHECK_THROWS_AS(cache_load(key, dir), IntegrityError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("command line exit codes")
{
    std::string out, err;
    CHECK(cli({}, out, err) == 2);
    CHECK(cli({"reduce", "--frobnicate"}, out, err) == 2);
    CHECK(err.find("Usage") != std::string::npos);
    CHECK(cli({"reduce", "--eps", "0.05", "--p", "4.9"}, out, err) == 2);
    CHECK(cli({"reduce", "--dim", "3"}, out, err) == 2);
    CHECK(cli({"verify", "--suite", "11"}, out, err) == 2);
    CHECK(cli({"verify", "--suite", "1", "--dim", "4"}, out, err) == 2);
    CHECK(cli({"solve", "--eps", "0.1", "--rtol", "-1", "--no-cache"}, out, err) == 2);
    CHECK(cli({"--help"}, out, err) == 0);
}

TEST_CASE("command line outputs")
{
    std::string out, err;
    REQUIRE(cli({"constants", "--dim", "3"}, out, err) == 0);
    const Json c = Json::parse(out);
    CHECK(c["schema"] == 1);
    CHECK(c["command"] == "constants");
    CHECK(c["a0"].get<double>() == doctest::Approx(M_PI / 4));

    const auto dir = fresh_dir("nodalkit-unit-cli");
    REQUIRE(cli({"solve", "--dim", "3", "--eps", "0.1", "--nodes", "1", "--cache-dir", dir.string()}, out, err) == 0);
    const Json s = Json::parse(out);
    CHECK(s["alpha0"].get<double>() == doctest::Approx(899.8294681480816).epsilon(1e-8));
    CHECK(s["nodes"].size() == 1);
    CHECK(s["residual"]["fowler_residual_rel"].get<double>() < 1e-4);
    std::string again;
    REQUIRE(cli({"solve", "--dim", "3", "--eps", "0.1", "--nodes", "1", "--cache-dir", dir.string()}, again, err) == 0);
    CHECK(again == out);

    REQUIRE(cli({"sweep", "--p", "4.9", "--alpha-hi", "50", "--samples", "30"}, out, err) == 0);
    CHECK(out.rfind("alpha_lo,alpha_hi,tag,crossings\n", 0) == 0);
    CHECK(out.find("Decay,0") != std::string::npos);
    std::filesystem::remove_all(dir);
}
