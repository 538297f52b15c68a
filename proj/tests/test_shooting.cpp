#include "nodalkit/shooting.hpp"

#include <doctest.h>

using namespace nodalkit;

TEST_CASE("frozen shooting thresholds")
{
    const RadialSolution u0 = find_nodal(0, 3, 4.9);
    const RadialSolution u1 = find_nodal(1, 3, 4.9);
    CHECK(u0.alpha0 == doctest::Approx(13.79681588312476).epsilon(1e-8));
    CHECK(u1.alpha0 == doctest::Approx(899.8294681480816).epsilon(1e-8));
    CHECK(u0.nodes.empty());
    REQUIRE(u1.nodes.size() == 1);
    CHECK(u1.values_u[0] > 0.0);
    CHECK(u1.tail.attached);
    const RadialSolution v0 = find_nodal(0, 5, 7.0 / 3.0 - 0.05);
    CHECK(v0.alpha0 == doctest::Approx(114.938).epsilon(1e-5));
}

TEST_CASE("classification on either side of the threshold")
{
    const double a = 899.8294681480816;
    CHECK(classify(integrate(a * 0.99, 3, 4.9)) == Classification{Tag::BlowUpNegative, 1});
    CHECK(classify(integrate(a * 1.01, 3, 4.9)) == Classification{Tag::BlowUpPositive, 2});
    CHECK(tag_from_name(tag_name(Tag::Decay)) == Tag::Decay);
    CHECK_THROWS(tag_from_name("nonsense"));
}

TEST_CASE("sweep reports degenerate decay intervals at the thresholds")
{
    const auto rows = sweep(1.05, 100.0, 60, 3, 4.9);
    int decays = 0;
    for (const SweepInterval& r : rows) {
        CHECK(r.alpha_lo <= r.alpha_hi);
        if (r.cls.tag == Tag::Decay) {
            ++decays;
            CHECK(r.alpha_lo == doctest::Approx(13.79681588312476).epsilon(1e-8));
        }
    }
    CHECK(decays == 1);
    CHECK(rows.front().alpha_lo == 1.05);
    CHECK(rows.back().alpha_hi == 100.0);
}

TEST_CASE("double and extended precision agree")
{
    SolverConfig cfg;
    cfg.extended_precision = true;
    CHECK(find_nodal(0, 3, 4.9, cfg).alpha0 == doctest::Approx(13.79681588312476).epsilon(1e-8));
}

TEST_CASE("shooting input validation")
{
    CHECK_THROWS_AS(find_nodal(-1, 3, 4.9), DomainError);
    CHECK_THROWS_AS(find_nodal(0, 3, 5.0), DomainError);
    CHECK_THROWS_AS(integrate(-1.0, 3, 4.9), DomainError);
    CHECK_THROWS_AS(sweep(2.0, 1.0, 10, 3, 4.9), DomainError);
}
