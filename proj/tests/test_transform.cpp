#include "nodalkit/ansatz.hpp"
#include "nodalkit/shooting.hpp"

#include <doctest.h>

using namespace nodalkit;

TEST_CASE("Fowler parameters at a given offset")
{
    const FowlerParams fp = params_of(0.1, 3);
    CHECK(fp.p == doctest::Approx(4.9));
    CHECK(fp.beta == doctest::Approx(0.1 / 3.9).epsilon(1e-14));
    CHECK(fp.gamma == doctest::Approx(0.25 - fp.beta * fp.beta / 4.0).epsilon(1e-14));
    CHECK(fp.alpha_exp == doctest::Approx(2.0 / 3.9));
    const FowlerParams back = params_of_p(fp.p, 3);
    CHECK(back.eps == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(params_of(0.0, 4).beta == 0.0);
}

TEST_CASE("transform round trip and interpolation of a nodal profile")
{
    const RadialSolution u = find_nodal(1, 3, 4.9);
    const FowlerParams fp = params_of_p(4.9, 3);
    const UniformGrid g = make_grid(std::log(u.grid_r[0]), std::log(u.tail.r_match), 1e-3);
    const TransformedSolution v = to_fowler(u, fp, g);
    for (Index i = 0; i < g.n; i += 997) {
        const double r = std::exp(g[i]);
        CHECK(v.values_v[i] == doctest::Approx(std::pow(r, fp.alpha_exp) * eval_u(u, r)).epsilon(1e-12));
    }
    const RadialSolution w = from_fowler(v);
    for (double r : {1e-3, 1e-2, 0.5})
        CHECK(eval_u(w, r) == doctest::Approx(eval_u(u, r)).epsilon(1e-8));
    CHECK(eval_u(u, 0.0) == doctest::Approx(u.alpha0));
    // Beyond r_match the Bessel far field takes over continuously.
    const double rm = u.tail.r_match;
    CHECK(eval_u(u, rm * (1 - 1e-12)) == doctest::Approx(eval_u(u, rm * (1 + 1e-12))).epsilon(1e-6));
}

TEST_CASE("Fowler residual of a shooting profile is small")
{
    const RadialSolution u = find_nodal(0, 3, 4.9);
    const FowlerParams fp = params_of_p(4.9, 3);
    const TransformedSolution v = to_fowler(u, fp, make_grid(std::log(u.grid_r[0]), 1.0, 1e-3));
    const Vector s = residual_S(v, 4);
    CHECK(s.segment(2, s.size() - 4).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("energy of the ground state agrees between radial and Fowler variables")
{
    const RadialSolution u = find_nodal(0, 3, 4.9);
    const FowlerParams fp = params_of_p(4.9, 3);
    const TransformedSolution v = to_fowler(u, fp, make_grid(std::log(u.grid_r[0]), std::log(u.tail.r_match), 1e-3));
    const EnergyResult e = energy(v, Quadrature::Simpson);
    CHECK(e.value == doctest::Approx(radial_energy(u)).epsilon(1e-4));
}
