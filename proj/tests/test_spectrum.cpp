#include "nodalkit/spectrum.hpp"

#include <doctest.h>

using namespace nodalkit;

TEST_CASE("mode eigenvalues of the sphere")
{
    CHECK(mode_spec(0, 3).lambda == 0.0);
    CHECK(mode_spec(1, 3).lambda == 2.0);
    CHECK(mode_spec(1, 3).multiplicity == 3);
    CHECK(mode_spec(2, 3).lambda == 6.0);
    CHECK(mode_spec(2, 3).multiplicity == 5);
    CHECK(mode_spec(2, 5).multiplicity == 14);
}

TEST_CASE("Sturm bisection on the discrete Laplacian")
{
    const Index n = 50;
    SymTridiag T{Vector::Constant(n, -2.0), Vector::Constant(n - 1, 1.0)};
    const std::vector<double> top = tridiag_eigenvalues(T, n - 3, 3);
    for (int i = 0; i < 3; ++i) {
        const int j = 3 - i; // ascending order: the top one is j = 1
        const double exact = -4.0 * std::pow(std::sin(j * M_PI / (2.0 * (n + 1))), 2);
        CHECK(top[i] == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(sturm_count(T, 0.0) == n);
    CHECK(sturm_count(T, -4.0) == 0);
    const Vector v = tridiag_eigenvector(T, top[2]);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(std::abs(v[0] - std::sin(M_PI / (n + 1)) * std::sqrt(2.0 / (n + 1))) < 1e-8);
}

TEST_CASE("limit problem spectrum")
{
    const LimitSpectrum ls = limit_spectrum(3, 3);
    REQUIRE(ls.eigenvalues.size() == 3);
    CHECK(ls.eigenvalues[2] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(ls.eigenvalues[1]) < 1e-6);
    CHECK(ls.eigenvalues[0] < 0.0);
}

TEST_CASE("mode 1 kernel of a nodal solution")
{
    const RadialSolution u = find_nodal(1, 3, params_of(0.04, 3).p);
    const KernelCheck kc = kernel_mode1_check(u);
    CHECK(std::abs(kc.eigenvalue) < 1e-8);
    CHECK(kc.op_residual < 1e-6);
    CHECK(kc.wronskian_dev < 1e-8);
    CHECK(kc.cosine > 0.99999);
    const SpectrumReport r = mode_eigens(u, 0, 4);
    CHECK(r.eigenvalues[3] == doctest::Approx(2.0659).epsilon(1e-3));
    CHECK(r.eigenvalues[1] == doctest::Approx(-0.0037).epsilon(2e-2));
    CHECK(r.eigenvalues[0] == doctest::Approx(-0.0278).epsilon(2e-2));
    CHECK(r.eigenvectors.size() == 4);
}

TEST_CASE("Hardy-weighted eigenvalues")
{
    const RadialSolution u = find_nodal(1, 3, 4.9);
    CHECK(nu(u, 1) + 2.0 == doctest::Approx(-0.1808).epsilon(1e-2));
    CHECK(std::abs(nu(u, 2) + 2.0) < 1e-3);
    CHECK(hardy_ratio(u) == doctest::Approx(1.0).epsilon(0.05));
}
