#include "nodalkit/special.hpp"

#include <doctest.h>

using namespace nodalkit;

TEST_CASE("bessel_k matches tabulated values on both sides of the branch point")
{
    CHECK(bessel_k(0, 0.5) == doctest::Approx(0.9244190712276659).epsilon(1e-14));
    CHECK(bessel_k(1, 0.5) == doctest::Approx(1.656441120003301).epsilon(1e-14));
    CHECK(bessel_k(2, 0.5) == doctest::Approx(7.550183551240869).epsilon(1e-14));
    CHECK(bessel_k(0, 3.0) == doctest::Approx(0.03473950438627925).epsilon(1e-13));
    CHECK(bessel_k(1, 3.0) == doctest::Approx(0.04015643112819418).epsilon(1e-13));
    CHECK(bessel_k(2, 3.0) == doctest::Approx(0.06151045847174204).epsilon(1e-13));
    CHECK(bessel_k(1, 1.999999) == doctest::Approx(bessel_k(1, 2.000001)).epsilon(1e-5));
    CHECK_THROWS_AS(bessel_k(0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_k(3, 1.0), DomainError);
}

TEST_CASE("profile w at the critical exponent in dimension 3")
{
    const ProfileConstants c = profile_constants(5.0, 3);
    // w = (3/4)^{1/4} cosh(t)^{-1/2}
    CHECK(eval_w(0.0, c) == doctest::Approx(std::pow(0.75, 0.25)).epsilon(1e-14));
    CHECK(eval_w(2.0, c) == doctest::Approx(std::pow(0.75, 0.25) / std::sqrt(std::cosh(2.0))).epsilon(1e-14));
    CHECK(eval_w(-800.0, c) >= 0.0);
    CHECK(eval_w_prime(0.0, c) == 0.0);
    CHECK(eval_w_second(0.7, c) == doctest::Approx(0.25 * eval_w(0.7, c) - std::pow(eval_w(0.7, c), 5.0)));
}

TEST_CASE("Pohozaev identities hold for the closed-form profile")
{
    const auto [a, b] = pohozaev_check(profile_constants(4.9, 3));
    CHECK(a < 1e-10);
    CHECK(b < 1e-10);
}

TEST_CASE("correction profiles are continuous across their branch points")
{
    for (int N = 3; N <= 6; ++N) {
        for (double z : {1.0, 2.0}) {
            const double s = std::log(z);
            CHECK(correction_profile(s - 1e-9, N) == doctest::Approx(correction_profile(s + 1e-9, N)).epsilon(1e-7));
            CHECK(correction_profile_prime(s - 1e-9, N) ==
                  doctest::Approx(correction_profile_prime(s + 1e-9, N)).epsilon(1e-7));
        }
    }
    CHECK(correction_profile(-50.0, 6) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(correction_profile(1.0, 7) == 0.0);
    CHECK_THROWS_AS(correction_profile(0.0, 2), DomainError);
}
