#include "nodalkit/reduction.hpp"

#include <doctest.h>

using namespace nodalkit;

TEST_CASE("limit constants")
{
    const ReductionConstants c3 = constants_ab(3);
    CHECK(c3.a0 == doctest::Approx(M_PI / 4).epsilon(1e-12));
    CHECK(c3.b0 == doctest::Approx(M_PI / 8).epsilon(1e-12));
    CHECK(constants_ab(4).a0 == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(constants_ab(5).a0 == doctest::Approx(0.375).epsilon(1e-9));
    CHECK(constants_ab(6).a0 == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(constants_ab(7).a0 == doctest::Approx(1.25).epsilon(1e-9));
    // Profile equation tested against w.
    CHECK(c3.grad_w_sq + 0.25 * c3.w_sq == doctest::Approx(c3.w_pow_p1).epsilon(1e-10));
}

TEST_CASE("lambda coordinates invert")
{
    for (int N : {3, 4, 5, 7}) {
        const Point2 t(-14.0, -4.5);
        const Point2 xy = lambda_coords(t, N);
        const Point2 back = from_lambda_coords(xy[0], xy[1], N);
        CHECK(back[0] == doctest::Approx(t[0]).epsilon(1e-10));
        CHECK(back[1] == doctest::Approx(t[1]).epsilon(1e-10));
    }
}

TEST_CASE("reduced energy derivatives are consistent")
{
    const FowlerParams fp = params_of(0.04, 3);
    const ReductionConstants rc = constants_ab(3, 0.04);
    const Point2 t = predicted_t(fp, rc);
    CHECK(in_lambda(t, fp, rc));
    const double d = 1e-5;
    const Point2 g = grad_K_tilde(t, fp, rc);
    const Eigen::Matrix2d H = hess_K_tilde(t, fp, rc);
    for (int i = 0; i < 2; ++i) {
        const Point2 e = Point2::Unit(i) * d;
        CHECK(g[i] == doctest::Approx((K_tilde(t + e, fp, rc) - K_tilde(t - e, fp, rc)) / (2 * d)).epsilon(1e-6));
        const Point2 dg = (grad_K_tilde(t + e, fp, rc) - grad_K_tilde(t - e, fp, rc)) / (2 * d);
        CHECK(H(0, i) == doctest::Approx(dg[0]).epsilon(1e-6));
        CHECK(H(1, i) == doctest::Approx(dg[1]).epsilon(1e-6));
    }
}

TEST_CASE("frozen critical point of the reduced energy")
{
    const FowlerParams fp = params_of(0.04, 3);
    const ReductionConstants rc = constants_ab(3, 0.04);
    const ReducedEnergyReport rep = critical_point(fp, rc);
    CHECK(rep.distinct_critical_points == 1);
    CHECK(rep.multistart.size() == 9);
    CHECK(grad_K_tilde(rep.t_star, fp, rc).norm() < 1e-10 * fp.beta);
    CHECK(rep.hessian_eigs[0] == doctest::Approx(0.1526).epsilon(1e-3));
    CHECK(rep.hessian_eigs[1] == doctest::Approx(0.9994).epsilon(1e-3));
    CHECK(std::abs(std::exp(rep.t_star[1]) / fp.beta - rc.a0) / rc.a0 == doctest::Approx(0.0994).epsilon(1e-2));
}

TEST_CASE("projected problem keeps phi orthogonal to the kernel directions")
{
    const FowlerParams fp = params_of(0.04, 3);
    const Point2 t = predicted_t(fp, constants_ab(3, 0.04));
    const ProjectedSolve s = solve_projected(t, fp, reduction_grid(t));
    CHECK(s.ortho_defects.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(s.updates.back() < 1e-10 * s.updates.front());
    CHECK(s.sup_norm < s.residual_sup);
}
