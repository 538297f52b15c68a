#include "nodalkit/ansatz.hpp"

#include <doctest.h>

using namespace nodalkit;

namespace {

AnsatzParams sample_params(double eps = 0.04)
{
    AnsatzParams ap;
    ap.params = params_of(eps, 3);
    ap.t1 = -16.0;
    ap.t2 = -5.0;
    return ap;
}

} // namespace

TEST_CASE("tj derivative of the corrected bump matches central differences")
{
    const FowlerParams fp = params_of(0.04, 3);
    for (double t : {-7.0, -5.0, -2.0, 1.0}) {
        const double d = 1e-5;
        const double fd = (w_corrected(t, -5.0 + d, fp) - w_corrected(t, -5.0 - d, fp)) / (2 * d);
        CHECK(w_corrected_dtj(t, -5.0, fp) == doctest::Approx(fd).epsilon(1e-7));
        const double fdt = (w_corrected_dtj(t + d, -5.0, fp) - w_corrected_dtj(t - d, -5.0, fp)) / (2 * d);
        CHECK(w_corrected_dtj_dt(t, -5.0, fp) == doctest::Approx(fdt).epsilon(1e-6));
    }
}

TEST_CASE("ansatz derivatives carry the sign of each bump")
{
    const AnsatzParams ap = sample_params();
    const UniformGrid g = ansatz_grid(ap);
    const TransformedSolution v = build_ansatz(ap, g);
    for (int j : {1, 2}) {
        AnsatzParams hi = ap, lo = ap;
        const double d = 1e-5;
        (j == 1 ? hi.t1 : hi.t2) += d;
        (j == 1 ? lo.t1 : lo.t2) -= d;
        const Vector fd = (build_ansatz(hi, g).values_v - build_ansatz(lo, g).values_v) / (2 * d);
        CHECK((ansatz_dtj(j, ap, g) - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
    CHECK(v.values_v.maxCoeff() > 0.0);
    CHECK(v.values_v.minCoeff() < 0.0);
    CHECK(z_vector(1, ap, g).size() == g.n);
}

TEST_CASE("the ansatz needs room on the left")
{
    const AnsatzParams ap = sample_params();
    CHECK_THROWS_AS(build_ansatz(ap, make_grid(ap.t1 - 5.0, 4.0, 1e-3)), DomainError);
}

TEST_CASE("residual norms and admissible tau")
{
    const AnsatzParams ap = sample_params();
    const double tau = default_tau(ap.params);
    CHECK(tau == 0.75);
    const ResidualNorms rn = residual_norms(ap);
    CHECK(rn.tau == tau);
    CHECK(rn.ratio == doctest::Approx(rn.sup / rn.bound));
    CHECK(rn.ratio < 2.0);
    CHECK(default_tau(params_of(0.3, 4)) > 0.5);
}

TEST_CASE("interaction integral against its asymptotic form")
{
    const FowlerParams fp = params_of(0.0, 3);
    const InteractionResult near = interaction(2.0, 1.0, 0.0, 6.0, fp);
    const InteractionResult far = interaction(2.0, 1.0, 0.0, 12.0, fp);
    CHECK(std::abs(far.lhs / far.rhs_prediction - 1.0) < std::abs(near.lhs / near.rhs_prediction - 1.0));
    CHECK_THROWS_AS(interaction(1.0, 1.0, 0.0, 10.0, fp), DomainError);
}
