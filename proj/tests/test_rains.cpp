#include <gtest/gtest.h>

#include <cmath>

#include "entlaw/hyptest.hpp"
#include "entlaw/rains.hpp"
#include "entlaw/states.hpp"

using namespace entlaw;

namespace {

// Independent scoring of a twirl-invariant candidate: sample the inner test
// weight densely instead of using the two-endpoint argument.
double sampled_inner_value(std::size_t d, double a, double alpha, double beta, double eps) {
    const double b = 1.0 - a;
    const double L = static_cast<double>(d * d) - 1.0;
    const double target = 1.0 - eps;
    if (b <= 1e-14) {
        // The orthogonal weight is unconstrained, so it drops to zero.
        return (target / a) * alpha;
    }
    // Feasibility of lambda in [0, L] pins kappa to an interval; sample it
    // inclusively so the linear minimum is hit exactly.
    const double k_lo = std::max(0.0, (target - b) / a);
    const double k_hi = std::min(1.0, target / a);
    double best = std::numeric_limits<double>::infinity();
    const int steps = 2000;
    for (int i = 0; i <= steps; ++i) {
        const double k = k_lo + (k_hi - k_lo) * (static_cast<double>(i) / steps);
        const double lam = std::clamp((target - k * a) * L / b, 0.0, L);
        const double v = k * alpha + (L > 0.0 ? lam * beta / L : 0.0);
        best = std::min(best, v);
    }
    return best;
}

} // namespace

TEST(PptPrime, MembershipBasics) {
    for (std::size_t d : {2u, 3u}) {
        const double dim = static_cast<double>(d * d);
        HermitianOperator mixed((1.0 / dim) * ComplexMatrix::identity(d * d), d, d);
        PptPrimeCheck c = ppt_prime_membership(mixed);
        EXPECT_TRUE(c.member);
        EXPECT_NEAR(c.pt_trace_norm, 1.0, 1e-11);

        // The maximally entangled state violates the transpose condition.
        PptPrimeCheck cp = ppt_prime_membership(max_entangled(d));
        EXPECT_FALSE(cp.member);
        EXPECT_NEAR(cp.pt_trace_norm, static_cast<double>(d), 1e-10);
    }
}

TEST(PptPrime, BoundaryOptimizer) {
    // The operator alpha = 1/d, beta = (d-1)/d sits exactly on the boundary.
    for (std::size_t d : {2u, 3u, 4u}) {
        const double dd = static_cast<double>(d);
        IsotropicCoordinates c{d, 1.0 / dd, (dd - 1.0) / dd};
        IsotropicRegionPoint pt = isotropic_ppt_region(c);
        EXPECT_TRUE(pt.member);
        EXPECT_NEAR(pt.pt_trace_norm, 1.0, 1e-10);

        HermitianOperator sigma = isotropic_operator(c).with_bipartition(d, d);
        PptPrimeCheck direct = ppt_prime_membership(sigma);
        EXPECT_TRUE(direct.member);
        EXPECT_NEAR(direct.pt_trace_norm, 1.0, 1e-10);
    }
}

TEST(PptPrime, FormulaMatchesDirectOnGrid) {
    // Coarse sweep here; the acceptance run uses the full 200 x 200 grid.
    for (std::size_t d : {2u, 3u}) {
        for (int i = 0; i <= 12; ++i)
            for (int j = 0; j <= 12; ++j) {
                IsotropicCoordinates c{d, i / 12.0, j / 12.0};
                IsotropicRegionPoint f = isotropic_ppt_region(c);
                HermitianOperator sigma = isotropic_operator(c).with_bipartition(d, d);
                PptPrimeCheck direct = ppt_prime_membership(sigma);
                EXPECT_NEAR(f.pt_trace_norm, direct.pt_trace_norm, 1e-10)
                    << "d " << d << " alpha " << c.alpha << " beta " << c.beta;
                EXPECT_EQ(f.member, direct.member);
            }
    }
}

TEST(RainsClosedForm, FrozenValues) {
    EXPECT_NEAR(rains_closed_form_max_ent(3, 0.1), 1.7369655941662062, 1e-12);
    EXPECT_NEAR(rains_closed_form_max_ent(2, 0.3), 1.5145731728297583, 1e-12);
    EXPECT_NEAR(rains_closed_form_max_ent(2, 0.0), 1.0, 1e-15);
    EXPECT_THROW(rains_closed_form_max_ent(2, 1.0), std::invalid_argument);
}

TEST(RainsReduced, MaxEntangledMatchesClosedForm) {
    for (std::size_t d : {2u, 3u, 4u}) {
        for (double eps : {0.0, 0.01, 0.1, 0.3, 0.5, 0.9}) {
            RainsResult r = rains_isotropic_reduced(max_entangled(d), eps);
            EXPECT_NEAR(r.value_bits, rains_closed_form_max_ent(d, eps), 1e-12)
                << "d " << d << " eps " << eps;
            EXPECT_EQ(r.method, "reduced");
        }
    }
}

TEST(RainsReduced, GridSandwich) {
    // The reported optimum dominates a grid search and is reproduced at the
    // reported optimizer by dense sampling of the inner test.
    for (std::size_t d : {2u, 3u}) {
        for (double alpha_state : {1.0, 0.85, 0.5}) {
            for (double eps : {0.1, 0.4}) {
                BipartiteState rho = isotropic_state(d, alpha_state);
                RainsResult r = rains_isotropic_reduced(rho, eps);
                const double v_reported = std::exp2(-r.value_bits);

                const HermitianOperator phi = max_entangled(d);
                const double a = hermitian_inner(phi, rho.op());
                const double dd = static_cast<double>(d);
                double grid_best = -1.0;
                const int g = 160;
                for (int i = 0; i <= g; ++i)
                    for (int j = 0; j <= g; ++j) {
                        const double alpha = (i / static_cast<double>(g)) / dd;
                        const double beta = j / static_cast<double>(g);
                        if (alpha + beta > 1.0 + 1e-12) continue;
                        grid_best = std::max(grid_best,
                                             sampled_inner_value(d, a, alpha, beta, eps));
                    }
                EXPECT_LE(grid_best, v_reported + 1e-9) << "d " << d << " eps " << eps;
                EXPECT_GE(grid_best, v_reported - 0.02) << "d " << d << " eps " << eps;

                const double a_opt = hermitian_inner(phi, r.optimizer_sigma);
                const double b_opt = r.optimizer_sigma.trace() - a_opt;
                EXPECT_NEAR(sampled_inner_value(d, a, a_opt, b_opt, eps), v_reported, 1e-9);
                // The optimizer lies in the feasible region.
                PptPrimeCheck mem = ppt_prime_membership(r.optimizer_sigma);
                EXPECT_TRUE(mem.member);
            }
        }
    }
}

TEST(RainsReduced, RejectsNonInvariantStates) {
    BipartiteState rho = random_density(2, 2, 3, 5);
    EXPECT_THROW(rains_isotropic_reduced(rho, 0.1), std::invalid_argument);
}

TEST(RainsSdp, MaxEntangledMatchesClosedForm) {
    for (double eps : {0.1, 0.5}) {
        RainsResult r = rains_general_sdp(max_entangled(2), eps);
        EXPECT_NEAR(r.value_bits, rains_closed_form_max_ent(2, eps), 1e-6) << "eps " << eps;
        EXPECT_EQ(r.method, "sdp");
        ASSERT_TRUE(r.certificate.has_value());
        EXPECT_TRUE(r.certificate->pass);
        // The extracted optimizer reproduces the value through the
        // hypothesis-testing route.
        EXPECT_NEAR(r.witness_value_bits, r.value_bits, 1e-6);
    }
    RainsResult r3 = rains_general_sdp(max_entangled(3), 0.3);
    EXPECT_NEAR(r3.value_bits, rains_closed_form_max_ent(3, 0.3), 1e-6);
}

TEST(RainsSdp, AgreesWithReducedOnIsotropic) {
    for (double alpha : {0.6, 0.9}) {
        BipartiteState rho = isotropic_state(2, alpha);
        RainsResult red = rains_isotropic_reduced(rho, 0.2);
        RainsResult sdp = rains_general_sdp(rho, 0.2);
        EXPECT_NEAR(red.value_bits, sdp.value_bits, 1e-6) << "alpha " << alpha;
    }
}

TEST(RainsSdp, RandomStateSandwich) {
    BipartiteState rho = random_density(2, 2, 2, 11);
    const double eps = 0.2;
    RainsResult r = rains_general_sdp(rho, eps);
    // Any particular feasible sigma upper-bounds the minimum.
    HermitianOperator mixed(0.25 * ComplexMatrix::identity(4), 2, 2);
    HypothesisTestResult at_mixed = dh_neyman_pearson(rho, mixed, eps);
    EXPECT_LE(r.value_bits, at_mixed.value_bits + 1e-6);
    // The extracted minimizer certifies tightness.
    EXPECT_NEAR(r.witness_value_bits, r.value_bits, 1e-6);
    PptPrimeCheck mem = ppt_prime_membership(r.optimizer_sigma, 1e-6);
    EXPECT_TRUE(mem.member);
}

TEST(RainsSdp, SupportFormAtZeroEps) {
    // Rank-one input: value log2 d at eps = 0.
    RainsResult r = rains_general_sdp(max_entangled(2), 0.0);
    EXPECT_EQ(r.method, "sdp_support");
    EXPECT_NEAR(r.value_bits, 1.0, 1e-6);
    // Full-rank input: the identity test accepts every unit-trace sigma.
    RainsResult rf = rains_general_sdp(isotropic_state(2, 0.5), 0.0);
    EXPECT_NEAR(rf.value_bits, 0.0, 1e-6);
}

TEST(RainsSdp, CapsEpsNearOne) {
    RainsResult r = rains_general_sdp(max_entangled(2), 1.0 - 1e-9);
    EXPECT_EQ(r.status, "eps_capped");
    EXPECT_NEAR(r.eps_used, 1.0 - 1e-6, 1e-12);
    EXPECT_NEAR(r.value_bits, rains_closed_form_max_ent(2, 1.0 - 1e-6), 5e-3);
}

TEST(RainsAuto, RoutesByInvariance) {
    RainsResult iso = rains_auto(isotropic_state(3, 0.8), 0.1);
    EXPECT_EQ(iso.method, "reduced");
    RainsResult gen = rains_auto(random_density(2, 2, 3, 42), 0.1);
    EXPECT_EQ(gen.method, "sdp");
}
