#include <gtest/gtest.h>

#include <cmath>

#include "entlaw/channels.hpp"
#include "entlaw/metrics.hpp"
#include "entlaw/protocols.hpp"
#include "entlaw/states.hpp"

using namespace entlaw;

TEST(Channels, MakeRejectsNonTracePreserving) {
    std::vector<ComplexMatrix> ops;
    ops.push_back(0.5 * ComplexMatrix::identity(4));
    EXPECT_THROW(KrausChannel::make(ops, 2, 2), std::invalid_argument);
    ops.clear();
    EXPECT_THROW(KrausChannel::make(ops, 2, 2), std::invalid_argument);
}

TEST(Channels, IdentityChannelFixesStates) {
    KrausChannel id = identity_channel(2);
    BipartiteState rho = random_density(2, 2, 3, 5);
    BipartiteState out = apply_to_state(id, rho);
    EXPECT_LE((out.op() - rho.op()).frobenius_norm(), 1e-14);
}

TEST(Channels, TwirlFixesMaxEntangledAndIsIdempotent) {
    for (std::size_t d : {2u, 3u}) {
        BipartiteState phi = max_entangled(d);
        EXPECT_LE((twirl(phi.op()) - phi.op()).frobenius_norm(), 1e-13);
        for (std::uint64_t seed : {1ull, 9ull}) {
            BipartiteState rho = random_density(d, d, d, seed);
            HermitianOperator once = twirl(rho.op());
            HermitianOperator twice = twirl(once);
            EXPECT_LE((twice - once).frobenius_norm(), 1e-12);
            // Twirling preserves trace and the Phi overlap.
            EXPECT_NEAR(once.trace(), 1.0, 1e-12);
            EXPECT_NEAR(hermitian_inner(phi.op(), once),
                        hermitian_inner(phi.op(), rho.op()), 1e-12);
        }
    }
}

TEST(Channels, TwirlMatchesSampledAverage) {
    BipartiteState rho = random_density(2, 2, 4, 21);
    HermitianOperator closed = twirl(rho.op());
    HermitianOperator sampled = twirl_sampled(rho.op(), 800, 1234);
    EXPECT_LE((closed - sampled).frobenius_norm(), 0.15);
}

TEST(Channels, SuccessMeasurementReadsAlpha) {
    for (double alpha : {0.25, 0.8}) {
        BipartiteState rho = isotropic_state(3, alpha);
        EXPECT_NEAR(success_measurement(rho.op()), alpha, 1e-12);
    }
}

TEST(Protocols, DepolarizingDilutionGivesIsotropic) {
    for (std::size_t d : {2u, 3u}) {
        for (double p : {0.1, 0.6}) {
            KrausChannel ch = depolarizing_dilution(d, p);
            BipartiteState out = apply_to_state(ch, max_entangled(d));
            const double dd = static_cast<double>(d);
            const double alpha = 1.0 - p + p / (dd * dd);
            BipartiteState expect = isotropic_state(d, alpha);
            EXPECT_LE((out.op() - expect.op()).frobenius_norm(), 1e-12);
        }
    }
}

TEST(Protocols, MeasurePrepareDilutionOverlap) {
    for (std::size_t d : {2u, 3u}) {
        for (double q : {0.2, 0.9}) {
            KrausChannel ch = measure_prepare_dilution(d, q);
            BipartiteState out = apply_to_state(ch, max_entangled(d));
            const double dd = static_cast<double>(d);
            // The measured branch keeps overlap 1/d with Phi.
            EXPECT_NEAR(success_measurement(out.op()), 1.0 - q + q / dd, 1e-12);
            EXPECT_NEAR(out.op().trace(), 1.0, 1e-12);
        }
    }
}

TEST(Protocols, EmbedChannelFidelity) {
    KrausChannel ch = embed_channel(2, 3);
    BipartiteState out = apply_to_state(ch, max_entangled(2));
    // Embedded Phi_2 against Phi_3: overlap (1/sqrt 2 * 1/sqrt 3 * 2)^2 = 2/3.
    EXPECT_NEAR(fidelity(out.op(), max_entangled(3).op()), 2.0 / 3.0, 1e-12);
}

TEST(Protocols, ProjectReprepareDistill) {
    // d -> d_out <= d on Phi_d: the kept block carries weight d_out/d and the
    // rejected weight lands on |00><00|.
    KrausChannel ch = project_reprepare_distill(3, 2);
    BipartiteState out = apply_to_state(ch, max_entangled(3));
    EXPECT_NEAR(out.op().trace(), 1.0, 1e-12);
    const double f = fidelity(out.op(), max_entangled(2).op());
    EXPECT_NEAR(f, 2.0 / 3.0 + 1.0 / 6.0, 1e-11);

    // d_out == d reduces to the identity.
    KrausChannel idch = project_reprepare_distill(3, 3);
    BipartiteState rho = random_density(3, 3, 2, 17);
    BipartiteState fixed = apply_to_state(idch, rho);
    EXPECT_LE((fixed.op() - rho.op()).frobenius_norm(), 1e-13);
}

TEST(Protocols, ComposeMatchesSequentialApplication) {
    KrausChannel first = embed_channel(2, 3);
    KrausChannel second = depolarizing_dilution(3, 0.3);
    KrausChannel both = compose(second, first);
    BipartiteState in = max_entangled(2);
    BipartiteState two_step = apply_to_state(second, apply_to_state(first, in));
    BipartiteState one_step = apply_to_state(both, in);
    EXPECT_LE((one_step.op() - two_step.op()).frobenius_norm(), 1e-13);
}
