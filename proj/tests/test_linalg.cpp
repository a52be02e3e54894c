#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "entlaw/complex_matrix.hpp"
#include "entlaw/eig.hpp"
#include "entlaw/hermitian.hpp"
#include "entlaw/rng.hpp"
#include "entlaw/states.hpp"

using namespace entlaw;

namespace {

ComplexMatrix random_hermitian_matrix(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    ComplexMatrix h = g + g.adjoint();
    h *= Complex(0.5, 0.0);
    return h;
}

double reconstruction_error(const HermitianOperator& h, const EigenDecomposition& e) {
    const std::size_t n = h.dim();
    ComplexMatrix d(n, n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = e.eigenvalues[k];
    ComplexMatrix rebuilt = e.eigenvectors * d * e.eigenvectors.adjoint();
    return (rebuilt - h.matrix()).frobenius_norm();
}

double orthonormality_error(const ComplexMatrix& v) {
    ComplexMatrix g = v.adjoint() * v;
    return (g - ComplexMatrix::identity(v.rows())).frobenius_norm();
}

} // namespace

TEST(ComplexMatrix, BasicAlgebra) {
    ComplexMatrix a(2, 2);
    a(0, 0) = Complex(1.0, 0.0);
    a(0, 1) = Complex(0.0, 1.0);
    a(1, 0) = Complex(2.0, 0.0);
    a(1, 1) = Complex(0.0, -3.0);
    ComplexMatrix b = a.adjoint();
    EXPECT_EQ(b(0, 1), Complex(2.0, 0.0));
    EXPECT_EQ(b(1, 0), Complex(0.0, -1.0));
    EXPECT_NEAR((a * ComplexMatrix::identity(2) - a).frobenius_norm(), 0.0, 1e-15);
    EXPECT_NEAR(a.trace().real(), 1.0, 1e-15);
    EXPECT_NEAR(a.trace().imag(), -3.0, 1e-15);
}

TEST(ComplexMatrix, KroneckerOracle) {
    // Hand-computed 2x2 (x) 2x2 block layout.
    ComplexMatrix a(2, 2), b(2, 2);
    a(0, 0) = 1.0; a(0, 1) = 2.0; a(1, 0) = 3.0; a(1, 1) = 4.0;
    b(0, 0) = 0.0; b(0, 1) = 5.0; b(1, 0) = 6.0; b(1, 1) = 7.0;
    ComplexMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 4u);
    EXPECT_EQ(k(0, 1), Complex(5.0, 0.0));    // a00 * b01
    EXPECT_EQ(k(1, 0), Complex(6.0, 0.0));    // a00 * b10
    EXPECT_EQ(k(0, 3), Complex(10.0, 0.0));   // a01 * b01
    EXPECT_EQ(k(3, 2), Complex(24.0, 0.0));   // a11 * b10
    EXPECT_EQ(k(2, 2), Complex(0.0, 0.0));    // a10 * b00
}

TEST(ComplexMatrix, TensorDimensionGuard) {
    ComplexMatrix a(64, 64), b(32, 32);
    EXPECT_THROW(kron(a, b), std::invalid_argument);
}

TEST(HermitianOperator, SymmetrizesSmallDeviation) {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = Complex(0.5, 0.25 + 1e-14);
    m(1, 0) = Complex(0.5, -0.25);
    m(1, 1) = 2.0;
    HermitianOperator h(m);
    EXPECT_NEAR(h(0, 1).imag(), -h(1, 0).imag(), 0.0);
    EXPECT_EQ(h.matrix().hermiticity_deviation(), 0.0);
}

TEST(HermitianOperator, RejectsLargeDeviation) {
    ComplexMatrix m(2, 2);
    m(0, 1) = Complex(0.5, 0.0);
    m(1, 0) = Complex(0.5 + 1e-6, 0.0);
    EXPECT_THROW(HermitianOperator{m}, std::invalid_argument);
}

TEST(HermitianOperator, RejectsBadBipartition) {
    ComplexMatrix m = ComplexMatrix::identity(6);
    EXPECT_NO_THROW(HermitianOperator(m, 2, 3));
    EXPECT_THROW(HermitianOperator(m, 2, 2), std::invalid_argument);
}

TEST(Eig, RandomHermitianInvariants) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const std::size_t n = 3 + static_cast<std::size_t>(seed % 5);
        HermitianOperator h(random_hermitian_matrix(n, seed));
        EigenDecomposition e = hermitian_eig(h);
        const double scale = std::max(1.0, h.frobenius_norm());
        EXPECT_LE(reconstruction_error(h, e), 1e-10 * scale) << "seed " << seed;
        EXPECT_LE(orthonormality_error(e.eigenvectors), 1e-10) << "seed " << seed;
        for (std::size_t k = 1; k < n; ++k)
            EXPECT_GE(e.eigenvalues[k - 1], e.eigenvalues[k]);
    }
}

TEST(Eig, DiagonalAndKnownSpectra) {
    // Pauli X has eigenvalues +1, -1.
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    EigenDecomposition e = hermitian_eig(HermitianOperator(x));
    EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-12);
    EXPECT_NEAR(e.eigenvalues[1], -1.0, 1e-12);

    // Swap on two qubits: eigenvalues {1, 1, 1, -1}.
    EigenDecomposition es = hermitian_eig(swap_operator(2));
    EXPECT_NEAR(es.eigenvalues[0], 1.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues[1], 1.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues[2], 1.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues[3], -1.0, 1e-12);
}

TEST(Eig, TraceAndOperatorNorms) {
    for (std::size_t d : {2u, 3u, 4u}) {
        HermitianOperator f = swap_operator(d);
        const double dd = static_cast<double>(d);
        // F has d(d+1)/2 eigenvalues +1 and d(d-1)/2 eigenvalues -1, so
        // || F / d ||_1 = d.
        EXPECT_NEAR(trace_norm((1.0 / dd) * f), dd, 1e-10);
        EXPECT_NEAR(operator_norm(f), 1.0, 1e-11);
        EXPECT_NEAR(sym_projector(d).trace(), dd * (dd + 1.0) / 2.0, 1e-10);
        EXPECT_NEAR(antisym_projector(d).trace(), dd * (dd - 1.0) / 2.0, 1e-10);
    }
}

TEST(Eig, SqrtAndPositivePart) {
    HermitianOperator h(random_hermitian_matrix(5, 42));
    HermitianOperator h2(h.matrix() * h.matrix());  // PSD by construction
    HermitianOperator r = matrix_sqrt_psd(h2);
    EXPECT_LE((r.matrix() * r.matrix() - h2.matrix()).frobenius_norm(),
              1e-9 * std::max(1.0, h2.frobenius_norm()));
    EXPECT_GE(min_eigenvalue(r), -1e-10);

    PositivePart pp = positive_part(h);
    EXPECT_GE(min_eigenvalue(pp.part), -1e-12);
    // part == projector * h * projector
    HermitianOperator proj_h(pp.projector.matrix() * h.matrix() * pp.projector.matrix());
    EXPECT_LE((pp.part - proj_h).frobenius_norm(), 1e-10);
}

TEST(Eig, RequirePsdRejectsIndefinite) {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -0.5;
    EXPECT_THROW(require_psd(HermitianOperator(m), "test"), std::invalid_argument);
}

TEST(Bipartite, MaxEntangledIndexFormula) {
    for (std::size_t d : {2u, 3u}) {
        const HermitianOperator phi = max_entangled(d);
        const double w = 1.0 / static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                EXPECT_NEAR(phi(i * d + i, j * d + j).real(), w, 1e-15);
        EXPECT_NEAR(phi.trace(), 1.0, 1e-12);
        // Rank-one projector.
        HermitianOperator sq(phi.matrix() * phi.matrix());
        EXPECT_LE((sq - phi).frobenius_norm(), 1e-12);
    }
}

TEST(Bipartite, PartialTransposeOfMaxEntangled) {
    for (std::size_t d : {2u, 3u, 4u}) {
        const HermitianOperator phi = max_entangled(d);
        HermitianOperator pt = partial_transpose_b(phi);
        HermitianOperator expect = (1.0 / static_cast<double>(d)) * swap_operator(d);
        EXPECT_LE((pt - expect).frobenius_norm(), 1e-13);
    }
}

TEST(Bipartite, PartialTransposeInvolution) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        BipartiteState rho = random_density(2, 3, 4, seed);
        HermitianOperator pt2 = partial_transpose_b(partial_transpose_b(rho.op()));
        EXPECT_LE((pt2 - rho.op()).frobenius_norm(), 1e-14);
    }
}

TEST(Bipartite, PartialTraces) {
    // On a product operator the partial traces factor.
    ComplexMatrix a = random_hermitian_matrix(2, 7);
    ComplexMatrix b = random_hermitian_matrix(3, 8);
    HermitianOperator ha(a), hb(b);
    HermitianOperator prod(kron(a, b), 2, 3);
    HermitianOperator ta = partial_trace_a(prod);
    HermitianOperator tb = partial_trace_b(prod);
    EXPECT_LE((ta - ha.trace() * hb).frobenius_norm(), 1e-12);
    EXPECT_LE((tb - hb.trace() * ha).frobenius_norm(), 1e-12);
    EXPECT_NEAR(ta.trace(), prod.trace(), 1e-12);
    EXPECT_NEAR(tb.trace(), prod.trace(), 1e-12);
}

TEST(Bipartite, TensorProductGroupsFactors) {
    // For bipartite x and y the product collects A factors before B factors:
    // (A1 B1) tensor (A2 B2) lives on (A1 A2 : B1 B2).
    const HermitianOperator phi = max_entangled(2);
    HermitianOperator two = tensor_product(phi, phi);
    EXPECT_EQ(two.dim_a(), 4u);
    EXPECT_EQ(two.dim_b(), 4u);
    EXPECT_NEAR(two.trace(), 1.0, 1e-12);
    // Phi_2 tensor Phi_2 equals Phi_4 up to relabeling A2<->B1; its reduced
    // state on A1 A2 is maximally mixed.
    HermitianOperator red = partial_trace_b(two);
    HermitianOperator expect = 0.25 * HermitianOperator(ComplexMatrix::identity(4));
    EXPECT_LE((red - expect).frobenius_norm(), 1e-12);

    HermitianOperator three = tensor_power(phi, 3);
    EXPECT_EQ(three.dim_a(), 8u);
    EXPECT_EQ(three.dim_b(), 8u);
    EXPECT_NEAR(three.trace(), 1.0, 1e-12);
}

TEST(Rng, DeterministicStreams) {
    Rng a(123), b(123), c(124);
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_NE(a.next_u64(), c.next_u64());
    Rng g(7);
    double mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += g.gaussian();
    mean /= n;
    EXPECT_NEAR(mean, 0.0, 0.05);
}

TEST(Rng, HaarUnitaryIsUnitary) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        ComplexMatrix u = random_unitary(3, seed);
        EXPECT_LE((u.adjoint() * u - ComplexMatrix::identity(3)).frobenius_norm(), 1e-12);
    }
}
