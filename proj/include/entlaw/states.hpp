#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "entlaw/complex_matrix.hpp"
#include "entlaw/eig.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"
#include "entlaw/rng.hpp"

namespace entlaw {

// Density operators must hit unit trace within this.
inline constexpr double state_trace_tol = 1e-8;

// Bipartite density operator: Hermitian, PSD within tolerance, unit trace.
class BipartiteState {
public:
    BipartiteState() = default;

    static BipartiteState from_operator(const HermitianOperator& op) {
        require_bipartite(op, "BipartiteState");
        if (std::abs(op.trace() - 1.0) > state_trace_tol)
            throw std::invalid_argument("BipartiteState: trace " + std::to_string(op.trace()) +
                                        " is not 1 within tolerance");
        require_psd(op, "BipartiteState");
        return BipartiteState(op);
    }

    const HermitianOperator& op() const { return op_; }
    operator const HermitianOperator&() const { return op_; }
    const ComplexMatrix& matrix() const { return op_.matrix(); }
    std::size_t dim() const { return op_.dim(); }
    std::size_t dim_a() const { return op_.dim_a(); }
    std::size_t dim_b() const { return op_.dim_b(); }

private:
    explicit BipartiteState(const HermitianOperator& op) : op_(op) {}
    friend BipartiteState max_entangled(std::size_t);
    friend BipartiteState isotropic_state(std::size_t, double);
    friend BipartiteState random_density(std::size_t, std::size_t, std::size_t, std::uint64_t);

    HermitianOperator op_;
};

// Maximally entangled state (1/d) sum_{i,j} |ii><jj| on C^d tensor C^d.
inline BipartiteState max_entangled(std::size_t d) {
    if (d == 0) throw std::invalid_argument("max_entangled: d must be >= 1");
    if (d * d > max_tensor_dim)
        throw std::invalid_argument("max_entangled: dimension exceeds " + std::to_string(max_tensor_dim));
    ComplexMatrix m(d * d, d * d);
    const double w = 1.0 / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i * d + i, j * d + j) = w;
    return BipartiteState(HermitianOperator(m, d, d));
}

// Swap operator F = sum_{i,j} |ij><ji|.
inline HermitianOperator swap_operator(std::size_t d) {
    if (d == 0) throw std::invalid_argument("swap_operator: d must be >= 1");
    ComplexMatrix m(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m(i * d + j, j * d + i) = 1.0;
    return HermitianOperator(m, d, d);
}

// Projector onto the symmetric subspace, (I + F)/2; trace d(d+1)/2.
inline HermitianOperator sym_projector(std::size_t d) {
    HermitianOperator f = swap_operator(d);
    HermitianOperator id(ComplexMatrix::identity(d * d), d, d);
    return 0.5 * (id + f);
}

// Projector onto the antisymmetric subspace, (I - F)/2; trace d(d-1)/2.
inline HermitianOperator antisym_projector(std::size_t d) {
    HermitianOperator f = swap_operator(d);
    HermitianOperator id(ComplexMatrix::identity(d * d), d, d);
    return 0.5 * (id - f);
}

// Weights of an operator in the twirl-invariant family
// alpha * Phi + beta * (I - Phi)/(d^2 - 1).
struct IsotropicCoordinates {
    std::size_t d = 0;
    double alpha = 0.0;  // weight on the maximally entangled projector
    double beta = 0.0;   // weight on the normalized complement
};

inline HermitianOperator isotropic_operator(const IsotropicCoordinates& c) {
    if (c.d == 0) throw std::invalid_argument("isotropic_operator: d must be >= 1");
    if (!(c.alpha >= 0.0) || !(c.beta >= 0.0))
        throw std::invalid_argument("isotropic_operator: weights must be nonnegative");
    const HermitianOperator phi = max_entangled(c.d).op();
    if (c.d == 1) {
        // One-dimensional case: the complement is empty.
        if (c.beta != 0.0)
            throw std::invalid_argument("isotropic_operator: d = 1 has no complement component");
        return c.alpha * phi;
    }
    HermitianOperator id(ComplexMatrix::identity(c.d * c.d), c.d, c.d);
    const double w = c.beta / static_cast<double>(c.d * c.d - 1);
    return c.alpha * phi + w * (id - phi);
}

// Isotropic density operator with weight alpha on the maximally entangled
// projector and 1 - alpha spread over the complement.
inline BipartiteState isotropic_state(std::size_t d, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("isotropic_state: alpha must lie in [0, 1]");
    return BipartiteState(HermitianOperator(
        isotropic_operator({d, alpha, 1.0 - alpha}).matrix(), d, d));
}

namespace detail {

// Ginibre matrix: independent standard complex Gaussian entries.
inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double re = rng.gaussian();
            const double im = rng.gaussian();
            g(i, j) = Complex(re, im);
        }
    return g;
}

// Householder QR of a square complex matrix; returns Q and overwrites r.
inline ComplexMatrix householder_q(ComplexMatrix& r) {
    const std::size_t n = r.rows();
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> vvec(n);
    for (std::size_t k = 0; k < n; ++k) {
        double normx = 0.0;
        for (std::size_t i = k; i < n; ++i) normx += std::norm(r(i, k));
        normx = std::sqrt(normx);
        if (normx == 0.0) continue;
        const Complex x0 = r(k, k);
        const Complex phase = (x0 == Complex(0.0, 0.0)) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
        // v = x + phase * ||x|| e_k avoids cancellation in the leading entry.
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            vvec[i] = r(i, k);
            if (i == k) vvec[i] += phase * normx;
            vnorm2 += std::norm(vvec[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double betah = 2.0 / vnorm2;
        // r <- (I - beta v v^dag) r on the trailing block.
        for (std::size_t j = k; j < n; ++j) {
            Complex dot(0.0, 0.0);
            for (std::size_t i = k; i < n; ++i) dot += std::conj(vvec[i]) * r(i, j);
            dot *= betah;
            for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * vvec[i];
        }
        // q <- q (I - beta v v^dag).
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot(0.0, 0.0);
            for (std::size_t j = k; j < n; ++j) dot += q(i, j) * vvec[j];
            dot *= betah;
            for (std::size_t j = k; j < n; ++j) q(i, j) -= dot * std::conj(vvec[j]);
        }
    }
    return q;
}

} // namespace detail

// Haar-distributed random unitary: QR of a Ginibre matrix with the R diagonal
// phases divided out.
inline ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("random_unitary: d must be >= 1");
    Rng rng(seed, /*stream=*/1);
    ComplexMatrix r = detail::ginibre(d, d, rng);
    ComplexMatrix q = detail::householder_q(r);
    for (std::size_t j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        const double mag = std::abs(rjj);
        const Complex phase = (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) q(i, j) *= phase;
    }
    return q;
}

// Random density operator of the given rank: G G^dag / Tr[G G^dag] with G a
// dim x rank Ginibre matrix.
inline BipartiteState random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank,
                                     std::uint64_t seed) {
    const std::size_t dim = dim_a * dim_b;
    if (dim == 0) throw std::invalid_argument("random_density: dimensions must be >= 1");
    if (rank == 0 || rank > dim)
        throw std::invalid_argument("random_density: rank must lie in [1, dim]");
    Rng rng(seed, /*stream=*/2);
    ComplexMatrix g = detail::ginibre(dim, rank, rng);
    ComplexMatrix rho = g * g.adjoint();
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) throw NumericalError("random_density: degenerate Gaussian draw");
    rho *= Complex(1.0 / tr, 0.0);
    return BipartiteState(HermitianOperator(rho, dim_a, dim_b));
}

} // namespace entlaw
