#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entlaw/complex_matrix.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

// Trace preservation must hold to this accuracy at construction.
inline constexpr double kraus_tp_tol = 1e-10;

// Completely positive trace-preserving map in Kraus form.  All operators
// share a common shape out_dim x in_dim and satisfy sum_k K^dag K = I within
// tolerance.  The output bipartition travels with the channel so applying it
// yields operators with a usable tensor split.
class KrausChannel {
public:
    static KrausChannel make(std::vector<ComplexMatrix> ops, std::size_t out_dim_a,
                             std::size_t out_dim_b, std::string label = "") {
        if (ops.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
        const std::size_t out_dim = ops.front().rows();
        const std::size_t in_dim = ops.front().cols();
        if (out_dim_a * out_dim_b != out_dim)
            throw std::invalid_argument("KrausChannel: output bipartition does not match output dim");
        for (const ComplexMatrix& k : ops)
            if (k.rows() != out_dim || k.cols() != in_dim)
                throw std::invalid_argument("KrausChannel: inconsistent Kraus shapes");
        ComplexMatrix acc(in_dim, in_dim);
        for (const ComplexMatrix& k : ops) acc += k.adjoint() * k;
        acc -= ComplexMatrix::identity(in_dim);
        const double dev = acc.frobenius_norm();
        if (dev > kraus_tp_tol)
            throw std::invalid_argument("KrausChannel: trace preservation violated by " +
                                        std::to_string(dev));
        return KrausChannel(std::move(ops), out_dim_a, out_dim_b, std::move(label));
    }

    std::size_t in_dim() const { return ops_.front().cols(); }
    std::size_t out_dim() const { return ops_.front().rows(); }
    std::size_t out_dim_a() const { return out_dim_a_; }
    std::size_t out_dim_b() const { return out_dim_b_; }
    const std::vector<ComplexMatrix>& ops() const { return ops_; }
    const std::string& label() const { return label_; }

private:
    KrausChannel(std::vector<ComplexMatrix> ops, std::size_t oa, std::size_t ob, std::string label)
        : ops_(std::move(ops)), out_dim_a_(oa), out_dim_b_(ob), label_(std::move(label)) {}

    std::vector<ComplexMatrix> ops_;
    std::size_t out_dim_a_, out_dim_b_;
    std::string label_;
};

// sum_k K x K^dag with the channel's output bipartition attached.
inline HermitianOperator apply(const KrausChannel& ch, const HermitianOperator& x) {
    if (x.dim() != ch.in_dim())
        throw std::invalid_argument("apply: operator dim " + std::to_string(x.dim()) +
                                    " does not match channel input dim " + std::to_string(ch.in_dim()));
    ComplexMatrix out(ch.out_dim(), ch.out_dim());
    for (const ComplexMatrix& k : ch.ops()) out += k * x.matrix() * k.adjoint();
    return HermitianOperator(out, ch.out_dim_a(), ch.out_dim_b());
}

inline BipartiteState apply_to_state(const KrausChannel& ch, const BipartiteState& rho) {
    return BipartiteState::from_operator(apply(ch, rho.op()));
}

// Channel composition: (second after first) as a single Kraus family.
inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
    if (second.in_dim() != first.out_dim())
        throw std::invalid_argument("compose: inner dimensions do not match");
    std::vector<ComplexMatrix> ops;
    ops.reserve(second.ops().size() * first.ops().size());
    for (const ComplexMatrix& b : second.ops())
        for (const ComplexMatrix& a : first.ops())
            ops.push_back(b * a);
    return KrausChannel::make(std::move(ops), second.out_dim_a(), second.out_dim_b(),
                              second.label() + " . " + first.label());
}

// Bilateral twirl in closed form:
// T(X) = Phi Tr[Phi X] + (I - Phi)/(d^2 - 1) Tr[(I - Phi) X].
inline HermitianOperator twirl(const HermitianOperator& x) {
    require_bipartite(x, "twirl");
    if (x.dim_a() != x.dim_b())
        throw std::invalid_argument("twirl: requires dim_a == dim_b");
    const std::size_t d = x.dim_a();
    const HermitianOperator phi = max_entangled(d).op();
    const double phi_weight = hermitian_inner(phi, x);
    const double rest_weight = x.trace() - phi_weight;
    if (d == 1) return phi_weight * phi;
    HermitianOperator id(ComplexMatrix::identity(d * d), d, d);
    return phi_weight * phi + (rest_weight / static_cast<double>(d * d - 1)) * (id - phi);
}

// Monte-Carlo estimate of the twirl: average of (U tensor conj(U)) X (.)^dag
// over Haar samples.  Converges to twirl(X) at the usual 1/sqrt(n) rate.
inline HermitianOperator twirl_sampled(const HermitianOperator& x, std::size_t samples,
                                       std::uint64_t seed) {
    require_bipartite(x, "twirl_sampled");
    if (x.dim_a() != x.dim_b())
        throw std::invalid_argument("twirl_sampled: requires dim_a == dim_b");
    if (samples == 0) throw std::invalid_argument("twirl_sampled: samples must be >= 1");
    const std::size_t d = x.dim_a();
    ComplexMatrix acc(d * d, d * d);
    for (std::size_t s = 0; s < samples; ++s) {
        const ComplexMatrix u = random_unitary(d, seed + s);
        ComplexMatrix ubar(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) ubar(i, j) = std::conj(u(i, j));
        const ComplexMatrix w = kron(u, ubar);
        acc += w * x.matrix() * w.adjoint();
    }
    acc *= Complex(1.0 / static_cast<double>(samples), 0.0);
    return HermitianOperator(acc, d, d);
}

// Probability of passing the maximally entangled test: Tr[Phi omega].
inline double success_measurement(const HermitianOperator& omega) {
    require_bipartite(omega, "success_measurement");
    if (omega.dim_a() != omega.dim_b())
        throw std::invalid_argument("success_measurement: requires dim_a == dim_b");
    const HermitianOperator phi = max_entangled(omega.dim_a()).op();
    return hermitian_inner(phi, omega);
}

} // namespace entlaw
