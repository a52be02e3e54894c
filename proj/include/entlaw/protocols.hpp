#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "entlaw/channels.hpp"
#include "entlaw/complex_matrix.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

// Small library of one-way-LOCC-implementable channels used by the
// second-law sweeps.  Every Kraus operator below is a tensor product of a
// local A-side and a local B-side operator, so none of these channels can
// create entanglement across the cut.

// Identity on C^d tensor C^d.
inline KrausChannel identity_channel(std::size_t d) {
    std::vector<ComplexMatrix> ops{ComplexMatrix::identity(d * d)};
    return KrausChannel::make(std::move(ops), d, d, "identity(d=" + std::to_string(d) + ")");
}

// Depolarize the A share with probability p: with the complementary
// probability the state passes through, otherwise A is replaced by the
// maximally mixed state.  On the maximally entangled input this produces the
// isotropic state with weight 1 - p + p/d^2 on the entangled projector.
inline KrausChannel depolarizing_dilution(std::size_t d, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("depolarizing_dilution: p must lie in [0, 1]");
    const ComplexMatrix id_b = ComplexMatrix::identity(d);
    std::vector<ComplexMatrix> ops;
    if (p < 1.0) {
        ComplexMatrix keep = ComplexMatrix::identity(d * d);
        keep *= Complex(std::sqrt(1.0 - p), 0.0);
        ops.push_back(keep);
    }
    if (p > 0.0) {
        const double w = std::sqrt(p / static_cast<double>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                ComplexMatrix flip(d, d);
                flip(i, j) = w;
                ops.push_back(kron(flip, id_b));
            }
    }
    return KrausChannel::make(std::move(ops), d, d,
                              "depolarizing(d=" + std::to_string(d) + ",p=" + std::to_string(p) + ")");
}

// With probability q, measure the A share in the computational basis,
// broadcast the outcome and reprepare |ii>; otherwise pass through.  On the
// maximally entangled input the output is (1-q) Phi + q * (1/d) sum_i |ii><ii|,
// whose twirl is the isotropic state with weight 1 - q (1 - 1/d).
inline KrausChannel measure_prepare_dilution(std::size_t d, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("measure_prepare_dilution: q must lie in [0, 1]");
    std::vector<ComplexMatrix> ops;
    if (q < 1.0) {
        ComplexMatrix keep = ComplexMatrix::identity(d * d);
        keep *= Complex(std::sqrt(1.0 - q), 0.0);
        ops.push_back(keep);
    }
    if (q > 0.0) {
        const double w = std::sqrt(q);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) {
                // |i><i| on A composed with |i><k| on B: outcome i, B reset.
                ComplexMatrix ka(d, d), kb(d, d);
                ka(i, i) = w;
                kb(i, k) = 1.0;
                ops.push_back(kron(ka, kb));
            }
    }
    return KrausChannel::make(std::move(ops), d, d,
                              "measure-prepare(d=" + std::to_string(d) + ",q=" + std::to_string(q) + ")");
}

// Local isometric embedding C^{d_in} -> C^{d_out} on both shares (d_out >=
// d_in).  Used both as a dilution into a larger space and as the
// deliberately over-ambitious distillation leg.
inline KrausChannel embed_channel(std::size_t d_in, std::size_t d_out) {
    if (d_out < d_in)
        throw std::invalid_argument("embed_channel: d_out must be >= d_in");
    ComplexMatrix v(d_out, d_in);
    for (std::size_t i = 0; i < d_in; ++i) v(i, i) = 1.0;
    std::vector<ComplexMatrix> ops{kron(v, v)};
    return KrausChannel::make(std::move(ops), d_out, d_out,
                              "embed(" + std::to_string(d_in) + "->" + std::to_string(d_out) + ")");
}

// Both sides project onto the first d_out levels; on failure (either side
// lands outside) the parties reset to |00>.  Kraus form: V^dag tensor V^dag
// for the success branch plus |00><ik| over the rejected basis states.
inline KrausChannel project_reprepare_distill(std::size_t d, std::size_t d_out) {
    if (d_out == 0) throw std::invalid_argument("project_reprepare_distill: d_out must be >= 1");
    if (d_out > d)
        return embed_channel(d, d_out);
    ComplexMatrix vdag(d_out, d);
    for (std::size_t i = 0; i < d_out; ++i) vdag(i, i) = 1.0;
    std::vector<ComplexMatrix> ops{kron(vdag, vdag)};
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            if (i < d_out && k < d_out) continue;
            ComplexMatrix ka(d_out, d), kb(d_out, d);
            ka(0, i) = 1.0;
            kb(0, k) = 1.0;
            ops.push_back(kron(ka, kb));
        }
    return KrausChannel::make(std::move(ops), d_out, d_out,
                              "project-reprepare(" + std::to_string(d) + "->" + std::to_string(d_out) + ")");
}

} // namespace entlaw
