#pragma once

#include <cmath>
#include <string>

#include "entlaw/eig.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"

namespace entlaw {

// Uhlmann fidelity ||sqrt(omega) sqrt(tau)||_1^2.  Accepts subnormalized PSD
// inputs (trace <= 1 + 1e-10); the raw value is validated against [0, 1] with
// 1e-9 slack and clamped.
inline double fidelity(const HermitianOperator& omega, const HermitianOperator& tau) {
    if (omega.dim() != tau.dim())
        throw std::invalid_argument("fidelity: dimension mismatch");
    if (omega.trace() > 1.0 + psd_tol || tau.trace() > 1.0 + psd_tol)
        throw std::invalid_argument("fidelity: inputs must have trace <= 1");
    const HermitianOperator s = matrix_sqrt_psd(omega);  // rejects non-PSD omega
    require_psd(tau, "fidelity");
    const ComplexMatrix inner = s.matrix() * tau.matrix() * s.matrix();
    const EigenDecomposition e = hermitian_eig(HermitianOperator(inner));
    double root_sum = 0.0;
    for (double lam : e.eigenvalues) {
        if (lam < eig_dust_tol) continue;  // clamp eigenvalue dust
        root_sum += std::sqrt(lam);
    }
    const double f = root_sum * root_sum;
    if (f < -1e-9 || f > 1.0 + 1e-9)
        throw NumericalError("fidelity: value " + std::to_string(f) + " outside [0, 1]");
    return std::min(1.0, std::max(0.0, f));
}

// Normalized trace distance (1/2) ||omega - tau||_1.
inline double trace_distance(const HermitianOperator& omega, const HermitianOperator& tau) {
    if (omega.dim() != tau.dim())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    return 0.5 * trace_norm(omega - tau);
}

// Sine distance sqrt(1 - F(omega, tau)).
inline double sine_distance(const HermitianOperator& omega, const HermitianOperator& tau) {
    const double f = fidelity(omega, tau);
    return std::sqrt(std::max(0.0, 1.0 - f));
}

} // namespace entlaw
