#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "entlaw/complex_matrix.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"

namespace entlaw {

// Eigenvalues within this of each other are treated as one eigenspace by the
// routines that split spectra (positive parts, boundary tests).
inline constexpr double eig_tie_tol = 1e-10;

// PSD inputs may dip this far below zero before they are rejected.
inline constexpr double psd_tol = 1e-10;

// Eigenvalue dust below this is clamped to zero inside matrix functions.
inline constexpr double eig_dust_tol = 1e-12;

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

// Cyclic complex Jacobi diagonalization.  Each (p,q) pair is killed by a
// phase rotation that makes the off-diagonal entry real followed by a plain
// Jacobi rotation; sweeps repeat until the off-diagonal Frobenius norm drops
// below 1e-13 * ||M||_F, with a hard cap of 100 sweeps.
inline EigenDecomposition hermitian_eig(const HermitianOperator& h) {
    const std::size_t n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double threshold = 1e-13 * scale;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    if (scale > 0.0) {
        const double skip = threshold / (8.0 * static_cast<double>(n));
        bool converged = false;
        for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double r = std::abs(a(p, q));
                    if (r <= skip) continue;
                    const Complex u = a(p, q) / r;
                    const double alpha = a(p, p).real();
                    const double beta = a(q, q).real();
                    const double tau = (alpha - beta) / (2.0 * r);
                    const double sg = (tau >= 0.0) ? 1.0 : -1.0;
                    const double t = sg / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;

                    // Rows p, q of a  (left-multiply by G^dag).
                    for (std::size_t j = 0; j < n; ++j) {
                        const Complex apj = a(p, j), aqj = a(q, j);
                        a(p, j) = c * apj + s * u * aqj;
                        a(q, j) = -s * apj + c * u * aqj;
                    }
                    // Columns p, q of a and of the accumulated basis.
                    const Complex uc = std::conj(u);
                    for (std::size_t i = 0; i < n; ++i) {
                        const Complex aip = a(i, p), aiq = a(i, q);
                        a(i, p) = c * aip + s * uc * aiq;
                        a(i, q) = -s * aip + c * uc * aiq;
                        const Complex vip = v(i, p), viq = v(i, q);
                        v(i, p) = c * vip + s * uc * viq;
                        v(i, q) = -s * vip + c * uc * viq;
                    }
                    a(p, q) = Complex(0.0, 0.0);
                    a(q, p) = Complex(0.0, 0.0);
                    a(p, p) = Complex(a(p, p).real(), 0.0);
                    a(q, q) = Complex(a(q, q).real(), 0.0);
                }
            }
            converged = off_norm() <= threshold;
        }
        if (!converged)
            throw NumericalError("hermitian_eig: Jacobi sweeps exhausted, off-diagonal residual " +
                                 std::to_string(off_norm()));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

inline double min_eigenvalue(const HermitianOperator& h) {
    const EigenDecomposition e = hermitian_eig(h);
    return e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
}

inline void require_psd(const HermitianOperator& h, const char* what, double tol = psd_tol) {
    if (h.dim() == 0) return;
    const double lo = min_eigenvalue(h);
    if (lo < -tol)
        throw std::invalid_argument(std::string(what) + ": operator is not PSD (min eigenvalue " +
                                    std::to_string(lo) + ")");
}

inline double trace_norm(const HermitianOperator& h) {
    const EigenDecomposition e = hermitian_eig(h);
    double s = 0.0;
    for (double lam : e.eigenvalues) s += std::abs(lam);
    return s;
}

inline double operator_norm(const HermitianOperator& h) {
    const EigenDecomposition e = hermitian_eig(h);
    double s = 0.0;
    for (double lam : e.eigenvalues) s = std::max(s, std::abs(lam));
    return s;
}

// Rebuild sum_k f(lambda_k) v_k v_k^dag in the operator's eigenbasis.
template <typename Fn>
inline ComplexMatrix spectral_map(const EigenDecomposition& e, Fn&& f) {
    const std::size_t n = e.eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = f(e.eigenvalues[k]);
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = e.eigenvectors(i, k);
            if (vik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j)
                out(i, j) += w * vik * std::conj(e.eigenvectors(j, k));
        }
    }
    return out;
}

// Principal square root of a PSD operator.  Eigenvalue dust below 1e-12 is
// clamped to zero; eigenvalues below -1e-10 reject the input.
inline HermitianOperator matrix_sqrt_psd(const HermitianOperator& h) {
    const EigenDecomposition e = hermitian_eig(h);
    if (!e.eigenvalues.empty() && e.eigenvalues.back() < -psd_tol)
        throw std::invalid_argument("matrix_sqrt_psd: operator is not PSD (min eigenvalue " +
                                    std::to_string(e.eigenvalues.back()) + ")");
    ComplexMatrix m = spectral_map(e, [](double lam) { return lam < eig_dust_tol ? 0.0 : std::sqrt(lam); });
    return h.has_bipartition() ? HermitianOperator(m, h.dim_a(), h.dim_b()) : HermitianOperator(m);
}

struct PositivePart {
    HermitianOperator part;       // sum of lambda v v^dag over lambda > tol
    HermitianOperator projector;  // sum of v v^dag over the same eigenspace
    double weight = 0.0;          // trace of `part`
};

// Strictly-positive spectral part, with eigenvalues above `tol` counted in.
inline PositivePart positive_part(const HermitianOperator& h, double tol = eig_tie_tol) {
    const EigenDecomposition e = hermitian_eig(h);
    PositivePart out;
    ComplexMatrix part = spectral_map(e, [&](double lam) { return lam > tol ? lam : 0.0; });
    ComplexMatrix proj = spectral_map(e, [&](double lam) { return lam > tol ? 1.0 : 0.0; });
    out.part = HermitianOperator(part);
    out.projector = HermitianOperator(proj);
    out.weight = out.part.trace();
    return out;
}

} // namespace entlaw
