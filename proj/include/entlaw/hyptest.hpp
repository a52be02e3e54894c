#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "entlaw/eig.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"
#include "entlaw/sdp.hpp"

namespace entlaw {

inline constexpr double dh_infinity = std::numeric_limits<double>::infinity();

// Result of the binary hypothesis test optimization
//   minimize Tr[Lambda tau]  s.t.  Tr[Lambda omega] = 1 - eps,  0 <= Lambda <= I,
// reported as value_bits = -log2 of the optimal cost.
struct HypothesisTestResult {
    double value_bits = 0.0;
    double cost = 0.0;             // optimal Tr[Lambda tau]
    double achieved_type1 = 0.0;   // Tr[Lambda omega]
    double threshold_mu = 0.0;     // Neyman-Pearson threshold
    double boundary_weight = 0.0;  // fraction of the boundary eigenspace kept
    HermitianOperator test;        // the optimal Lambda
};

// Commuting-pair oracle: with omega and tau diagonal in a common basis the
// optimization is a fractional knapsack over the joint eigenvalues.  Weight
// is bought in order of decreasing p_i / q_i until 1 - eps is reached.
struct LpOracleResult {
    double value_bits = 0.0;
    double cost = 0.0;
    std::vector<double> lambda;
};

inline LpOracleResult dh_lp_oracle(const std::vector<double>& p, const std::vector<double>& q,
                                   double eps) {
    if (p.size() != q.size()) throw std::invalid_argument("dh_lp_oracle: size mismatch");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("dh_lp_oracle: eps must lie in [0, 1]");
    double psum = 0.0;
    for (double v : p) {
        if (v < -1e-12) throw std::invalid_argument("dh_lp_oracle: negative probability");
        psum += v;
    }
    if (std::abs(psum - 1.0) > 1e-8)
        throw std::invalid_argument("dh_lp_oracle: probabilities sum to " + std::to_string(psum));
    for (double v : q)
        if (v < -1e-12) throw std::invalid_argument("dh_lp_oracle: negative weight in q");

    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto ratio = [&](std::size_t i) {
        if (q[i] > 0.0) return p[i] / q[i];
        return p[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return ratio(i) > ratio(j); });

    LpOracleResult out;
    out.lambda.assign(p.size(), 0.0);
    double remaining = 1.0 - eps;
    for (std::size_t idx : order) {
        if (remaining <= 1e-15) break;
        if (p[idx] <= 0.0) continue;  // no progress, only cost
        const double take = std::min(1.0, remaining / p[idx]);
        out.lambda[idx] = take;
        out.cost += take * std::max(0.0, q[idx]);
        remaining -= take * p[idx];
    }
    out.value_bits = out.cost > 0.0 ? -std::log2(out.cost) : dh_infinity;
    return out;
}

namespace hypdetail {

// Diagonal weights <v_k| x |v_k> of x in the eigenbasis columns of vecs.
inline std::vector<double> basis_weights(const ComplexMatrix& vecs, const HermitianOperator& x) {
    const std::size_t n = vecs.rows();
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            Complex row(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) row += x.matrix()(i, j) * vecs(j, k);
            acc += std::conj(vecs(i, k)) * row;
        }
        w[k] = acc.real();
    }
    return w;
}

// Lambda = sum over kept eigenvectors + t * boundary eigenvectors.
inline HermitianOperator assemble_test(const EigenDecomposition& e,
                                       const std::vector<int>& kind, double t) {
    const std::size_t n = e.eigenvalues.size();
    ComplexMatrix lam(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = kind[k] > 0 ? 1.0 : (kind[k] == 0 ? t : 0.0);
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = e.eigenvectors(i, k);
            if (vik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j)
                lam(i, j) += w * vik * std::conj(e.eigenvectors(j, k));
        }
    }
    return HermitianOperator(lam);
}

} // namespace hypdetail

// Quantum Neyman-Pearson test: bisection over the threshold mu with the test
// P_+(omega - mu tau) plus a fractional weight t on the boundary eigenspace,
// tuned so Tr[Lambda omega] hits 1 - eps.
inline HypothesisTestResult dh_neyman_pearson(const HermitianOperator& omega,
                                              const HermitianOperator& tau, double eps) {
    if (omega.dim() != tau.dim())
        throw std::invalid_argument("dh_neyman_pearson: dimension mismatch");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("dh_neyman_pearson: eps must lie in [0, 1]");
    if (std::abs(omega.trace() - 1.0) > 1e-8)
        throw std::invalid_argument("dh_neyman_pearson: omega must have unit trace");
    require_psd(omega, "dh_neyman_pearson: omega");
    require_psd(tau, "dh_neyman_pearson: tau");

    const std::size_t n = omega.dim();
    const double target = 1.0 - eps;
    HypothesisTestResult out;

    if (eps >= 1.0 - 1e-15) {
        out.value_bits = dh_infinity;
        out.test = HermitianOperator(ComplexMatrix(n, n));
        return out;
    }

    const EigenDecomposition etau = hermitian_eig(tau);
    const double tau_max = etau.eigenvalues.empty() ? 0.0 : std::max(0.0, etau.eigenvalues.front());

    // Support projector path for eps ~ 0: keep exactly the support of omega.
    if (eps <= 1e-12) {
        const EigenDecomposition eom = hermitian_eig(omega);
        std::vector<int> kind(n, -1);
        for (std::size_t k = 0; k < n; ++k)
            if (eom.eigenvalues[k] > eig_tie_tol) kind[k] = 1;
        out.test = hypdetail::assemble_test(eom, kind, 0.0);
        out.cost = std::max(0.0, hermitian_inner(out.test, tau));
        out.achieved_type1 = hermitian_inner(out.test, omega);
        out.threshold_mu = 0.0;
        out.boundary_weight = 0.0;
        if (std::abs(out.achieved_type1 - target) > 1e-9)
            throw NumericalError("dh_neyman_pearson: support projector misses type-I target by " +
                                 std::to_string(std::abs(out.achieved_type1 - target)));
        out.value_bits = out.cost > 1e-300 ? -std::log2(out.cost) : dh_infinity;
        return out;
    }

    // Weight of omega on the kernel of tau: test operators supported there
    // are free, so enough kernel weight makes the optimal cost zero.
    const double ker_tol = std::max(1e-12 * std::max(1.0, tau_max), 1e-300);
    {
        ComplexMatrix pker = spectral_map(etau, [&](double lam) { return lam <= ker_tol ? 1.0 : 0.0; });
        const HermitianOperator proj(pker);
        const double w = hermitian_inner(proj, omega);
        if (w >= target - 1e-13) {
            const double c = std::min(1.0, target / std::max(w, 1e-300));
            out.test = c * proj;
            out.cost = 0.0;
            out.achieved_type1 = hermitian_inner(out.test, omega);
            out.value_bits = dh_infinity;
            return out;
        }
    }

    // Bracket the threshold.
    const EigenDecomposition eom = hermitian_eig(omega);
    const double om_max = eom.eigenvalues.empty() ? 0.0 : eom.eigenvalues.front();
    double tau_min_pos = tau_max;
    for (double lam : etau.eigenvalues)
        if (lam > ker_tol) tau_min_pos = std::min(tau_min_pos, lam);
    double mu_lo = 0.0;
    double mu_hi = om_max / std::max(tau_min_pos, 1e-300) + 1.0;

    struct Split {
        EigenDecomposition e;
        std::vector<int> kind;  // 1 above boundary, 0 boundary, -1 below
        std::vector<double> wom;
        double s_plus = 0.0, s_zero = 0.0;
    };
    auto split_at = [&](double mu) {
        Split sp;
        sp.e = hermitian_eig(omega - mu * tau);
        const double scale = std::max({1.0, std::abs(sp.e.eigenvalues.front()),
                                       std::abs(sp.e.eigenvalues.back())});
        const double btol = eig_tie_tol * scale;
        sp.kind.assign(n, -1);
        sp.wom = hypdetail::basis_weights(sp.e.eigenvectors, omega);
        for (std::size_t k = 0; k < n; ++k) {
            if (sp.e.eigenvalues[k] > btol)
                sp.kind[k] = 1;
            else if (sp.e.eigenvalues[k] >= -btol)
                sp.kind[k] = 0;
            if (sp.kind[k] > 0) sp.s_plus += sp.wom[k];
            if (sp.kind[k] == 0) sp.s_zero += sp.wom[k];
        }
        return sp;
    };

    // Grow the upper end until the strict-positive mass falls below target.
    for (int grow = 0; grow < 60; ++grow) {
        Split sp = split_at(mu_hi);
        if (sp.s_plus <= target) break;
        mu_hi *= 4.0;
        if (grow == 59)
            throw NumericalError("dh_neyman_pearson: failed to bracket the threshold");
    }

    auto finalize = [&](double mu, const Split& sp) -> bool {
        if (sp.s_plus > target + 1e-12) return false;
        if (sp.s_plus + sp.s_zero < target - 1e-12) return false;
        double t = 0.0;
        if (target > sp.s_plus) {
            if (sp.s_zero <= 0.0) return false;
            t = std::min(1.0, (target - sp.s_plus) / sp.s_zero);
        }
        HermitianOperator lam = hypdetail::assemble_test(sp.e, sp.kind, t);
        const double achieved = hermitian_inner(lam, omega);
        if (std::abs(achieved - target) > 1e-9) return false;
        out.test = lam;
        out.cost = std::max(0.0, hermitian_inner(lam, tau));
        out.achieved_type1 = achieved;
        out.threshold_mu = mu;
        out.boundary_weight = t;
        out.value_bits = out.cost > 1e-300 ? -std::log2(out.cost) : dh_infinity;
        return true;
    };

    for (int iter = 0; iter < 200; ++iter) {
        const double mu = 0.5 * (mu_lo + mu_hi);
        Split sp = split_at(mu);
        if (finalize(mu, sp)) return out;
        if (sp.s_plus >= target)
            mu_lo = mu;
        else
            mu_hi = mu;
        if (mu_hi - mu_lo <= 1e-14 * std::max(1.0, mu_hi)) {
            Split lo = split_at(mu_lo);
            if (finalize(mu_lo, lo)) return out;
            Split hi = split_at(mu_hi);
            if (finalize(mu_hi, hi)) return out;
        }
    }
    throw NumericalError("dh_neyman_pearson: bisection did not converge");
}

// SDP route for the same optimization, via the complex-to-real embedding.
// Requires 0 < eps < 1 so the feasible set has interior.
struct DhSdpResult {
    double value_bits = 0.0;
    double value_bits_dual = 0.0;
    HermitianOperator test;  // extracted Lambda
    SdpProblem problem;
    SdpSolution solution;
    SdpCertificate certificate;
};

inline DhSdpResult dh_sdp(const HermitianOperator& omega, const HermitianOperator& tau, double eps,
                          const SdpOptions& opts = {}) {
    if (omega.dim() != tau.dim())
        throw std::invalid_argument("dh_sdp: dimension mismatch");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("dh_sdp: eps must lie strictly inside (0, 1)");
    if (std::abs(omega.trace() - 1.0) > 1e-8)
        throw std::invalid_argument("dh_sdp: omega must have unit trace");

    const std::size_t nc = omega.dim();
    const std::size_t n = 2 * nc;  // embedded block size
    const std::vector<double> om_e = complex_embed(omega.matrix());
    const std::vector<double> tau_e = complex_embed(tau.matrix());

    DhSdpResult out;
    SdpProblem& prob = out.problem;
    prob.block_dims = {n, n, 1};  // Lambda, I - Lambda slack, type-I slack
    prob.objective.resize(3);
    prob.objective[0].assign(n * n, 0.0);
    for (std::size_t k = 0; k < n * n; ++k) prob.objective[0][k] = 0.5 * tau_e[k];
    prob.objective[1].assign(n * n, 0.0);
    prob.objective[2].assign(1, 0.0);
    prob.maximize = false;

    // Lambda + S = I, entrywise on the embedded block.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k; l < n; ++l) {
            SdpConstraintBuilder cb;
            cb.add(0, k, l, 1.0);
            cb.add(1, k, l, 1.0);
            prob.constraints.push_back(cb.finalize(k == l ? 1.0 : 0.0));
        }
    // Tr[Lambda omega] - s = 1 - eps.
    {
        SdpConstraintBuilder cb;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                cb.add(0, k, l, 0.5 * om_e[k * n + l]);
        cb.add(2, 0, 0, -1.0);
        prob.constraints.push_back(cb.finalize(1.0 - eps));
    }

    out.solution = solve_sdp(prob, opts);
    if (out.solution.status != SdpStatus::optimal)
        throw NumericalError(std::string("dh_sdp: solver status ") + to_string(out.solution.status) +
                             " (" + residual_summary(out.solution) + ")");
    out.certificate = verify_solution(prob, out.solution);

    const double pobj = out.solution.primal_obj;
    const double dobj = out.solution.dual_obj;
    out.value_bits = pobj > 1e-300 ? -std::log2(pobj) : dh_infinity;
    out.value_bits_dual = dobj > 1e-300 ? -std::log2(dobj) : dh_infinity;
    out.test = HermitianOperator(unembed_hermitian(out.solution.x[0], nc));
    return out;
}

} // namespace entlaw
