#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entlaw/channels.hpp"
#include "entlaw/eig.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/hermitian.hpp"
#include "entlaw/hyptest.hpp"
#include "entlaw/sdp.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

inline constexpr double ppt_prime_tol = 1e-9;

// Membership in the set { sigma >= 0, || T_B sigma ||_1 <= 1 }.
struct PptPrimeCheck {
    bool member = false;
    double pt_trace_norm = 0.0;
    double min_eigenvalue = 0.0;
};

inline PptPrimeCheck ppt_prime_membership(const HermitianOperator& sigma,
                                          double tol = ppt_prime_tol) {
    require_bipartite(sigma, "ppt_prime_membership");
    PptPrimeCheck out;
    out.min_eigenvalue = min_eigenvalue(sigma);
    out.pt_trace_norm = trace_norm(partial_transpose_b(sigma));
    out.member = out.min_eigenvalue >= -tol && out.pt_trace_norm <= 1.0 + tol;
    return out;
}

// For isotropic operators alpha*Phi + beta*(I - Phi)/(d^2 - 1) the partial
// transpose has eigenvalues with known multiplicities, giving the closed form
//   || T_B sigma ||_1 = alpha + beta          if beta >= alpha (d - 1)
//                     = alpha * d             otherwise.
struct IsotropicRegionPoint {
    double pt_trace_norm = 0.0;
    bool member = false;
};

inline IsotropicRegionPoint isotropic_ppt_region(const IsotropicCoordinates& c,
                                                 double tol = ppt_prime_tol) {
    if (c.d == 0) throw std::invalid_argument("isotropic_ppt_region: d must be positive");
    if (c.alpha < 0.0 || c.beta < 0.0)
        throw std::invalid_argument("isotropic_ppt_region: coordinates must be nonnegative");
    if (c.d == 1 && c.beta != 0.0)
        throw std::invalid_argument("isotropic_ppt_region: d = 1 has no orthogonal component");
    const double d = static_cast<double>(c.d);
    IsotropicRegionPoint out;
    out.pt_trace_norm = (c.beta >= c.alpha * (d - 1.0)) ? c.alpha + c.beta : c.alpha * d;
    out.member = out.pt_trace_norm <= 1.0 + tol;
    return out;
}

inline double rains_closed_form_max_ent(std::size_t d, double eps) {
    if (d == 0) throw std::invalid_argument("rains_closed_form_max_ent: d must be positive");
    if (!(eps >= 0.0 && eps < 1.0))
        throw std::invalid_argument("rains_closed_form_max_ent: eps must lie in [0, 1)");
    return std::log2(static_cast<double>(d)) + std::log2(1.0 / (1.0 - eps));
}

struct RainsOptions {
    double eps_cap = 1e-6;          // eps above 1 - eps_cap is clamped down
    std::size_t max_sdp_dim = 36;   // refuse embeddings beyond this size
    bool validate_witness = true;   // re-score the extracted sigma via the NP test
    SdpOptions sdp;
};

struct RainsResult {
    double value_bits = 0.0;
    HermitianOperator optimizer_sigma;
    std::string method;             // "reduced", "sdp", or "sdp_support"
    std::string status = "ok";      // "ok" or "eps_capped"
    double eps_used = 0.0;
    double certified_gap = 0.0;     // objective-scale duality gap, 0 for analytic paths
    double witness_value_bits = std::numeric_limits<double>::quiet_NaN();
    std::optional<SdpCertificate> certificate;
};

// Exact optimizer over twirl-invariant states.  In isotropic coordinates the
// inner hypothesis test collapses to a segment of (kappa, lambda) pairs and
// the outer problem to a four-vertex polygon
//   { 0 <= alpha <= 1/d,  beta >= 0,  alpha + beta <= 1 },
// so the optimum of the concave piecewise-linear value sits at a vertex or at
// the kink line alpha = (a/b) beta.
inline RainsResult rains_isotropic_reduced(const BipartiteState& rho, double eps) {
    const HermitianOperator& op = rho;
    require_bipartite(op, "rains_isotropic_reduced");
    if (op.dim_a() != op.dim_b())
        throw std::invalid_argument("rains_isotropic_reduced: subsystems must have equal dimension");
    if (!(eps >= 0.0 && eps < 1.0))
        throw std::invalid_argument("rains_isotropic_reduced: eps must lie in [0, 1)");
    {
        const HermitianOperator tw = twirl(op);
        if ((tw - op).frobenius_norm() > 1e-9)
            throw std::invalid_argument("rains_isotropic_reduced: state is not twirl invariant");
    }

    const std::size_t d = op.dim_a();
    const double dd = static_cast<double>(d);
    const double L = dd * dd - 1.0;
    const HermitianOperator phi = max_entangled(d);
    const double a = std::clamp(hermitian_inner(phi, op), 0.0, 1.0);
    const double b = 1.0 - a;
    const double target = 1.0 - eps;

    double best_v = -1.0, best_alpha = 0.0, best_beta = 0.0;
    auto consider = [&](double alpha, double beta, double v) {
        if (v > best_v) {
            best_v = v;
            best_alpha = alpha;
            best_beta = beta;
        }
    };

    if (b <= 1e-14) {
        // rho is the maximally entangled state: the test weight on Phi is
        // pinned to 1 - eps and the orthogonal weight drops to zero.
        consider(1.0 / dd, (d > 1) ? (dd - 1.0) / dd : 0.0, target / dd);
    } else if (a <= 1e-14) {
        // rho orthogonal to Phi: the test ignores the Phi component entirely.
        consider(0.0, 1.0, target);
    } else {
        const double k_lo = std::max(0.0, (target - b) / a);
        const double k_hi = std::min(1.0, target / a);
        auto lam_of = [&](double k) { return (target - k * a) * L / b; };
        auto value_at = [&](double alpha, double beta) {
            const double f1 = k_lo * alpha + (L > 0.0 ? lam_of(k_lo) * beta / L : 0.0);
            const double f2 = k_hi * alpha + (L > 0.0 ? lam_of(k_hi) * beta / L : 0.0);
            return std::min(f1, f2);
        };
        std::vector<std::pair<double, double>> cand = {
            {0.0, 0.0}, {0.0, 1.0}, {1.0 / dd, (dd - 1.0) / dd}, {1.0 / dd, 0.0}};
        // Kink line alpha = (a/b) beta against the two nontrivial edges.
        {
            const double beta_edge = b / (a * dd);
            if (beta_edge <= (dd - 1.0) / dd + 1e-15) cand.emplace_back(1.0 / dd, beta_edge);
            if (a <= 1.0 / dd + 1e-15) cand.emplace_back(a, b);
        }
        for (const auto& [alpha, beta] : cand) consider(alpha, beta, value_at(alpha, beta));
    }

    if (best_v <= 0.0)
        throw NumericalError("rains_isotropic_reduced: nonpositive optimum");

    RainsResult out;
    out.method = "reduced";
    out.eps_used = eps;
    out.value_bits = -std::log2(best_v);
    out.optimizer_sigma =
        isotropic_operator({d, best_alpha, (d > 1) ? best_beta : 0.0}).with_bipartition(d, d);
    return out;
}

namespace rainsdetail {

// Position map of the partial transpose acting on the real embedding: the
// embedding commutes with transposing the B factor inside each quadrant.
struct EmbeddedPt {
    std::size_t n_complex, dim_a, dim_b;
    std::size_t operator()(std::size_t k, std::size_t other_b) const {
        const std::size_t quad = k / n_complex;
        const std::size_t i = k % n_complex;
        const std::size_t a = i / dim_b;
        return quad * n_complex + a * dim_b + other_b;
    }
    std::size_t b_of(std::size_t k) const { return (k % n_complex) % dim_b; }
};

inline HermitianOperator clamp_psd_bipartite(const ComplexMatrix& m, std::size_t da,
                                             std::size_t db) {
    const HermitianOperator h(m);
    const EigenDecomposition e = hermitian_eig(h);
    ComplexMatrix c = spectral_map(e, [](double lam) { return std::max(lam, 0.0); });
    return HermitianOperator(c).with_bipartition(da, db);
}

} // namespace rainsdetail

// One-shot Rains bound via a single SDP: jointly maximize (1-eps) mu - Tr[Z]
// over sigma = T_B(P - Q) with P, Q >= 0, Tr[P + Q] <= 1, sigma >= 0 and the
// hypothesis-test dual pair (mu, Z) satisfying mu rho - Z <= sigma.
inline RainsResult rains_general_sdp(const BipartiteState& rho, double eps,
                                     const RainsOptions& opts = {}) {
    const HermitianOperator& op = rho;
    require_bipartite(op, "rains_general_sdp");
    if (!(eps >= 0.0 && eps < 1.0))
        throw std::invalid_argument("rains_general_sdp: eps must lie in [0, 1)");
    const std::size_t nc = op.dim();
    if (nc > opts.max_sdp_dim)
        throw std::invalid_argument("rains_general_sdp: dimension " + std::to_string(nc) +
                                    " exceeds the solver limit " +
                                    std::to_string(opts.max_sdp_dim));

    RainsResult out;
    out.eps_used = eps;
    if (eps > 1.0 - opts.eps_cap) {
        out.eps_used = 1.0 - opts.eps_cap;
        out.status = "eps_capped";
    }
    const double target = 1.0 - out.eps_used;

    const std::size_t n = 2 * nc;
    const std::size_t da = op.dim_a(), db = op.dim_b();
    const rainsdetail::EmbeddedPt pt{nc, da, db};
    const std::vector<double> rho_e = complex_embed(op.matrix());

    SdpProblem prob;
    const bool support_form = (out.eps_used == 0.0);

    if (support_form) {
        // eps = 0: the optimal test is the support projector of rho, so
        // maximize Tr[Pi sigma] directly over sigma in the feasible set.
        const EigenDecomposition erho = hermitian_eig(op);
        ComplexMatrix proj = spectral_map(erho, [](double lam) { return lam > eig_tie_tol ? 1.0 : 0.0; });
        const std::vector<double> pi_e = complex_embed(proj);

        prob.block_dims = {n, n, n, 1};  // P, Q, sigma slack, trace slack
        prob.objective.assign(4, {});
        prob.objective[0].assign(n * n, 0.0);
        prob.objective[1].assign(n * n, 0.0);
        prob.objective[2].assign(n * n, 0.0);
        for (std::size_t k = 0; k < n * n; ++k) prob.objective[2][k] = 0.5 * pi_e[k];
        prob.objective[3].assign(1, 0.0);
        prob.maximize = true;

        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) {
                const std::size_t kp = pt(k, pt.b_of(l));
                const std::size_t lp = pt(l, pt.b_of(k));
                SdpConstraintBuilder cb;
                cb.add(0, kp, lp, 1.0);
                cb.add(1, kp, lp, -1.0);
                cb.add(2, k, l, -1.0);
                prob.constraints.push_back(cb.finalize(0.0));
            }
        {
            SdpConstraintBuilder cb;
            for (std::size_t k = 0; k < n; ++k) {
                cb.add(0, k, k, 0.5);
                cb.add(1, k, k, 0.5);
            }
            cb.add(3, 0, 0, 1.0);
            prob.constraints.push_back(cb.finalize(1.0));
        }
        out.method = "sdp_support";
    } else {
        prob.block_dims = {n, n, n, n, n, 1, 1};  // P, Q, Z, S1, S2, mu, s3
        prob.objective.assign(7, {});
        for (std::size_t blk = 0; blk < 5; ++blk) prob.objective[blk].assign(n * n, 0.0);
        for (std::size_t k = 0; k < n; ++k) prob.objective[2][k * n + k] = -0.5;
        prob.objective[5].assign(1, target);
        prob.objective[6].assign(1, 0.0);
        prob.maximize = true;

        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) {
                const std::size_t kp = pt(k, pt.b_of(l));
                const std::size_t lp = pt(l, pt.b_of(k));
                // T_B(P - Q) + Z - mu rho - S1 = 0
                SdpConstraintBuilder c1;
                c1.add(0, kp, lp, 1.0);
                c1.add(1, kp, lp, -1.0);
                c1.add(2, k, l, 1.0);
                c1.add(5, 0, 0, -rho_e[k * n + l]);
                c1.add(3, k, l, -1.0);
                prob.constraints.push_back(c1.finalize(0.0));
                // T_B(P - Q) - S2 = 0
                SdpConstraintBuilder c2;
                c2.add(0, kp, lp, 1.0);
                c2.add(1, kp, lp, -1.0);
                c2.add(4, k, l, -1.0);
                prob.constraints.push_back(c2.finalize(0.0));
            }
        {
            SdpConstraintBuilder cb;
            for (std::size_t k = 0; k < n; ++k) {
                cb.add(0, k, k, 0.5);
                cb.add(1, k, k, 0.5);
            }
            cb.add(6, 0, 0, 1.0);
            prob.constraints.push_back(cb.finalize(1.0));
        }
        out.method = "sdp";
    }

    const SdpSolution sol = solve_sdp(prob, opts.sdp);
    if (sol.status != SdpStatus::optimal)
        throw NumericalError(std::string("rains_general_sdp: solver status ") +
                             to_string(sol.status) + " (" + residual_summary(sol) + ")");
    out.certificate = verify_solution(prob, sol);
    out.certified_gap = sol.gap;

    const double g = sol.primal_obj;
    if (g <= 1e-300)
        throw NumericalError("rains_general_sdp: nonpositive objective value");
    out.value_bits = -std::log2(g);

    ComplexMatrix pm = unembed_hermitian(sol.x[0], nc);
    ComplexMatrix qm = unembed_hermitian(sol.x[1], nc);
    const HermitianOperator diff =
        (HermitianOperator(pm) - HermitianOperator(qm)).with_bipartition(da, db);
    out.optimizer_sigma =
        rainsdetail::clamp_psd_bipartite(partial_transpose_b(diff).matrix(), da, db);

    if (opts.validate_witness) {
        const HypothesisTestResult wit = dh_neyman_pearson(op, out.optimizer_sigma, out.eps_used);
        out.witness_value_bits = wit.value_bits;
    }
    return out;
}

// Routing used by the command line: twirl-invariant square states take the
// analytic path, everything else goes through the SDP.
inline RainsResult rains_auto(const BipartiteState& rho, double eps,
                              const RainsOptions& opts = {}) {
    const HermitianOperator& op = rho;
    if (op.dim_a() == op.dim_b() && eps < 1.0) {
        const HermitianOperator tw = twirl(op);
        if ((tw - op).frobenius_norm() <= 1e-9) return rains_isotropic_reduced(rho, eps);
    }
    return rains_general_sdp(rho, eps, opts);
}

} // namespace entlaw
