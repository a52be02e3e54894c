#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "entlaw/complex_matrix.hpp"
#include "entlaw/eig.hpp"
#include "entlaw/errors.hpp"

namespace entlaw {

// -------------------------------------------------------------------------
// Problem description: minimize (or maximize) C . X subject to A_i . X = b_i
// with X a block-diagonal positive semidefinite matrix of real symmetric
// blocks.  Constraints are sparse lists of canonical entries (row <= col)
// of symmetric coefficient matrices; inequality constraints are encoded by
// the caller through explicit slack blocks.
// -------------------------------------------------------------------------

struct SdpConstraintEntry {
    std::size_t block = 0;
    std::size_t row = 0;  // canonical: row <= col
    std::size_t col = 0;
    double value = 0.0;   // symmetric matrix entry A[row][col] = A[col][row]
};

struct SdpConstraint {
    std::vector<SdpConstraintEntry> entries;
    double rhs = 0.0;
};

struct SdpProblem {
    std::vector<std::size_t> block_dims;
    std::vector<std::vector<double>> objective;  // dense row-major symmetric, one per block
    std::vector<SdpConstraint> constraints;
    bool maximize = false;
};

enum class SdpStatus { optimal, infeasible_dual, numerical_failure };

inline const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal: return "optimal";
        case SdpStatus::infeasible_dual: return "infeasible_dual";
        default: return "numerical_failure";
    }
}

struct SdpOptions {
    double gap_tol = 1e-8;    // |primal - dual| at termination
    double feas_tol = 1e-9;   // residual norms at termination
    int max_iters = 100;
    double step_frac = 0.98;  // fraction of the distance to the cone boundary
};

struct SdpSolution {
    SdpStatus status = SdpStatus::numerical_failure;
    std::vector<std::vector<double>> x;  // primal blocks
    std::vector<double> y;               // multipliers for the internal min form
    std::vector<std::vector<double>> s;  // dual slack blocks (internal min form)
    double primal_obj = 0.0;             // user-facing (sense applied)
    double dual_obj = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    double primal_residual = std::numeric_limits<double>::infinity();
    double dual_residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    // Smallest primal-minus-dual objective difference (internal min form) seen
    // over iterates whose residuals were already below 1e-7; weak duality says
    // this never drops meaningfully below zero.
    double weak_duality_margin = std::numeric_limits<double>::infinity();
};

// One-line residual summary for error messages and reports.
inline std::string residual_summary(const SdpSolution& s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "primal_residual=%.3e dual_residual=%.3e gap=%.3e iters=%d",
                  s.primal_residual, s.dual_residual, s.gap, s.iterations);
    return std::string(buf);
}

// Accumulates raw linear-functional coefficients sum f[r][c] X[r][c] and
// converts them to the canonical symmetric entry list.
class SdpConstraintBuilder {
public:
    void add(std::size_t block, std::size_t row, std::size_t col, double value) {
        if (value == 0.0) return;
        raw_[std::make_tuple(block, row, col)] += value;
    }

    SdpConstraint finalize(double rhs) const {
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> canon;
        for (const auto& [key, v] : raw_) {
            const auto [blk, r, c] = key;
            if (r <= c)
                canon[std::make_tuple(blk, r, c)] += (r == c) ? v : 0.5 * v;
            else
                canon[std::make_tuple(blk, c, r)] += 0.5 * v;
        }
        SdpConstraint out;
        out.rhs = rhs;
        for (const auto& [key, v] : canon) {
            if (v == 0.0) continue;
            const auto [blk, r, c] = key;
            out.entries.push_back({blk, r, c, v});
        }
        return out;
    }

private:
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> raw_;
};

namespace sdpdetail {

// Dense row-major helpers for one real symmetric block.

inline void matmul(std::size_t n, const std::vector<double>& a, const std::vector<double>& b,
                   std::vector<double>& out) {
    out.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a[i * n + k];
            if (aik == 0.0) continue;
            const double* brow = &b[k * n];
            double* orow = &out[i * n];
            for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
        }
}

// In-place lower Cholesky; returns false if the matrix is not positive
// definite.  Only the lower triangle of the result is meaningful.
inline bool cholesky(std::size_t n, std::vector<double>& a) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / ljj;
        }
    }
    return true;
}

// Inverse of a positive definite matrix from its lower Cholesky factor.
inline void inverse_from_cholesky(std::size_t n, const std::vector<double>& l,
                                  std::vector<double>& inv) {
    // Solve L z = e_k, then L^T w = z, column by column.
    inv.assign(n * n, 0.0);
    std::vector<double> z(n), w(n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * z[k];
            z[i] = v / l[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double v = z[ii];
            for (std::size_t k = ii + 1; k < n; ++k) v -= l[k * n + ii] * w[k];
            w[ii] = v / l[ii * n + ii];
        }
        for (std::size_t i = 0; i < n; ++i) inv[i * n + col] = w[i];
    }
    // Symmetrize away roundoff.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = v;
            inv[j * n + i] = v;
        }
}

inline bool solve_cholesky(std::size_t n, const std::vector<double>& l, std::vector<double>& rhs) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * rhs[k];
        rhs[i] = v / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = rhs[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l[k * n + ii] * rhs[k];
        rhs[ii] = v / l[ii * n + ii];
    }
    return true;
}

// Constraint entries expanded to both orientations for O(1) lookups.
struct ExpandedEntry {
    std::size_t block, row, col;
    double value;
};

} // namespace sdpdetail

inline void validate_problem(const SdpProblem& p) {
    const std::size_t nblocks = p.block_dims.size();
    if (nblocks == 0) throw std::invalid_argument("sdp: no blocks");
    if (p.objective.size() != nblocks)
        throw std::invalid_argument("sdp: objective block count mismatch");
    std::size_t dof = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = p.block_dims[b];
        if (n == 0) throw std::invalid_argument("sdp: empty block");
        if (p.objective[b].size() != n * n)
            throw std::invalid_argument("sdp: objective block shape mismatch");
        dof += n * (n + 1) / 2;
    }
    if (p.constraints.empty()) throw std::invalid_argument("sdp: no constraints");
    if (p.constraints.size() > dof)
        throw std::invalid_argument("sdp: more constraints (" + std::to_string(p.constraints.size()) +
                                    ") than degrees of freedom (" + std::to_string(dof) + ")");
    for (const SdpConstraint& c : p.constraints) {
        if (c.entries.empty()) throw std::invalid_argument("sdp: constraint with no entries");
        for (const SdpConstraintEntry& e : c.entries) {
            if (e.block >= nblocks) throw std::invalid_argument("sdp: entry block out of range");
            const std::size_t n = p.block_dims[e.block];
            if (e.row > e.col || e.col >= n)
                throw std::invalid_argument("sdp: entry indices not canonical (row <= col < dim)");
            if (!std::isfinite(e.value)) throw std::invalid_argument("sdp: non-finite entry");
        }
    }
}

// Writes the problem in a plain text form (block sizes, objective entries,
// constraint triplets) for offline inspection.
inline void dump_problem(const SdpProblem& p, std::ostream& os) {
    os << "sense " << (p.maximize ? "max" : "min") << "\n";
    os << "blocks";
    for (std::size_t n : p.block_dims) os << ' ' << n;
    os << "\n";
    for (std::size_t b = 0; b < p.objective.size(); ++b) {
        const std::size_t n = p.block_dims[b];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = p.objective[b][i * n + j];
                if (v != 0.0) os << "c " << b << ' ' << i << ' ' << j << ' ' << v << "\n";
            }
    }
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        os << "b " << i << ' ' << p.constraints[i].rhs << "\n";
        for (const SdpConstraintEntry& e : p.constraints[i].entries)
            os << "a " << i << ' ' << e.block << ' ' << e.row << ' ' << e.col << ' ' << e.value << "\n";
    }
}

inline SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {}) {
    using sdpdetail::ExpandedEntry;
    validate_problem(prob);

    const std::size_t nblocks = prob.block_dims.size();
    const std::size_t m = prob.constraints.size();
    std::size_t total_n = 0;
    for (std::size_t n : prob.block_dims) total_n += n;

    // Internal form is always a minimization.
    const double sense = prob.maximize ? -1.0 : 1.0;
    std::vector<std::vector<double>> cmat(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        cmat[b] = prob.objective[b];
        if (prob.maximize)
            for (double& v : cmat[b]) v = -v;
    }

    // Expanded (both-orientation) constraint entries, grouped per constraint.
    std::vector<std::vector<ExpandedEntry>> aexp(m);
    std::vector<double> bvec(m);
    for (std::size_t i = 0; i < m; ++i) {
        bvec[i] = prob.constraints[i].rhs;
        for (const SdpConstraintEntry& e : prob.constraints[i].entries) {
            aexp[i].push_back({e.block, e.row, e.col, e.value});
            if (e.row != e.col) aexp[i].push_back({e.block, e.col, e.row, e.value});
        }
    }

    auto dot_constraint = [&](std::size_t i, const std::vector<std::vector<double>>& blocks) {
        double s = 0.0;
        for (const ExpandedEntry& e : aexp[i])
            s += e.value * blocks[e.block][e.row * prob.block_dims[e.block] + e.col];
        return s;
    };

    auto dot_blocks = [&](const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b) {
        double s = 0.0;
        for (std::size_t blk = 0; blk < nblocks; ++blk)
            for (std::size_t k = 0; k < a[blk].size(); ++k) s += a[blk][k] * b[blk][k];
        return s;
    };

    // Starting point: X = S = tau I with tau from the problem scale.
    double normb = 0.0, normc = 0.0;
    for (double v : bvec) normb = std::max(normb, std::abs(v));
    for (const auto& c : cmat)
        for (double v : c) normc = std::max(normc, std::abs(v));
    const double tau = std::max({10.0, std::sqrt(static_cast<double>(total_n)), normb, normc});

    std::vector<std::vector<double>> X(nblocks), S(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = prob.block_dims[b];
        X[b].assign(n * n, 0.0);
        S[b].assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            X[b][i * n + i] = tau;
            S[b][i * n + i] = tau;
        }
    }
    std::vector<double> y(m, 0.0);

    SdpSolution sol;
    sol.x = X;
    sol.s = S;
    sol.y = y;

    auto finish = [&](SdpStatus st, double pobj_min, double dobj_min, double pres, double dres,
                      int iters) {
        sol.status = st;
        sol.x = X;
        sol.y = y;
        sol.s = S;
        sol.primal_obj = sense * pobj_min;
        sol.dual_obj = sense * dobj_min;
        sol.gap = std::abs(pobj_min - dobj_min);
        sol.primal_residual = pres;
        sol.dual_residual = dres;
        sol.iterations = iters;
        return sol;
    };

    // Scratch space.
    std::vector<std::vector<double>> Rd(nblocks), Xinv_unused, Sinv(nblocks), Lx(nblocks), Ls(nblocks);
    std::vector<std::vector<double>> dXa(nblocks), dSa(nblocks), dX(nblocks), dS(nblocks), tmp1(nblocks),
        tmp2(nblocks), rcmat(nblocks);
    std::vector<double> schur(m * m), rhs(m), dy(m), dya(m);

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // Residuals and objective values.
        double pres = 0.0;
        for (std::size_t i = 0; i < m; ++i) pres = std::max(pres, std::abs(bvec[i] - dot_constraint(i, X)));
        double dres = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t n = prob.block_dims[b];
            Rd[b] = cmat[b];
            for (std::size_t k = 0; k < n * n; ++k) Rd[b][k] -= S[b][k];
            for (std::size_t i = 0; i < m; ++i) {
                if (y[i] == 0.0) continue;
                for (const ExpandedEntry& e : aexp[i])
                    if (e.block == b) Rd[b][e.row * n + e.col] -= y[i] * e.value;
            }
            for (double v : Rd[b]) dres = std::max(dres, std::abs(v));
        }
        const double pobj = dot_blocks(cmat, X);
        double dobj = 0.0;
        for (std::size_t i = 0; i < m; ++i) dobj += bvec[i] * y[i];
        double mu = dot_blocks(X, S) / static_cast<double>(total_n);

        if (pres <= 1e-7 && dres <= 1e-7)
            sol.weak_duality_margin = std::min(sol.weak_duality_margin, pobj - dobj);

        if (pres <= opts.feas_tol && dres <= opts.feas_tol && std::abs(pobj - dobj) <= opts.gap_tol)
            return finish(SdpStatus::optimal, pobj, dobj, pres, dres, iter);

        // Unboundedness of the internal minimization shows up as the primal
        // objective diverging while staying (near) feasible.
        double xnorm = 0.0;
        for (const auto& xb : X)
            for (double v : xb) xnorm = std::max(xnorm, std::abs(v));
        if (xnorm > 1e14 || (pres <= 1e-6 && pobj < -1e13))
            return finish(SdpStatus::infeasible_dual, pobj, dobj, pres, dres, iter);
        if (!std::isfinite(mu) || !std::isfinite(pobj) || !std::isfinite(dobj))
            return finish(SdpStatus::numerical_failure, pobj, dobj, pres, dres, iter);

        // Factor the current iterate.
        bool ok = true;
        for (std::size_t b = 0; b < nblocks && ok; ++b) {
            Lx[b] = X[b];
            ok = sdpdetail::cholesky(prob.block_dims[b], Lx[b]);
            if (!ok) break;
            Ls[b] = S[b];
            ok = sdpdetail::cholesky(prob.block_dims[b], Ls[b]);
        }
        if (!ok) return finish(SdpStatus::numerical_failure, pobj, dobj, pres, dres, iter);
        for (std::size_t b = 0; b < nblocks; ++b)
            sdpdetail::inverse_from_cholesky(prob.block_dims[b], Ls[b], Sinv[b]);

        // Schur matrix M[i][j] = sum_blocks Tr[A_i X A_j S^{-1}].
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                double v = 0.0;
                for (const ExpandedEntry& ei : aexp[i]) {
                    const std::size_t n = prob.block_dims[ei.block];
                    const std::vector<double>& xb = X[ei.block];
                    const std::vector<double>& sib = Sinv[ei.block];
                    for (const ExpandedEntry& ej : aexp[j]) {
                        if (ej.block != ei.block) continue;
                        v += ei.value * ej.value * xb[ei.col * n + ej.row] * sib[ej.col * n + ei.row];
                    }
                }
                schur[i * m + j] = v;
                schur[j * m + i] = v;
            }
        std::vector<double> schur_l = schur;
        if (!sdpdetail::cholesky(m, schur_l)) {
            // Tiny ridge against near-dependence, then give up honestly.
            double ridge = 0.0;
            for (std::size_t i = 0; i < m; ++i) ridge = std::max(ridge, schur[i * m + i]);
            ridge = std::max(ridge, 1.0) * 1e-12;
            bool fixed = false;
            for (int attempt = 0; attempt < 3 && !fixed; ++attempt, ridge *= 100.0) {
                schur_l = schur;
                for (std::size_t i = 0; i < m; ++i) schur_l[i * m + i] += ridge;
                fixed = sdpdetail::cholesky(m, schur_l);
            }
            if (!fixed) return finish(SdpStatus::numerical_failure, pobj, dobj, pres, dres, iter);
        }

        // Direction solve shared by predictor and corrector:
        //   M dy = rp - A(Rc - X Rd Sinv),  dS = Rd - A^T dy,
        //   dX = sym(Rc - X dS Sinv).
        auto solve_direction = [&](const std::vector<std::vector<double>>& rc,
                                   std::vector<double>& dy_out,
                                   std::vector<std::vector<double>>& dx_out,
                                   std::vector<std::vector<double>>& ds_out) {
            for (std::size_t b = 0; b < nblocks; ++b) {
                const std::size_t n = prob.block_dims[b];
                sdpdetail::matmul(n, Rd[b], Sinv[b], tmp1[b]);
                sdpdetail::matmul(n, X[b], tmp1[b], tmp2[b]);  // X Rd Sinv
                tmp1[b] = rc[b];
                for (std::size_t k = 0; k < n * n; ++k) tmp1[b][k] -= tmp2[b][k];
            }
            for (std::size_t i = 0; i < m; ++i)
                rhs[i] = (bvec[i] - dot_constraint(i, X)) - dot_constraint(i, tmp1);
            dy_out = rhs;
            sdpdetail::solve_cholesky(m, schur_l, dy_out);
            for (std::size_t b = 0; b < nblocks; ++b) {
                const std::size_t n = prob.block_dims[b];
                ds_out[b] = Rd[b];
                for (std::size_t i = 0; i < m; ++i) {
                    if (dy_out[i] == 0.0) continue;
                    for (const ExpandedEntry& e : aexp[i])
                        if (e.block == b) ds_out[b][e.row * n + e.col] -= dy_out[i] * e.value;
                }
                sdpdetail::matmul(n, ds_out[b], Sinv[b], tmp1[b]);
                sdpdetail::matmul(n, X[b], tmp1[b], tmp2[b]);  // X dS Sinv
                dx_out[b].assign(n * n, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        const double v = rc[b][i * n + j] - tmp2[b][i * n + j];
                        dx_out[b][i * n + j] += 0.5 * v;
                        dx_out[b][j * n + i] += 0.5 * v;
                    }
            }
        };

        // Largest step in [0, 1] keeping base + alpha * dir positive definite.
        auto max_step = [&](const std::vector<std::vector<double>>& base,
                            const std::vector<std::vector<double>>& dir) {
            auto feasible = [&](double alpha) {
                for (std::size_t b = 0; b < nblocks; ++b) {
                    const std::size_t n = prob.block_dims[b];
                    tmp1[b] = base[b];
                    for (std::size_t k = 0; k < n * n; ++k) tmp1[b][k] += alpha * dir[b][k];
                    if (!sdpdetail::cholesky(n, tmp1[b])) return false;
                }
                return true;
            };
            if (feasible(1.0)) return 1.0;
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (feasible(mid))
                    lo = mid;
                else
                    hi = mid;
            }
            return lo;
        };

        // Predictor: aim at mu = 0.
        for (std::size_t b = 0; b < nblocks; ++b) {
            rcmat[b] = X[b];
            for (double& v : rcmat[b]) v = -v;
        }
        solve_direction(rcmat, dya, dXa, dSa);
        double ap_aff = max_step(X, dXa);
        double ad_aff = max_step(S, dSa);
        ap_aff = std::min(1.0, opts.step_frac * ap_aff);
        ad_aff = std::min(1.0, opts.step_frac * ad_aff);

        // Mehrotra centering weight.
        double mu_aff = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t n = prob.block_dims[b];
            tmp1[b] = X[b];
            tmp2[b] = S[b];
            for (std::size_t k = 0; k < n * n; ++k) {
                tmp1[b][k] += ap_aff * dXa[b][k];
                tmp2[b][k] += ad_aff * dSa[b][k];
            }
            for (std::size_t k = 0; k < n * n; ++k) mu_aff += tmp1[b][k] * tmp2[b][k];
        }
        mu_aff /= static_cast<double>(total_n);
        double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
        sigma = std::min(1.0, std::max(1e-8, sigma));

        // Corrector: Rc = sigma mu Sinv - X - dXa dSa Sinv.
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t n = prob.block_dims[b];
            sdpdetail::matmul(n, dSa[b], Sinv[b], tmp1[b]);
            sdpdetail::matmul(n, dXa[b], tmp1[b], tmp2[b]);
            rcmat[b].assign(n * n, 0.0);
            for (std::size_t k = 0; k < n * n; ++k)
                rcmat[b][k] = sigma * mu * Sinv[b][k] - X[b][k] - tmp2[b][k];
        }
        solve_direction(rcmat, dy, dX, dS);

        double ap = std::min(1.0, opts.step_frac * max_step(X, dX));
        double ad = std::min(1.0, opts.step_frac * max_step(S, dS));

        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t n = prob.block_dims[b];
            for (std::size_t k = 0; k < n * n; ++k) {
                X[b][k] += ap * dX[b][k];
                S[b][k] += ad * dS[b][k];
            }
            // Keep the iterates exactly symmetric.
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double xv = 0.5 * (X[b][i * n + j] + X[b][j * n + i]);
                    X[b][i * n + j] = xv;
                    X[b][j * n + i] = xv;
                    const double sv = 0.5 * (S[b][i * n + j] + S[b][j * n + i]);
                    S[b][i * n + j] = sv;
                    S[b][j * n + i] = sv;
                }
        }
        for (std::size_t i = 0; i < m; ++i) y[i] += ad * dy[i];
        sol.iterations = iter + 1;
    }

    // Iteration cap reached: report the final residuals honestly.
    double pres = 0.0;
    for (std::size_t i = 0; i < m; ++i) pres = std::max(pres, std::abs(bvec[i] - dot_constraint(i, X)));
    const double pobj = dot_blocks(cmat, X);
    double dobj = 0.0;
    for (std::size_t i = 0; i < m; ++i) dobj += bvec[i] * y[i];
    return finish(SdpStatus::numerical_failure, pobj, dobj, pres,
                  std::numeric_limits<double>::infinity(), opts.max_iters);
}

// -------------------------------------------------------------------------
// Independent certificate check: recomputes feasibility residuals and the
// duality gap from the problem data and the returned (X, y, S) only.
// -------------------------------------------------------------------------

struct SdpCertificate {
    double primal_residual = 0.0;   // max_i |A_i . X - b_i|
    double dual_residual = 0.0;     // max entry of |C - S - A^T y|
    double min_eig_x = 0.0;         // most negative eigenvalue across X blocks
    double min_eig_s = 0.0;
    double gap = 0.0;               // |C . X - b^T y|
    bool pass = false;
};

inline SdpCertificate verify_solution(const SdpProblem& prob, const SdpSolution& sol,
                                      double tol = 1e-8);

// Smallest eigenvalue of a dense real symmetric matrix, computed through the
// complex Hermitian eigensolver so the check shares no code with the solver's
// Cholesky-based internals.
inline double sym_min_eigenvalue(std::size_t n, const std::vector<double>& a) {
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = Complex(0.5 * (a[i * n + j] + a[j * n + i]), 0.0);
    return min_eigenvalue(HermitianOperator(h));
}

inline SdpCertificate verify_solution(const SdpProblem& prob, const SdpSolution& sol, double tol) {
    SdpCertificate cert;
    const std::size_t nblocks = prob.block_dims.size();
    const std::size_t m = prob.constraints.size();
    if (sol.x.size() != nblocks || sol.s.size() != nblocks || sol.y.size() != m)
        throw std::invalid_argument("verify_solution: solution shape mismatch");

    const double sense = prob.maximize ? -1.0 : 1.0;

    // Primal side: A_i . X = b_i and X PSD.
    for (std::size_t i = 0; i < m; ++i) {
        double v = -prob.constraints[i].rhs;
        for (const SdpConstraintEntry& e : prob.constraints[i].entries) {
            const std::size_t n = prob.block_dims[e.block];
            const double x_rc = sol.x[e.block][e.row * n + e.col];
            v += (e.row == e.col) ? e.value * x_rc : 2.0 * e.value * x_rc;
        }
        cert.primal_residual = std::max(cert.primal_residual, std::abs(v));
    }
    cert.min_eig_x = 0.0;
    cert.min_eig_s = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = prob.block_dims[b];
        cert.min_eig_x = std::min(cert.min_eig_x, sym_min_eigenvalue(n, sol.x[b]));
        cert.min_eig_s = std::min(cert.min_eig_s, sym_min_eigenvalue(n, sol.s[b]));
    }

    // Dual side: C_min - A^T y - S = 0 entrywise, S PSD.
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = prob.block_dims[b];
        std::vector<double> r(n * n);
        for (std::size_t k = 0; k < n * n; ++k) r[k] = sense * prob.objective[b][k] - sol.s[b][k];
        for (std::size_t i = 0; i < m; ++i) {
            if (sol.y[i] == 0.0) continue;
            for (const SdpConstraintEntry& e : prob.constraints[i].entries) {
                if (e.block != b) continue;
                r[e.row * n + e.col] -= sol.y[i] * e.value;
                if (e.row != e.col) r[e.col * n + e.row] -= sol.y[i] * e.value;
            }
        }
        for (double v : r) cert.dual_residual = std::max(cert.dual_residual, std::abs(v));
    }

    // Objective values and the gap.
    double pobj_min = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t n = prob.block_dims[b];
        for (std::size_t k = 0; k < n * n; ++k) pobj_min += sense * prob.objective[b][k] * sol.x[b][k];
    }
    double dobj_min = 0.0;
    for (std::size_t i = 0; i < m; ++i) dobj_min += prob.constraints[i].rhs * sol.y[i];
    cert.gap = std::abs(pobj_min - dobj_min);

    cert.pass = cert.primal_residual <= tol && cert.dual_residual <= tol && cert.gap <= tol &&
                cert.min_eig_x >= -tol && cert.min_eig_s >= -tol;
    return cert;
}

// Complex-to-real embedding: Hermitian H -> [[Re H, -Im H], [Im H, Re H]],
// a symmetric matrix whose spectrum repeats each eigenvalue of H twice.
inline std::vector<double> complex_embed(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<double> out(4 * n * n, 0.0);
    const std::size_t n2 = 2 * n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = h(i, j).real();
            const double im = h(i, j).imag();
            out[i * n2 + j] = re;
            out[(n + i) * n2 + (n + j)] = re;
            out[i * n2 + (n + j)] = -im;
            out[(n + i) * n2 + j] = im;
        }
    return out;
}

// Projects a real symmetric 2N x 2N matrix back to the Hermitian matrix whose
// embedding is nearest; exact inverse on matrices that are embeddings.
inline ComplexMatrix unembed_hermitian(const std::vector<double>& m, std::size_t n) {
    const std::size_t n2 = 2 * n;
    if (m.size() != n2 * n2) throw std::invalid_argument("unembed_hermitian: size mismatch");
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (m[i * n2 + j] + m[(n + i) * n2 + (n + j)]);
            const double im = 0.5 * (m[(n + i) * n2 + j] - m[i * n2 + (n + j)]);
            out(i, j) = Complex(re, im);
        }
    // Exact Hermitian symmetrization.
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = Complex(out(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
            out(i, j) = avg;
            out(j, i) = std::conj(avg);
        }
    }
    return out;
}

} // namespace entlaw
