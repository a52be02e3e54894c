#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "entlaw/channels.hpp"
#include "entlaw/hyptest.hpp"
#include "entlaw/metrics.hpp"
#include "entlaw/protocols.hpp"
#include "entlaw/rains.hpp"
#include "entlaw/second_law.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

// One row of the release-gate battery.  The battery is shared by the
// standalone acceptance binary and the `verify` subcommand so both always
// agree on what "done" means.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    // 0 keeps each check's pinned tolerance; a positive value tightens every
    // agreement check to min(pinned, override).  Tightening below the pinned
    // values is expected to fail the solver-accuracy and Monte-Carlo checks.
    double tolerance_override = 0.0;
};

namespace acceptdetail {

inline double eff_tol(const AcceptanceOptions& o, double pinned) {
    return o.tolerance_override > 0.0 ? std::min(pinned, o.tolerance_override) : pinned;
}

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return std::string(buf);
}

// |a - b| treating a shared +inf as exact agreement.
inline double value_dev(double a, double b) {
    if (std::isinf(a) && std::isinf(b) && a == b) return 0.0;
    return std::abs(a - b);
}

// Solves and certificates accumulated while the battery runs, rechecked in
// the final criterion.
struct CertificateLog {
    std::vector<std::pair<SdpProblem, SdpSolution>> solves;
    std::vector<SdpCertificate> certificates;

    void add(const RainsResult& r) {
        if (r.certificate) certificates.push_back(*r.certificate);
    }
    void add(const DhSdpResult& r) { solves.emplace_back(r.problem, r.solution); }
};

// Probability vector of length n; every k-th call zeroes one coordinate so
// kernel handling gets exercised.
inline std::vector<double> random_simplex(std::size_t n, Rng& rng, bool with_zero) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
        v = -std::log(rng.uniform_open());
        sum += v;
    }
    if (with_zero && n > 1) {
        sum -= p[0];
        p[0] = 0.0;
    }
    for (double& v : p) v /= sum;
    return p;
}

inline HermitianOperator rotate_diag(const std::vector<double>& diag, const ComplexMatrix& u) {
    const std::size_t n = diag.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
    return HermitianOperator(u * m * u.adjoint());
}

// Haar-random channel on C^n with k Kraus operators, declared with the given
// output split: slice an n*k x n isometry out of a random unitary.
inline KrausChannel random_channel(std::size_t n, std::size_t k, std::size_t out_a,
                                   std::size_t out_b, std::uint64_t seed) {
    const ComplexMatrix u = random_unitary(n * k, seed);
    std::vector<ComplexMatrix> ops;
    ops.reserve(k);
    for (std::size_t e = 0; e < k; ++e) {
        ComplexMatrix ke(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) ke(r, c) = u(e * n + r, c);
        ops.push_back(std::move(ke));
    }
    return KrausChannel::make(std::move(ops), out_a, out_b, "haar");
}

// Random PPT' member: accept the raw draw when it already qualifies, else
// mix toward maximal mixing just far enough that the partial transpose turns
// PSD (trace norm then equals the trace, exactly 1).
inline BipartiteState random_ppt_prime_member(std::size_t d, std::uint64_t seed) {
    const std::size_t n = d * d;
    const BipartiteState rho = random_density(d, d, n, seed);
    if (ppt_prime_membership(rho).member) return rho;
    const double a = -min_eigenvalue(partial_transpose_b(rho.op()));
    const double t = std::min(1.0, (n * a) / (n * a + 1.0) * (1.0 + 1e-7));
    HermitianOperator id(ComplexMatrix::identity(n), d, d);
    return BipartiteState::from_operator((1.0 - t) * rho.op() + (t / n) * id);
}

} // namespace acceptdetail

inline CriterionResult criterion_closed_form(const AcceptanceOptions& o,
                                             acceptdetail::CertificateLog& log) {
    using namespace acceptdetail;
    const double tol_sdp = eff_tol(o, 1e-6), tol_red = eff_tol(o, 1e-8);
    double worst_sdp = 0.0, worst_red = 0.0;
    for (std::size_t d : {2, 3})
        for (double eps : {0.1, 0.3, 0.5, 0.9}) {
            const RainsResult r = rains_general_sdp(max_entangled(d), eps);
            worst_sdp = std::max(worst_sdp, value_dev(r.value_bits, rains_closed_form_max_ent(d, eps)));
            log.add(r);
        }
    for (std::size_t d : {2, 3, 4})
        for (double eps : {0.01, 0.1, 0.3, 0.5, 0.9}) {
            const RainsResult r = rains_isotropic_reduced(max_entangled(d), eps);
            worst_red = std::max(worst_red, value_dev(r.value_bits, rains_closed_form_max_ent(d, eps)));
        }
    CriterionResult res{1, "rains value vs closed form on maximally entangled inputs"};
    res.passed = worst_sdp <= tol_sdp && worst_red <= tol_red;
    res.detail = "sdp dev " + num(worst_sdp) + " (tol " + num(tol_sdp) + "), reduced dev " +
                 num(worst_red) + " (tol " + num(tol_red) + ")";
    return res;
}

inline CriterionResult criterion_ppt_region(const AcceptanceOptions& o) {
    using namespace acceptdetail;
    const double T = eff_tol(o, 1e-10);
    double worst = 0.0;
    for (std::size_t d : {2, 3, 4})
        for (int i = 0; i < 200; ++i)
            for (int j = 0; j < 200; ++j) {
                const IsotropicCoordinates c{d, i / 199.0, j / 199.0};
                const double formula = isotropic_ppt_region(c).pt_trace_norm;
                const double direct = trace_norm(partial_transpose_b(isotropic_operator(c)));
                worst = std::max(worst, std::abs(formula - direct));
            }
    double worst_boundary = 0.0;
    for (std::size_t d : {2, 3, 4}) {
        const IsotropicCoordinates c{d, 1.0 / d, (d - 1.0) / d};
        worst_boundary = std::max(worst_boundary,
                                  std::abs(isotropic_ppt_region(c).pt_trace_norm - 1.0));
    }
    CriterionResult res{2, "isotropic partial-transpose region: formula vs direct trace norm"};
    res.passed = worst <= T && worst_boundary <= T;
    res.detail = "grid dev " + num(worst) + ", boundary dev " + num(worst_boundary) + " (tol " +
                 num(T) + ")";
    return res;
}

inline CriterionResult criterion_dh_agreement(const AcceptanceOptions& o,
                                              acceptdetail::CertificateLog& log) {
    using namespace acceptdetail;
    const double tol_sdp = eff_tol(o, 1e-6), tol_lp = eff_tol(o, 1e-8), tol_self = eff_tol(o, 1e-9);
    const std::pair<std::size_t, std::size_t> splits[] = {{2, 2}, {2, 3}, {2, 4}, {3, 3}, {2, 5},
                                                          {3, 4}, {2, 7}, {3, 5}, {4, 4}};
    double worst_sdp = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto [da, db] = splits[i % 9];
        const std::size_t n = da * db;
        const BipartiteState omega = random_density(da, db, n, o.seed + 100 + 2 * i);
        const BipartiteState tau = random_density(da, db, n, o.seed + 101 + 2 * i);
        for (double eps : {0.1, 0.5}) {
            const double np = dh_neyman_pearson(omega, tau, eps).value_bits;
            const DhSdpResult sdp = dh_sdp(omega, tau, eps);
            worst_sdp = std::max(worst_sdp, value_dev(np, sdp.value_bits));
            log.add(sdp);
        }
    }

    Rng rng(o.seed, 7);
    const double eps_grid[] = {0.0, 0.1, 0.25, 0.5, 0.7};
    double worst_lp = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 3 + i % 6;
        const bool kernel = (i % 5 == 4);
        const std::vector<double> p = random_simplex(n, rng, false);
        const std::vector<double> q = random_simplex(n, rng, kernel);
        const ComplexMatrix u = random_unitary(n, o.seed + 300 + i);
        const HermitianOperator omega = rotate_diag(p, u);
        const HermitianOperator tau = rotate_diag(q, u);
        const double eps = eps_grid[i % 5];
        const double lp = dh_lp_oracle(p, q, eps).value_bits;
        const double np = dh_neyman_pearson(omega, tau, eps).value_bits;
        worst_lp = std::max(worst_lp, value_dev(lp, np));
    }

    double worst_self = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto [da, db] = splits[i % 9];
        const BipartiteState omega = random_density(da, db, da * db, o.seed + 500 + i);
        const double eps = eps_grid[1 + i % 4];
        const double got = dh_neyman_pearson(omega, omega, eps).value_bits;
        worst_self = std::max(worst_self, std::abs(got - std::log2(1.0 / (1.0 - eps))));
    }

    CriterionResult res{3, "hypothesis-test value: three-method agreement"};
    res.passed = worst_sdp <= tol_sdp && worst_lp <= tol_lp && worst_self <= tol_self;
    res.detail = "np-sdp dev " + num(worst_sdp) + " (tol " + num(tol_sdp) + "), np-lp dev " +
                 num(worst_lp) + " (tol " + num(tol_lp) + "), self dev " + num(worst_self) +
                 " (tol " + num(tol_self) + ")";
    return res;
}

inline CriterionResult criterion_twirl(const AcceptanceOptions& o) {
    using namespace acceptdetail;
    const double tol_mc = eff_tol(o, 0.1), tol_idem = eff_tol(o, 1e-12);
    double worst_mc = 0.0;
    for (std::size_t d : {2, 3}) {
        const HermitianOperator x = random_density(d, d, d * d, o.seed + 700 + d).op();
        const HermitianOperator diff = twirl(x) - twirl_sampled(x, 10000, o.seed + 710 + d);
        worst_mc = std::max(worst_mc, diff.frobenius_norm());
    }
    double worst_idem = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t d = 2 + i % 2;
        const HermitianOperator x = random_density(d, d, d * d, o.seed + 730 + i).op();
        const HermitianOperator once = twirl(x);
        worst_idem = std::max(worst_idem, (twirl(once) - once).frobenius_norm());
    }
    int stayed = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t d = 2 + i % 2;
        const BipartiteState sigma = random_ppt_prime_member(d, o.seed + 800 + i);
        if (ppt_prime_membership(HermitianOperator(twirl(sigma.op()))).member) ++stayed;
    }
    CriterionResult res{4, "twirl: sampled agreement, idempotence, ppt-prime preservation"};
    res.passed = worst_mc <= tol_mc && worst_idem <= tol_idem && stayed == 200;
    res.detail = "mc dev " + num(worst_mc) + " (tol " + num(tol_mc) + "), idem dev " +
                 num(worst_idem) + " (tol " + num(tol_idem) + "), members kept " +
                 std::to_string(stayed) + "/200";
    return res;
}

inline CriterionResult criterion_second_law(const AcceptanceOptions&) {
    std::size_t runs = 0, vacuous = 0, violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (ErrorModel model : {ErrorModel::fidelity, ErrorModel::trace}) {
        const SecondLawSummary s = summarize(standard_quasi_cycle_sweep(model));
        runs += s.runs;
        vacuous += s.vacuous;
        violations += s.violations;
        min_slack = std::min(min_slack, s.min_slack_bits);
    }
    CriterionResult res{5, "quasi-cyclic sweep: entanglement bound never violated"};
    res.passed = runs >= 100 && violations == 0;
    res.detail = std::to_string(runs) + " runs (" + std::to_string(vacuous) + " vacuous), " +
                 std::to_string(violations) + " violations, min slack " +
                 acceptdetail::num(min_slack) + " bits";
    return res;
}

inline CriterionResult criterion_distances(const AcceptanceOptions& o) {
    using namespace acceptdetail;
    const double T = eff_tol(o, 1e-8);
    double worst = 0.0;  // most negative slack seen, as a positive number
    auto track = [&](double slack) { worst = std::max(worst, -slack); };

    for (int i = 0; i < 1000; ++i) {
        const std::size_t da = 2, db = 2 + i % 2;
        track(sine_triangle_slack(random_density(da, db, da * db, o.seed + 3 * i + 1000),
                                  random_density(da, db, da * db, o.seed + 3 * i + 1001),
                                  random_density(da, db, da * db, o.seed + 3 * i + 1002)));
    }

    for (int i = 0; i < 200; ++i) {
        const KrausChannel ch = random_channel(4, 1 + i % 4, 2, 2, o.seed + 5000 + i);
        const BipartiteState rho = random_density(2, 2, 4, o.seed + 5500 + 2 * i);
        const BipartiteState sigma = random_density(2, 2, 4, o.seed + 5501 + 2 * i);
        track(dp_slack(ch, rho, sigma, ErrorModel::fidelity));
        const double eps = i % 2 == 0 ? 0.1 : 0.5;
        const double before = dh_neyman_pearson(rho, sigma, eps).value_bits;
        const double after = dh_neyman_pearson(HermitianOperator(apply(ch, rho.op())),
                                               HermitianOperator(apply(ch, sigma.op())), eps)
                                 .value_bits;
        track(before - after);
    }

    for (int i = 0; i < 1000; ++i) {
        const std::size_t d = 2 + i % 2;
        track(trace_lemma_slack(random_density(d, d, d * d, o.seed + 7000 + i), d));
    }

    CriterionResult res{6, "distance properties: triangle, data processing, success lemma"};
    res.passed = worst <= T;
    res.detail = "most negative slack " + num(-worst) + " (tol -" + num(T) + ")";
    return res;
}

inline CriterionResult criterion_protocol_soundness(const AcceptanceOptions& o,
                                                    acceptdetail::CertificateLog& log) {
    using namespace acceptdetail;
    const double T = eff_tol(o, 1e-6);
    std::vector<BipartiteState> inputs;
    inputs.push_back(max_entangled(2));
    inputs.push_back(max_entangled(3));
    inputs.push_back(isotropic_state(2, 0.85));
    inputs.push_back(isotropic_state(3, 0.8));
    inputs.push_back(random_density(2, 2, 4, o.seed + 9000));
    inputs.push_back(random_density(2, 2, 2, o.seed + 9001));

    double worst = -std::numeric_limits<double>::infinity();  // output_bits - bound
    int checked = 0;
    for (const BipartiteState& rho : inputs) {
        const std::size_t d = rho.op().dim_a();
        for (std::size_t m = 2; m <= d + 1; ++m) {
            const KrausChannel distill = project_reprepare_distill(d, m);
            const BipartiteState out = apply_to_state(distill, rho);
            const double eps = state_error(out, max_entangled(m), ErrorModel::fidelity);
            const RainsResult r = rains_general_sdp(rho, eps);
            log.add(r);
            worst = std::max(worst, std::log2(static_cast<double>(m)) - r.value_bits);
            ++checked;
        }
    }
    CriterionResult res{7, "distillation protocols never beat the rains bound"};
    res.passed = worst <= T;
    res.detail = std::to_string(checked) + " protocol runs, max (claimed - bound) " + num(worst) +
                 " bits (tol " + num(T) + ")";
    return res;
}

inline CriterionResult criterion_certificates(const AcceptanceOptions& o,
                                              const acceptdetail::CertificateLog& log) {
    using namespace acceptdetail;
    const double T = eff_tol(o, 1e-8);
    double worst_res = 0.0, worst_gap = 0.0;
    bool all_pass = true;
    for (const auto& [prob, sol] : log.solves) {
        const SdpCertificate c = verify_solution(prob, sol, T);
        all_pass = all_pass && c.pass;
        worst_res = std::max({worst_res, c.primal_residual, c.dual_residual});
        worst_gap = std::max(worst_gap, c.gap);
    }
    for (const SdpCertificate& c : log.certificates) {
        all_pass = all_pass && c.primal_residual <= T && c.dual_residual <= T && c.gap <= T &&
                   c.min_eig_x >= -T && c.min_eig_s >= -T;
        worst_res = std::max({worst_res, c.primal_residual, c.dual_residual});
        worst_gap = std::max(worst_gap, c.gap);
    }
    const std::size_t total = log.solves.size() + log.certificates.size();
    CriterionResult res{8, "solver certificates recheck clean"};
    res.passed = all_pass && total > 0;
    res.detail = std::to_string(total) + " solves, max residual " + num(worst_res) + ", max gap " +
                 num(worst_gap) + " (tol " + num(T) + ")";
    return res;
}

// Runs all criteria in order; the callback (when given) sees each result as
// soon as it is available.
inline std::vector<CriterionResult> run_acceptance_battery(
    const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = {}) {
    acceptdetail::CertificateLog log;
    std::vector<CriterionResult> results;
    auto push = [&](CriterionResult r, std::chrono::steady_clock::time_point t0) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    };
    using clock = std::chrono::steady_clock;
    auto t = clock::now();
    push(criterion_closed_form(options, log), t);
    t = clock::now();
    push(criterion_ppt_region(options), t);
    t = clock::now();
    push(criterion_dh_agreement(options, log), t);
    t = clock::now();
    push(criterion_twirl(options), t);
    t = clock::now();
    push(criterion_second_law(options), t);
    t = clock::now();
    push(criterion_distances(options), t);
    t = clock::now();
    push(criterion_protocol_soundness(options, log), t);
    t = clock::now();
    push(criterion_certificates(options, log), t);
    return results;
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results)
        if (!r.passed) return false;
    return !results.empty();
}

} // namespace entlaw
