#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "entlaw/channels.hpp"
#include "entlaw/errors.hpp"
#include "entlaw/metrics.hpp"
#include "entlaw/protocols.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

// How approximation error is scored: "fidelity" uses infidelity 1 - F and
// combines via sine distances, "trace" uses normalized trace distance and
// combines additively.
enum class ErrorModel { fidelity, trace };

inline const char* to_string(ErrorModel m) {
    return m == ErrorModel::fidelity ? "fidelity" : "trace";
}

inline double combined_error(double e1, double e2, ErrorModel model) {
    if (e1 < 0.0 || e2 < 0.0) throw std::invalid_argument("combined_error: negative error");
    if (model == ErrorModel::fidelity) {
        const double s = std::sqrt(e1) + std::sqrt(e2);
        return s * s;
    }
    return e1 + e2;
}

// log2(1 / (1 - eps')): the entropy paid for finishing a cycle eps'-close.
inline double correction_term(double eps_prime) {
    if (!(eps_prime >= 0.0 && eps_prime < 1.0))
        throw std::invalid_argument("correction_term: argument must lie in [0, 1)");
    return std::log2(1.0 / (1.0 - eps_prime));
}

// First-order behaviour of the correction: exact value minus x / ln 2 is
// nonnegative and at most x^2 / (2 (1 - x) ln 2).
struct ExpansionCheck {
    double exact = 0.0;
    double linear = 0.0;
    double diff = 0.0;
    double quadratic_bound = 0.0;
    bool ok = false;
};

inline ExpansionCheck small_eps_expansion_check(double x) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("small_eps_expansion_check: argument must lie in [0, 1)");
    ExpansionCheck out;
    out.exact = correction_term(x);
    out.linear = x / std::log(2.0);
    out.diff = out.exact - out.linear;
    out.quadratic_bound = x * x / (2.0 * (1.0 - x) * std::log(2.0));
    out.ok = out.diff >= -1e-15 && out.diff <= out.quadratic_bound + 1e-15;
    return out;
}

inline double state_error(const BipartiteState& got, const BipartiteState& want,
                          ErrorModel model) {
    if (model == ErrorModel::fidelity) return std::max(0.0, 1.0 - fidelity(got, want));
    return trace_distance(got, want);
}

// Triangle slack for the sine distance; nonnegative up to roundoff.
inline double sine_triangle_slack(const BipartiteState& x, const BipartiteState& y,
                                  const BipartiteState& z) {
    return sine_distance(x, y) + sine_distance(y, z) - sine_distance(x, z);
}

// Data-processing slack: distances never grow under a channel.
inline double dp_slack(const KrausChannel& ch, const BipartiteState& rho,
                       const BipartiteState& sigma, ErrorModel model) {
    const BipartiteState a = apply_to_state(ch, rho);
    const BipartiteState b = apply_to_state(ch, sigma);
    if (model == ErrorModel::fidelity)
        return sine_distance(rho, sigma) - sine_distance(a, b);
    return trace_distance(rho, sigma) - trace_distance(a, b);
}

// Measuring the maximally entangled projector on a state omega that is
// eps-close in trace distance succeeds with probability at least 1 - eps.
inline double trace_lemma_slack(const BipartiteState& omega, std::size_t d) {
    const BipartiteState phi = max_entangled(d);
    return success_measurement(omega) - (1.0 - trace_distance(phi, omega));
}

// One dilution-then-distillation cycle through the target state rho:
//   Phi_{d_in}  --dilute-->  approx rho  --distill-->  approx Phi_{d_out},
// scored against  log2 d_out <= log2 d_in + correction(eps').
struct QuasiCycleReport {
    std::string label;
    ErrorModel model = ErrorModel::fidelity;
    std::size_t d_in = 0, d_out = 0;
    double eps_dilute = 0.0;
    double eps_distill = 0.0;
    double eps_combined = 0.0;
    bool combined_valid = false;  // eps_combined < 1, bound non-vacuous
    double input_bits = 0.0;
    double output_bits = 0.0;
    double correction_bits = 0.0;  // +inf when vacuous
    double slack_bits = 0.0;       // input + correction - output
    bool bound_holds = false;
    double eps_cycle = 0.0;  // composed map on Phi_{d_in} scored against Phi_{d_out}
    bool triangle_ok = false;
};

inline QuasiCycleReport simulate_quasi_cyclic(const KrausChannel& dilute,
                                              const KrausChannel& distill,
                                              const BipartiteState& rho, std::size_t d_in,
                                              std::size_t d_out, ErrorModel model) {
    const HermitianOperator& target = rho;
    if (dilute.in_dim() != d_in * d_in)
        throw std::invalid_argument("simulate_quasi_cyclic: dilution input is not d_in x d_in");
    if (dilute.out_dim() != target.dim())
        throw std::invalid_argument("simulate_quasi_cyclic: dilution output does not match rho");
    if (distill.in_dim() != target.dim())
        throw std::invalid_argument("simulate_quasi_cyclic: distillation input does not match rho");
    if (distill.out_dim() != d_out * d_out)
        throw std::invalid_argument("simulate_quasi_cyclic: distillation output is not d_out x d_out");

    const BipartiteState phi_in = max_entangled(d_in);
    const BipartiteState phi_out = max_entangled(d_out);

    QuasiCycleReport rep;
    rep.model = model;
    rep.d_in = d_in;
    rep.d_out = d_out;

    const BipartiteState diluted = apply_to_state(dilute, phi_in);
    rep.eps_dilute = state_error(diluted, rho, model);
    const BipartiteState distilled = apply_to_state(distill, rho);
    rep.eps_distill = state_error(distilled, phi_out, model);
    const BipartiteState cycled = apply_to_state(distill, diluted);
    rep.eps_cycle = state_error(cycled, phi_out, model);

    rep.eps_combined = combined_error(rep.eps_dilute, rep.eps_distill, model);
    rep.combined_valid = rep.eps_combined < 1.0;
    rep.input_bits = std::log2(static_cast<double>(d_in));
    rep.output_bits = std::log2(static_cast<double>(d_out));
    rep.correction_bits = rep.combined_valid ? correction_term(rep.eps_combined)
                                             : std::numeric_limits<double>::infinity();
    rep.slack_bits = rep.input_bits + rep.correction_bits - rep.output_bits;
    rep.bound_holds = !rep.combined_valid || rep.slack_bits >= -1e-9;

    if (model == ErrorModel::fidelity) {
        rep.triangle_ok = std::sqrt(rep.eps_cycle) <=
                          std::sqrt(rep.eps_dilute) + std::sqrt(rep.eps_distill) + 1e-9;
    } else {
        rep.triangle_ok = rep.eps_cycle <= rep.eps_dilute + rep.eps_distill + 1e-9;
    }
    return rep;
}

// The stock sweep: embed-then-noise dilutions into a mid-size system, target
// isotropic states of varying purity, project-and-reprepare distillations of
// matching, smaller and over-ambitious output sizes.
inline std::vector<QuasiCycleReport> standard_quasi_cycle_sweep(ErrorModel model) {
    std::vector<QuasiCycleReport> out;
    const double depol_levels[] = {0.05, 0.2};
    const double mp_levels[] = {0.1, 0.3};
    const double target_alphas[] = {1.0, 0.9, 0.7};

    for (std::size_t d_in : {std::size_t{2}, std::size_t{3}}) {
        const std::vector<std::size_t> mids =
            d_in == 2 ? std::vector<std::size_t>{2, 3} : std::vector<std::size_t>{3};
        for (std::size_t d_mid : mids) {
            std::vector<std::pair<std::string, KrausChannel>> dilutions;
            const KrausChannel embed = embed_channel(d_in, d_mid);
            dilutions.emplace_back("clean", embed);
            for (double p : depol_levels)
                dilutions.emplace_back("depol" + std::to_string(p).substr(0, 4),
                                       compose(depolarizing_dilution(d_mid, p), embed));
            for (double q : mp_levels)
                dilutions.emplace_back("mp" + std::to_string(q).substr(0, 3),
                                       compose(measure_prepare_dilution(d_mid, q), embed));

            for (const auto& [noise_label, dilute] : dilutions) {
                for (double alpha : target_alphas) {
                    const BipartiteState rho = isotropic_state(d_mid, alpha);
                    for (std::size_t d_out : {d_in, d_mid, d_mid + 1}) {
                        if (d_out == d_in && d_out == d_mid && alpha != target_alphas[0])
                            continue;  // skip a few redundant identity cycles
                        QuasiCycleReport rep = simulate_quasi_cyclic(
                            dilute, project_reprepare_distill(d_mid, d_out), rho, d_in, d_out,
                            model);
                        rep.label = "din" + std::to_string(d_in) + "_mid" + std::to_string(d_mid) +
                                    "_" + noise_label + "_a" + std::to_string(alpha).substr(0, 3) +
                                    "_dout" + std::to_string(d_out);
                        out.push_back(std::move(rep));
                    }
                }
            }
        }
    }
    return out;
}

struct SecondLawSummary {
    std::size_t runs = 0;
    std::size_t vacuous = 0;
    std::size_t violations = 0;
    std::size_t triangle_failures = 0;
    double min_slack_bits = std::numeric_limits<double>::infinity();
};

inline SecondLawSummary summarize(const std::vector<QuasiCycleReport>& reports) {
    SecondLawSummary s;
    for (const auto& r : reports) {
        ++s.runs;
        if (!r.combined_valid) {
            ++s.vacuous;
        } else {
            if (!r.bound_holds) ++s.violations;
            s.min_slack_bits = std::min(s.min_slack_bits, r.slack_bits);
        }
        if (!r.triangle_ok) ++s.triangle_failures;
    }
    return s;
}

} // namespace entlaw
