// Command-line front end: one-shot hypothesis-testing divergence, Rains-set
// optimization, quasi-cyclic second-law sweeps, the release check battery,
// and a state-file generator.
//
// Exit codes: 0 success, 1 usage or internal error, 2 unparsable input file,
// 3 incompatible dimensions, 4 solver failure, 5 bound violation.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entlaw/acceptance.hpp"
#include "entlaw/state_io.hpp"

using namespace entlaw;

namespace {

// ---------------------------------------------------------------------------
// Report table.  Every subcommand fills rows of key/value fields; the same
// formatted values go verbatim into both the CSV and the JSON rendering, so
// the two formats always carry identical numbers.

struct Field {
    std::string key;
    std::string value;
    bool raw_json = false;  // value is already a valid JSON token
};

struct Row {
    std::vector<Field> fields;
};

Field fnum(const std::string& key, double v) {
    return {key, format_sig12(v), std::isfinite(v)};
}

Field fint(const std::string& key, long long v) {
    return {key, std::to_string(v), true};
}

Field ftext(const std::string& key, const std::string& v) {
    return {key, v, false};
}

Field fbool(const std::string& key, bool v) {
    return {key, v ? "true" : "false", true};
}

std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string render_csv(const std::vector<Row>& rows) {
    std::string out;
    const Row& head = rows.front();
    for (std::size_t i = 0; i < head.fields.size(); ++i) {
        if (i) out += ',';
        out += head.fields[i].key;
    }
    out += '\n';
    for (const Row& r : rows) {
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(r.fields[i].value);
        }
        out += '\n';
    }
    return out;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string render_json_row(const Row& r, const std::string& indent) {
    std::string out = "{\n";
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        const Field& f = r.fields[i];
        out += indent + "  " + json_quote(f.key) + ": ";
        out += f.raw_json ? f.value : json_quote(f.value);
        out += (i + 1 < r.fields.size()) ? ",\n" : "\n";
    }
    out += indent + "}";
    return out;
}

std::string render_json(const std::vector<Row>& rows) {
    if (rows.size() == 1) return render_json_row(rows.front(), "") + "\n";
    std::string out = "{\n  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += "    " + render_json_row(rows[i], "    ");
        out += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

void emit_report(const std::vector<Row>& rows, OutputFormat fmt, const std::string& out_path) {
    const std::string text =
        fmt == OutputFormat::csv ? render_csv(rows) : render_json(rows);
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + out_path);
}

// ---------------------------------------------------------------------------
// Input loading.

BipartiteState load_state(const std::string& path, std::size_t max_dim,
                          StateFile* file_out = nullptr) {
    const StateFile f = read_state_file(path, max_dim);
    if (file_out) *file_out = f;
    try {
        return as_state(f);
    } catch (const std::invalid_argument& e) {
        // Well-formed operator that is not a density matrix.
        throw StateShapeError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Divergence subcommand.

struct JointSpectra {
    bool ok = false;
    std::vector<double> p, q;
};

// Simultaneous spectra of a commuting pair.  The eigenbasis of a generic mix
// must diagonalize both; the off-diagonal mass it leaves behind is the check.
JointSpectra joint_spectra(const HermitianOperator& omega, const HermitianOperator& tau) {
    JointSpectra out;
    const ComplexMatrix& a = omega.matrix();
    const ComplexMatrix& b = tau.matrix();
    const double scale = std::max(1.0, a.frobenius_norm() * b.frobenius_norm());
    if ((a * b - b * a).frobenius_norm() > 1e-10 * scale) return out;

    const EigenDecomposition mix =
        hermitian_eig(HermitianOperator(a + 0.6180339887498949 * b));
    const std::size_t n = omega.dim();
    const ComplexMatrix va = mix.eigenvectors.adjoint() * a * mix.eigenvectors;
    const ComplexMatrix vb = mix.eigenvectors.adjoint() * b * mix.eigenvectors;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) off += std::norm(va(i, j)) + std::norm(vb(i, j));
    if (std::sqrt(off) > 1e-8 * scale) return out;

    out.p.resize(n);
    out.q.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.p[k] = va(k, k).real();
        out.q[k] = vb(k, k).real();
    }
    out.ok = true;
    return out;
}

// Marginal likelihood ratio of the cheapest outcome the optimal test buys.
double lp_threshold(const LpOracleResult& r, const std::vector<double>& p,
                    const std::vector<double>& q) {
    double mu = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.lambda.size(); ++i) {
        if (r.lambda[i] <= 1e-12) continue;
        const double ratio =
            q[i] > 1e-300 ? p[i] / q[i] : std::numeric_limits<double>::infinity();
        mu = std::min(mu, ratio);
    }
    return mu;
}

struct DhReport {
    std::string method;
    double value_bits = 0.0;
    double mu = 0.0;
    double type1_error = 0.0;
    double type2_error = 0.0;
    std::string crosscheck = "none";
    bool has_delta = false;
    double delta_bits = 0.0;
};

DhReport dh_np_report(const HermitianOperator& omega, const HermitianOperator& tau, double eps) {
    const HypothesisTestResult res = dh_neyman_pearson(omega, tau, eps);
    DhReport out;
    out.method = "np";
    out.value_bits = res.value_bits;
    out.mu = res.threshold_mu;
    out.type1_error = std::max(0.0, 1.0 - res.achieved_type1);
    out.type2_error = res.cost;
    return out;
}

DhReport dh_lp_report(const HermitianOperator& omega, const HermitianOperator& tau, double eps) {
    const JointSpectra js = joint_spectra(omega, tau);
    if (!js.ok)
        throw NumericalError("dh: --method lp needs commuting operators; use np or sdp");
    const LpOracleResult res = dh_lp_oracle(js.p, js.q, eps);
    double kept = 0.0;
    for (std::size_t i = 0; i < res.lambda.size(); ++i)
        kept += res.lambda[i] * std::max(0.0, js.p[i]);
    DhReport out;
    out.method = "lp";
    out.value_bits = res.value_bits;
    out.mu = lp_threshold(res, js.p, js.q);
    out.type1_error = std::max(0.0, 1.0 - kept);
    out.type2_error = res.cost;
    return out;
}

DhReport dh_sdp_report(const HermitianOperator& omega, const HermitianOperator& tau, double eps) {
    const DhSdpResult res = dh_sdp(omega, tau, eps);
    DhReport out;
    out.method = "sdp";
    out.value_bits = res.value_bits;
    // The type-I constraint is the last one; its multiplier is 1 / mu.
    const double inv_mu = res.solution.y.back();
    out.mu = inv_mu > 1e-300 ? 1.0 / inv_mu : std::numeric_limits<double>::infinity();
    out.type1_error = std::max(0.0, 1.0 - hermitian_inner(res.test, omega));
    out.type2_error = res.solution.primal_obj;
    return out;
}

DhReport dh_auto_report(const HermitianOperator& omega, const HermitianOperator& tau, double eps) {
    DhReport out = dh_np_report(omega, tau, eps);
    const JointSpectra js = joint_spectra(omega, tau);
    if (js.ok) {
        const LpOracleResult lp = dh_lp_oracle(js.p, js.q, eps);
        out.crosscheck = "lp";
        out.has_delta = true;
        out.delta_bits = acceptdetail::value_dev(out.value_bits, lp.value_bits);
    } else if (std::isfinite(out.value_bits) && eps > 0.0 && eps < 1.0 && omega.dim() <= 16) {
        // The sdp route cannot certify an infinite value, so it only serves
        // as a cross-check when the optimum is finite.
        const DhSdpResult sdp = dh_sdp(omega, tau, eps);
        out.crosscheck = "sdp";
        out.has_delta = true;
        out.delta_bits = acceptdetail::value_dev(out.value_bits, sdp.value_bits);
    }
    return out;
}

int cmd_dh(const std::string& path_a, const std::string& path_b, double eps,
           const std::string& method, const RunConfig& cfg, const std::string& out_path) {
    StateFile fa, fb;
    const BipartiteState omega = load_state(path_a, cfg.max_dim, &fa);
    const BipartiteState tau = load_state(path_b, cfg.max_dim, &fb);
    if (fa.dim_a != fb.dim_a || fa.dim_b != fb.dim_b)
        throw StateShapeError("dimension mismatch: " + path_a + " is " +
                              std::to_string(fa.dim_a) + "x" + std::to_string(fa.dim_b) +
                              " but " + path_b + " is " + std::to_string(fb.dim_a) + "x" +
                              std::to_string(fb.dim_b));

    DhReport rep;
    if (method == "np") {
        rep = dh_np_report(omega, tau, eps);
    } else if (method == "lp") {
        rep = dh_lp_report(omega, tau, eps);
    } else if (method == "sdp") {
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("dh: --method sdp needs 0 < eps < 1; use --method np");
        rep = dh_sdp_report(omega, tau, eps);
    } else {
        rep = dh_auto_report(omega, tau, eps);
    }

    Row row;
    row.fields = {
        ftext("method", rep.method),
        fnum("eps", eps),
        fnum("value_bits", rep.value_bits),
        fnum("mu", rep.mu),
        fnum("achieved_type1_error", rep.type1_error),
        fnum("type2_error", rep.type2_error),
        ftext("crosscheck_method", rep.crosscheck),
        rep.has_delta ? fnum("crosscheck_delta_bits", rep.delta_bits)
                      : ftext("crosscheck_delta_bits", ""),
    };
    emit_report({row}, cfg.output_format, out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// Rains subcommand.

int cmd_rains(const std::string& path, double eps, const std::string& method,
              const RunConfig& cfg, const std::string& out_path) {
    const BipartiteState rho = load_state(path, cfg.max_dim);
    RainsOptions opts;
    opts.max_sdp_dim = cfg.max_dim;

    RainsResult res;
    if (method == "reduced") {
        res = rains_isotropic_reduced(rho, eps);
    } else if (method == "sdp") {
        res = rains_general_sdp(rho, eps, opts);
    } else {
        res = rains_auto(rho, eps, opts);
    }

    double witness = res.witness_value_bits;
    if (std::isnan(witness))
        witness = dh_neyman_pearson(rho, res.optimizer_sigma, res.eps_used).value_bits;

    Row row;
    row.fields = {
        fnum("value_bits", res.value_bits),
        ftext("method", res.method),
        ftext("status", res.status),
        fnum("eps", eps),
        fnum("eps_used", res.eps_used),
        fnum("certified_gap", res.certified_gap),
        fnum("witness_value_bits", witness),
        fnum("sigma_pt_trace_norm", trace_norm(partial_transpose_b(res.optimizer_sigma))),
        fnum("sigma_psd_margin", min_eigenvalue(res.optimizer_sigma)),
    };
    emit_report({row}, cfg.output_format, out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// Second-law subcommand.

struct ProtocolSpec {
    std::string protocol;
    std::size_t d = 2;
    std::vector<double> p_values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
};

ProtocolSpec parse_protocol_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = iodetail::line_column(text, e.byte);
        throw StateParseError(std::string("invalid JSON: ") + e.what(), line, col);
    } catch (const nlohmann::json::exception& e) {
        throw StateParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw StateParseError("protocol spec: expected an object");
    if (!j.contains("protocol") || !j["protocol"].is_string())
        throw StateParseError("protocol spec: missing \"protocol\" string");

    ProtocolSpec out;
    out.protocol = j["protocol"].get<std::string>();
    if (out.protocol != "identity_cycle" && out.protocol != "depolarizing_sweep" &&
        out.protocol != "standard_sweep")
        throw StateParseError("protocol spec: unknown protocol \"" + out.protocol + "\"");
    if (j.contains("d")) {
        if (!j["d"].is_number_unsigned() || j["d"].get<std::size_t>() == 0)
            throw StateParseError("protocol spec: \"d\" must be a positive count");
        out.d = j["d"].get<std::size_t>();
    }
    if (j.contains("p_values")) {
        if (!j["p_values"].is_array() || j["p_values"].empty())
            throw StateParseError("protocol spec: \"p_values\" must be a nonempty array");
        out.p_values.clear();
        for (const auto& v : j["p_values"]) {
            if (!v.is_number())
                throw StateParseError("protocol spec: \"p_values\" entries must be numbers");
            const double p = v.get<double>();
            if (!(p >= 0.0 && p <= 1.0))
                throw StateParseError("protocol spec: noise levels must lie in [0, 1]");
            out.p_values.push_back(p);
        }
    }
    return out;
}

Row report_row(const QuasiCycleReport& r) {
    const char* status =
        !r.combined_valid ? "vacuous" : (r.bound_holds ? "holds" : "VIOLATION");
    Row row;
    row.fields = {
        ftext("label", r.label),
        ftext("model", to_string(r.model)),
        fint("d_in", static_cast<long long>(r.d_in)),
        fint("d_out", static_cast<long long>(r.d_out)),
        fnum("eps_dilute", r.eps_dilute),
        fnum("eps_distill", r.eps_distill),
        fnum("eps_combined", r.eps_combined),
        ftext("status", status),
        fnum("input_bits", r.input_bits),
        fnum("output_bits", r.output_bits),
        fnum("correction_bits", r.correction_bits),
        fnum("slack_bits", r.slack_bits),
        fnum("eps_cycle", r.eps_cycle),
        fbool("triangle_ok", r.triangle_ok),
    };
    return row;
}

int cmd_secondlaw(const std::string& spec_path, ErrorModel model, const RunConfig& cfg,
                  const std::string& out_path) {
    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw StateParseError("cannot open " + spec_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const ProtocolSpec spec = parse_protocol_spec(buf.str());
    if (spec.protocol != "standard_sweep" && (spec.d == 0 || spec.d > cfg.max_dim / spec.d))
        throw StateShapeError("protocol spec: d * d exceeds --max-dim " +
                              std::to_string(cfg.max_dim));

    std::vector<QuasiCycleReport> reports;
    if (spec.protocol == "identity_cycle") {
        QuasiCycleReport rep =
            simulate_quasi_cyclic(identity_channel(spec.d), identity_channel(spec.d),
                                  max_entangled(spec.d), spec.d, spec.d, model);
        rep.label = "identity_cycle_d" + std::to_string(spec.d);
        reports.push_back(std::move(rep));
    } else if (spec.protocol == "depolarizing_sweep") {
        for (double p : spec.p_values) {
            QuasiCycleReport rep = simulate_quasi_cyclic(
                depolarizing_dilution(spec.d, p), depolarizing_dilution(spec.d, p),
                max_entangled(spec.d), spec.d, spec.d, model);
            char lbl[64];
            std::snprintf(lbl, sizeof(lbl), "depol_d%zu_p%g", spec.d, p);
            rep.label = lbl;
            reports.push_back(std::move(rep));
        }
    } else {
        reports = standard_quasi_cycle_sweep(model);
    }

    std::vector<Row> rows;
    rows.reserve(reports.size());
    for (const QuasiCycleReport& r : reports) rows.push_back(report_row(r));
    emit_report(rows, cfg.output_format, out_path);

    const SecondLawSummary s = summarize(reports);
    std::printf("violations: %zu\n", s.violations);
    if (s.triangle_failures > 0)
        std::printf("triangle failures: %zu\n", s.triangle_failures);
    return (s.violations > 0 || s.triangle_failures > 0) ? 5 : 0;
}

// ---------------------------------------------------------------------------
// Release-check subcommand.

int cmd_verify(const RunConfig& cfg, bool tol_given, const std::string& out_path) {
    AcceptanceOptions opts;
    opts.seed = cfg.seed;
    if (tol_given) opts.tolerance_override = cfg.tolerance;

    const std::vector<CriterionResult> results =
        run_acceptance_battery(opts, [](const CriterionResult& r) {
            std::printf("[%s] %d. %s: %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.detail.c_str(), r.seconds);
            std::fflush(stdout);
        });

    std::size_t passed = 0;
    for (const CriterionResult& r : results) passed += r.passed ? 1 : 0;
    std::printf("%zu/%zu checks passed\n", passed, results.size());

    if (!out_path.empty()) {
        std::vector<Row> rows;
        for (const CriterionResult& r : results) {
            Row row;
            row.fields = {
                fint("id", r.id),
                ftext("name", r.name),
                ftext("status", r.passed ? "pass" : "fail"),
                fnum("seconds", r.seconds),
                ftext("detail", r.detail),
            };
            rows.push_back(std::move(row));
        }
        emit_report(rows, cfg.output_format, out_path);
    }
    return all_passed(results) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Generator subcommand.

int cmd_gen_state(const std::string& kind, std::size_t d, double alpha, std::size_t dim_a,
                  std::size_t dim_b, std::size_t rank, const RunConfig& cfg,
                  const std::string& out_path) {
    BipartiteState st = [&] {
        if (kind == "phi" || kind == "isotropic") {
            if (d == 0 || d > cfg.max_dim / d)
                throw StateShapeError("gen-state: d * d exceeds --max-dim " +
                                      std::to_string(cfg.max_dim));
            return kind == "phi" ? max_entangled(d) : isotropic_state(d, alpha);
        }
        if (dim_a == 0 || dim_b == 0 || dim_a > cfg.max_dim / dim_b)
            throw StateShapeError("gen-state: dimA * dimB exceeds --max-dim " +
                                  std::to_string(cfg.max_dim));
        return random_density(dim_a, dim_b, rank == 0 ? dim_a * dim_b : rank, cfg.seed);
    }();

    const StateFile f = make_state_file(st);
    if (out_path.empty())
        std::fputs(write_state_file(f).c_str(), stdout);
    else
        save_state_file(out_path, f);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-shot entanglement toolkit: hypothesis-testing divergence, "
                 "Rains-set optimization, and quasi-cyclic second-law checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string fmt_str = "csv";
    std::string out_path;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", cfg.tolerance, "numeric tolerance, in (0, 1e-2]")
            ->capture_default_str();
        cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        cmd->add_option("--max-dim", cfg.max_dim, "largest accepted total dimension")
            ->capture_default_str();
        cmd->add_option("--format", fmt_str, "report format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
    };

    std::string dh_a, dh_b, dh_method = "auto";
    double dh_eps = 0.0;
    CLI::App* dh = app.add_subcommand(
        "dh", "hypothesis-testing divergence between two states");
    dh->add_option("state_a", dh_a, "null-hypothesis state file")->required();
    dh->add_option("state_b", dh_b, "alternative state file")->required();
    dh->add_option("--eps", dh_eps, "type-I error budget, in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    dh->add_option("--method", dh_method, "np, lp, sdp, or auto")
        ->check(CLI::IsMember({"auto", "np", "lp", "sdp"}))
        ->capture_default_str();
    add_common(dh);

    std::string rains_path, rains_method = "auto";
    double rains_eps = 0.0;
    CLI::App* rains = app.add_subcommand(
        "rains", "eps-smoothed Rains-set divergence of a bipartite state");
    rains->add_option("state", rains_path, "state file")->required();
    rains->add_option("--eps", rains_eps, "smoothing parameter, in [0, 1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    rains->add_option("--method", rains_method, "reduced, sdp, or auto")
        ->check(CLI::IsMember({"auto", "reduced", "sdp"}))
        ->capture_default_str();
    add_common(rains);

    std::string sl_path, sl_mode = "fidelity";
    CLI::App* secondlaw = app.add_subcommand(
        "secondlaw", "run a dilution-distillation cycle and check the entropy bound");
    secondlaw->add_option("protocol_spec", sl_path, "protocol description file")->required();
    secondlaw->add_option("--mode", sl_mode, "error model")
        ->check(CLI::IsMember({"fidelity", "trace"}))
        ->capture_default_str();
    add_common(secondlaw);

    CLI::App* verify = app.add_subcommand("verify", "run the full release check battery");
    add_common(verify);

    std::string gen_kind;
    std::size_t gen_d = 2, gen_dim_a = 2, gen_dim_b = 2, gen_rank = 0;
    double gen_alpha = 1.0;
    CLI::App* gen = app.add_subcommand("gen-state", "write a state file");
    gen->add_option("--kind", gen_kind, "phi, isotropic, or random")
        ->required()
        ->check(CLI::IsMember({"phi", "isotropic", "random"}));
    gen->add_option("--d", gen_d, "local dimension for phi and isotropic")
        ->capture_default_str();
    gen->add_option("--alpha", gen_alpha, "isotropic overlap with phi, in [0, 1]")
        ->capture_default_str();
    gen->add_option("--dimA", gen_dim_a, "first factor of a random state")
        ->capture_default_str();
    gen->add_option("--dimB", gen_dim_b, "second factor of a random state")
        ->capture_default_str();
    gen->add_option("--rank", gen_rank, "rank of a random state, 0 for full")
        ->capture_default_str();
    add_common(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig run = cfg;
        run.output_format = fmt_str == "json" ? OutputFormat::json : OutputFormat::csv;
        validate_config(run);
        if (app.got_subcommand(dh))
            return cmd_dh(dh_a, dh_b, dh_eps, dh_method, run, out_path);
        if (app.got_subcommand(rains))
            return cmd_rains(rains_path, rains_eps, rains_method, run, out_path);
        if (app.got_subcommand(secondlaw))
            return cmd_secondlaw(
                sl_path, sl_mode == "trace" ? ErrorModel::trace : ErrorModel::fidelity, run,
                out_path);
        if (app.got_subcommand(verify))
            return cmd_verify(run, verify->count("--tol") > 0, out_path);
        if (app.got_subcommand(gen))
            return cmd_gen_state(gen_kind, gen_d, gen_alpha, gen_dim_a, gen_dim_b, gen_rank,
                                 run, out_path);
        std::fprintf(stderr, "error: no subcommand\n");
        return 1;
    } catch (const StateParseError& e) {
        if (e.line() > 0)
            std::fprintf(stderr, "error: %s (line %zu, column %zu)\n", e.what(), e.line(),
                         e.column());
        else
            std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const StateShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
