#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entlaw/hermitian.hpp"
#include "entlaw/states.hpp"

namespace entlaw {

// 12-significant-digit rendering shared by every report encoder, so the CSV
// and JSON copies of a run carry byte-identical numbers.
inline std::string format_sig12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "+inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

// Shortest decimal text that parses back to exactly the same double.  State
// files use this so a read/write cycle reproduces the file byte for byte.
// The sign of zero is dropped: parsing cannot restore it anyway.
inline std::string format_exact(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Unreadable or malformed state file.  line/column are 1-based when the
// failure has a concrete position in the text, zero otherwise (missing key,
// wrong value type).
class StateParseError : public std::runtime_error {
public:
    explicit StateParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(msg), line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

// Well-formed file whose dimensions or entry indices do not fit together.
class StateShapeError : public std::runtime_error {
public:
    explicit StateShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr const char* state_schema_version = "1";

// On-disk operator: Hermitian matrix on C^{dimA} tensor C^{dimB} stored as
// its lower triangle, one [row, col, re, im] quadruple per nonzero entry.
// Keeping only row >= col makes Hermiticity violations unrepresentable.
struct StateFile {
    std::string schema_version = state_schema_version;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    HermitianOperator op;
};

inline StateFile make_state_file(const HermitianOperator& op) {
    require_bipartite(op, "make_state_file");
    return StateFile{state_schema_version, op.dim_a(), op.dim_b(), op};
}

namespace iodetail {

// nlohmann reports failures as a 1-based byte offset; turn that into the
// 1-based line/column the exit-code contract wants.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = byte == 0 ? 0 : std::min(byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace iodetail

inline StateFile parse_state_file(const std::string& text, std::size_t max_dim = 4096) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = iodetail::line_column(text, e.byte);
        throw StateParseError(std::string("invalid JSON: ") + e.what(), line, col);
    } catch (const nlohmann::json::exception& e) {
        throw StateParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw StateParseError("state file: top level is not an object");
    if (!j.contains("schema_version") || !j["schema_version"].is_string())
        throw StateParseError("state file: missing or non-text schema_version");
    const std::string version = j["schema_version"].get<std::string>();
    if (version != state_schema_version)
        throw StateParseError("state file: unsupported schema_version \"" + version + "\"");
    for (const char* key : {"dimA", "dimB"})
        if (!j.contains(key) || !j[key].is_number_unsigned())
            throw StateParseError(std::string("state file: missing or non-count ") + key);
    const std::size_t dim_a = j["dimA"].get<std::size_t>();
    const std::size_t dim_b = j["dimB"].get<std::size_t>();
    if (dim_a == 0 || dim_b == 0) throw StateShapeError("state file: dimensions must be positive");
    if (max_dim == 0 || dim_a > max_dim / dim_b)
        throw StateShapeError("state file: dimension " + std::to_string(dim_a) + " x " +
                              std::to_string(dim_b) + " exceeds limit " + std::to_string(max_dim));
    if (!j.contains("entries") || !j["entries"].is_array())
        throw StateParseError("state file: missing entries list");

    const std::size_t n = dim_a * dim_b;
    ComplexMatrix m(n, n);
    std::vector<bool> seen(n * n, false);
    std::size_t idx = 0;
    for (const auto& e : j["entries"]) {
        const std::string where = "entries[" + std::to_string(idx) + "]";
        if (!e.is_array() || e.size() != 4)
            throw StateParseError("state file: " + where + " is not [row, col, re, im]");
        if (!e[0].is_number_unsigned() || !e[1].is_number_unsigned())
            throw StateParseError("state file: " + where + " row and col must be counts");
        if (!e[2].is_number() || !e[3].is_number())
            throw StateParseError("state file: " + where + " re and im must be numbers");
        const std::size_t row = e[0].get<std::size_t>();
        const std::size_t col = e[1].get<std::size_t>();
        if (row < col)
            throw StateParseError("state file: " + where + " lies above the diagonal (row < col)");
        if (row >= n)
            throw StateShapeError("state file: " + where + " row " + std::to_string(row) +
                                  " outside dimension " + std::to_string(n));
        if (seen[row * n + col])
            throw StateParseError("state file: duplicate entry for (" + std::to_string(row) + ", " +
                                  std::to_string(col) + ")");
        seen[row * n + col] = true;
        const double re = e[2].get<double>();
        const double im = e[3].get<double>();
        if (row == col && im != 0.0)
            throw StateParseError("state file: " + where + " diagonal entry must be real");
        m(row, col) = Complex(re, im);
        if (row != col) m(col, row) = Complex(re, -im);
        ++idx;
    }

    StateFile out;
    out.schema_version = version;
    out.dim_a = dim_a;
    out.dim_b = dim_b;
    out.op = HermitianOperator(m, dim_a, dim_b);
    return out;
}

inline StateFile read_state_file(const std::string& path, std::size_t max_dim = 4096) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StateParseError("cannot open state file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_state_file(buf.str(), max_dim);
}

// Canonical form: fixed key order, two-space indent, one entry per line in
// (row, col) order, exact zeros dropped, shortest-round-trip numbers.  Result
// is a fixed point of read-then-write.
inline std::string write_state_file(const StateFile& f) {
    if (f.op.dim() == 0 || f.op.dim() != f.dim_a * f.dim_b)
        throw std::invalid_argument("write_state_file: operator does not match declared dims");
    std::string out;
    out += "{\n";
    out += "  \"schema_version\": \"" + f.schema_version + "\",\n";
    out += "  \"dimA\": " + std::to_string(f.dim_a) + ",\n";
    out += "  \"dimB\": " + std::to_string(f.dim_b) + ",\n";
    std::vector<std::string> rows;
    for (std::size_t r = 0; r < f.op.dim(); ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            const Complex v = f.op(r, c);
            if (v.real() == 0.0 && v.imag() == 0.0) continue;
            rows.push_back("[" + std::to_string(r) + ", " + std::to_string(c) + ", " +
                           format_exact(v.real()) + ", " + format_exact(v.imag()) + "]");
        }
    if (rows.empty()) {
        out += "  \"entries\": []\n";
    } else {
        out += "  \"entries\": [\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            out += "    " + rows[i] + (i + 1 < rows.size() ? ",\n" : "\n");
        out += "  ]\n";
    }
    out += "}\n";
    return out;
}

inline void save_state_file(const std::string& path, const StateFile& f) {
    const std::string text = write_state_file(f);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_state_file: cannot open " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("save_state_file: write failed: " + path);
}

// Promote a file to a unit-trace PSD state; throws std::invalid_argument when
// the content is Hermitian but not a state.
inline BipartiteState as_state(const StateFile& f) { return BipartiteState::from_operator(f.op); }

enum class OutputFormat { csv, json };

inline const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

// Shared run settings for the command-line front end.
struct RunConfig {
    double tolerance = 1e-8;
    std::uint64_t seed = 1;
    std::size_t max_dim = 36;
    OutputFormat output_format = OutputFormat::csv;
};

inline void validate_config(const RunConfig& c) {
    if (!(c.tolerance > 0.0 && c.tolerance <= 1e-2))
        throw std::invalid_argument("config: tolerance must lie in (0, 1e-2]");
    if (c.max_dim == 0) throw std::invalid_argument("config: max_dim must be >= 1");
}

} // namespace entlaw
