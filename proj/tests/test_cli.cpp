// End-to-end tests for the command-line tool: each case runs the real binary
// in a scratch directory and inspects exit code, stdout, stderr, and files.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "entlaw/state_io.hpp"
#include "entlaw/states.hpp"

using namespace entlaw;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        char tpl[] = "/tmp/entlaw_cli_XXXXXX";
        ASSERT_NE(mkdtemp(tpl), nullptr);
        dir_ = tpl;
    }

    void TearDown() override {
        const std::string cmd = "rm -rf " + dir_;
        ASSERT_EQ(std::system(cmd.c_str()), 0);
    }

    std::string path(const std::string& name) const { return dir_ + "/" + name; }

    RunResult run(const std::string& args) const {
        const std::string out_file = path("stdout.capture");
        const std::string err_file = path("stderr.capture");
        const std::string cmd = std::string(ENTLAW_CLI_PATH) + " " + args + " > " + out_file +
                                " 2> " + err_file;
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out_file);
        r.err = slurp(err_file);
        return r;
    }

    std::string dir_;
};

// First data line of a CSV report as a key -> value map.
std::vector<std::pair<std::string, std::string>> csv_row(const std::string& text) {
    std::istringstream in(text);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) out.push_back(cell);
        return out;
    };
    const std::vector<std::string> keys = split(header);
    const std::vector<std::string> vals = split(row);
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < keys.size(); ++i)
        out.emplace_back(keys[i], i < vals.size() ? vals[i] : "");
    return out;
}

std::string field(const std::string& text, const std::string& key) {
    for (const auto& [k, v] : csv_row(text))
        if (k == key) return v;
    return "<missing " + key + ">";
}

TEST_F(CliTest, GenStateWritesCanonicalFiles) {
    const RunResult r = run("gen-state --kind phi --d 2 --out " + path("bell.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::string text = slurp(path("bell.json"));
    EXPECT_EQ(text, write_state_file(make_state_file(max_entangled(2))));

    // Stdout emission matches the file byte for byte.
    const RunResult piped = run("gen-state --kind phi --d 2");
    EXPECT_EQ(piped.out, text);
}

TEST_F(CliTest, GenStateRandomRoundTrips) {
    const std::string f = path("rand.json");
    ASSERT_EQ(run("gen-state --kind random --dimA 3 --dimB 2 --seed 11 --out " + f).exit_code, 0);
    const std::string first = slurp(f);
    const StateFile parsed = parse_state_file(first);
    EXPECT_EQ(parsed.dim_a, 3u);
    EXPECT_EQ(parsed.dim_b, 2u);
    EXPECT_EQ(write_state_file(parsed), first);
}

TEST_F(CliTest, DhBellAgainstMaximallyMixed) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    ASSERT_EQ(
        run("gen-state --kind isotropic --d 2 --alpha 0.25 --out " + path("mixed.json")).exit_code,
        0);

    const RunResult r = run("dh " + path("bell.json") + " " + path("mixed.json") + " --eps 0");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(field(r.out, "value_bits"), "2");
    EXPECT_EQ(field(r.out, "crosscheck_method"), "lp");
    EXPECT_EQ(field(r.out, "crosscheck_delta_bits"), "0");
}

TEST_F(CliTest, DhEpsOneIsInfinite) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    ASSERT_EQ(
        run("gen-state --kind isotropic --d 2 --alpha 0.25 --out " + path("mixed.json")).exit_code,
        0);
    const RunResult r = run("dh " + path("bell.json") + " " + path("mixed.json") + " --eps 1");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(field(r.out, "value_bits"), "+inf");
    EXPECT_EQ(field(r.out, "type2_error"), "0");
}

TEST_F(CliTest, DhMalformedInputExitsTwoWithPosition) {
    spit(path("bad.json"), "{\n  \"schema_version\": \"1\",\n  oops\n}\n");
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    const RunResult r = run("dh " + path("bad.json") + " " + path("bell.json") + " --eps 0.5");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, DhDimensionMismatchExitsThree) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    ASSERT_EQ(run("gen-state --kind phi --d 3 --out " + path("phi3.json")).exit_code, 0);
    const RunResult r = run("dh " + path("bell.json") + " " + path("phi3.json") + " --eps 0.5");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.err.find("dimension mismatch"), std::string::npos) << r.err;
}

TEST_F(CliTest, DhLpRejectsNonCommutingPair) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    ASSERT_EQ(
        run("gen-state --kind random --dimA 2 --dimB 2 --seed 5 --out " + path("rand.json"))
            .exit_code,
        0);
    const RunResult r =
        run("dh " + path("rand.json") + " " + path("bell.json") + " --eps 0.1 --method lp");
    EXPECT_EQ(r.exit_code, 4);
    EXPECT_NE(r.err.find("commuting"), std::string::npos) << r.err;
}

TEST_F(CliTest, DhCsvAndJsonCarryIdenticalValues) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    ASSERT_EQ(
        run("gen-state --kind isotropic --d 2 --alpha 0.25 --out " + path("mixed.json")).exit_code,
        0);
    const std::string base = "dh " + path("bell.json") + " " + path("mixed.json") + " --eps 0.3";
    const RunResult csv = run(base + " --format csv");
    const RunResult json = run(base + " --format json");
    ASSERT_EQ(csv.exit_code, 0);
    ASSERT_EQ(json.exit_code, 0);
    for (const char* key : {"value_bits", "mu", "achieved_type1_error", "type2_error"}) {
        const std::string v = field(csv.out, key);
        EXPECT_NE(json.out.find("\"" + std::string(key) + "\": " + v), std::string::npos)
            << key << " = " << v << " missing from JSON:\n"
            << json.out;
    }
}

TEST_F(CliTest, RainsMaxEntangledAtHalfEps) {
    ASSERT_EQ(run("gen-state --kind phi --d 2 --out " + path("bell.json")).exit_code, 0);
    const RunResult r = run("rains " + path("bell.json") + " --eps 0.5");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(field(r.out, "value_bits"), "2");
    EXPECT_EQ(field(r.out, "method"), "reduced");
    // The optimizer sits on the membership boundary.
    EXPECT_EQ(field(r.out, "sigma_pt_trace_norm"), "1");
}

TEST_F(CliTest, RainsRandomStateSolvesCleanly) {
    ASSERT_EQ(
        run("gen-state --kind random --dimA 2 --dimB 2 --seed 5 --out " + path("rand.json"))
            .exit_code,
        0);
    const RunResult r = run("rains " + path("rand.json") + " --eps 0.1 --method sdp");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_GE(std::stod(field(r.out, "value_bits")), 0.0);
    EXPECT_LE(std::stod(field(r.out, "certified_gap")), 1e-8);
    EXPECT_LE(std::stod(field(r.out, "sigma_pt_trace_norm")), 1.0 + 1e-8);
    EXPECT_GE(std::stod(field(r.out, "sigma_psd_margin")), -1e-10);
}

TEST_F(CliTest, SecondlawIdentityCycleIsTight) {
    spit(path("spec.json"), "{\"protocol\": \"identity_cycle\", \"d\": 2}\n");
    const RunResult r = run("secondlaw " + path("spec.json"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("violations: 0"), std::string::npos) << r.out;

    // Header, one data row, one summary line.
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    EXPECT_EQ(lines, 3);
    EXPECT_EQ(field(r.out, "status"), "holds");
    EXPECT_EQ(field(r.out, "input_bits"), field(r.out, "output_bits"));
    EXPECT_LE(std::stod(field(r.out, "slack_bits")), 1e-12);
}

TEST_F(CliTest, SecondlawDepolarizingSweepHolds) {
    spit(path("spec.json"), "{\"protocol\": \"depolarizing_sweep\", \"d\": 2}\n");
    const RunResult r = run("secondlaw " + path("spec.json") + " --out " + path("rows.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("violations: 0"), std::string::npos);

    const std::string rows = slurp(path("rows.csv"));
    std::istringstream in(rows);
    std::string line;
    std::getline(in, line);  // header
    std::size_t holds = 0, vacuous = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(line.find("VIOLATION"), std::string::npos) << line;
        holds += line.find(",holds,") != std::string::npos;
        vacuous += line.find(",vacuous,") != std::string::npos;
    }
    EXPECT_EQ(holds + vacuous, 6u);
    // The strong-noise tail of the sweep is vacuous under the fidelity model.
    EXPECT_GE(vacuous, 1u);
}

TEST_F(CliTest, SecondlawUnknownProtocolExitsTwo) {
    spit(path("spec.json"), "{\"protocol\": \"bogus\"}\n");
    const RunResult r = run("secondlaw " + path("spec.json"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("unknown protocol"), std::string::npos) << r.err;
}

TEST_F(CliTest, OverMaxDimensionExitsThree) {
    const RunResult r = run("gen-state --kind phi --d 7 --out " + path("big.json"));
    EXPECT_EQ(r.exit_code, 3);
    ASSERT_EQ(run("gen-state --kind phi --d 3 --out " + path("phi3.json")).exit_code, 0);
    const RunResult read_capped =
        run("rains " + path("phi3.json") + " --eps 0.1 --max-dim 4");
    EXPECT_EQ(read_capped.exit_code, 3);
}

} // namespace
