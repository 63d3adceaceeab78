#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "xcsit/harness.hpp"

using namespace xcsit;
namespace fs = std::filesystem;

namespace {

// Runs the library entry point capturing both streams.
struct LibResult {
    int code;
    std::string out;
    std::string err;
};

LibResult run_lib(const RunConfig& cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("xcsit-harness-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

// Invokes the installed CLI binary through the shell.
CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = temp_dir() / ("cli-out-" + std::to_string(counter));
    const fs::path err = temp_dir() / ("cli-err-" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(XCSIT_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

RunConfig base_config(RunConfig::Command cmd) {
    RunConfig cfg;
    cfg.command = cmd;
    cfg.timestamp = false;
    return cfg;
}

}  // namespace

TEST_CASE("classify reports the matched scheme") {
    RunConfig cfg = base_config(RunConfig::Command::Classify);
    cfg.pattern = parse_pattern("DD,PN,NP");
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const CsvDoc doc = parse_csv(res.out);
    REQUIRE(doc.columns == std::vector<std::string>{"pattern", "req1", "req2", "req3",
                                                    "matched_minimal", "scheme", "verdict"});
    REQUIRE(doc.rows.size() == 1);
    REQUIRE(doc.rows[0][0] == "DD,PN,NP");
    REQUIRE(doc.rows[0][1] == "1");
    REQUIRE(doc.rows[0][2] == "1");
    REQUIRE(doc.rows[0][3] == "1");
    REQUIRE(doc.rows[0][4] == "DD,PN,NP");
    REQUIRE(doc.rows[0][5] == "Scheme 1");
    REQUIRE(doc.rows[0][6] == "Synergistic");
}

TEST_CASE("classify json mirrors the csv content") {
    RunConfig cfg = base_config(RunConfig::Command::Classify);
    cfg.pattern = parse_pattern("NN,DD,PP");
    cfg.format = RunConfig::Format::Json;
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    REQUIRE(j.at("verdict") == "NotCovered");
    REQUIRE(j.at("scheme").is_null());
    REQUIRE(j.at("requirements").at("delayed_then_perfect") == true);
    REQUIRE(j.at("requirements").at("no_blind_slot") == false);
    REQUIRE(j.at("requirements").at("final_slot_perfect") == true);
    REQUIRE_FALSE(j.contains("generated"));  // timestamp suppressed
}

TEST_CASE("classify without a pattern is a validation error") {
    const LibResult res = run_lib(base_config(RunConfig::Command::Classify));
    REQUIRE(res.code == 2);
    REQUIRE(res.err.find("requires --pattern") != std::string::npos);
}

TEST_CASE("simulate trace decodes noiselessly and reproducibly") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.scheme = SchemeId::Scheme1;
    cfg.seed = 7;
    const LibResult a = run_lib(cfg);
    const LibResult b = run_lib(cfg);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
    const CsvDoc doc = parse_csv(a.out);
    REQUIRE(emit_csv(doc) == a.out);  // emit/parse fixed point
    bool saw_residual = false;
    for (const auto& row : doc.rows) {
        if (row[0] == "result" && row[1] == "residual") {
            saw_residual = true;
            REQUIRE(std::abs(std::stod(row[3])) < 1e-8);
        }
    }
    REQUIRE(saw_residual);
    // Sections appear in pipeline order with fixed sizes.
    int channel_rows = 0, plan_rows = 0, combined_rows = 0;
    for (const auto& row : doc.rows) {
        channel_rows += row[0] == "channel";
        plan_rows += row[0] == "plan";
        combined_rows += row[0] == "combined";
    }
    REQUIRE(channel_rows == 12);
    REQUIRE(plan_rows == 12);
    REQUIRE(combined_rows == 4);
}

TEST_CASE("simulate picks the covering scheme from a pattern") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.pattern = parse_pattern("DD,DD,PP");
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const CsvDoc doc = parse_csv(res.out);
    REQUIRE(doc.comments[0] == "scheme: Scheme 2 mirror");
    REQUIRE(doc.comments[1] == "pattern: DD,DD,PP");
}

TEST_CASE("simulate under an uncovered pattern fails validation") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.pattern = parse_pattern("NN,DD,PP");
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 2);
    REQUIRE(res.err.find("no scheme covers") != std::string::npos);
}

TEST_CASE("simulate rejects a scheme/pattern mismatch") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.scheme = SchemeId::Scheme1;
    cfg.pattern = parse_pattern("DD,NN,NP");
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 2);
    REQUIRE(res.err.find("does not dominate") != std::string::npos);
}

TEST_CASE("simulate json exposes the access log") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.scheme = SchemeId::Scheme2;
    cfg.format = RunConfig::Format::Json;
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    REQUIRE(j.at("residual").get<double>() < 1e-8);
    REQUIRE(j.at("access_log").size() == 8);  // four resurrection ratios
    for (const auto& rec : j.at("access_log")) {
        REQUIRE(rec.at("coeff_slot").get<int>() <= rec.at("access_slot").get<int>());
    }
}

TEST_CASE("tdm simulate decodes per slot") {
    RunConfig cfg = base_config(RunConfig::Command::Simulate);
    cfg.scheme = SchemeId::TdmBaseline;
    cfg.seed = 5;
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const CsvDoc doc = parse_csv(res.out);
    int decoded = 0;
    for (const auto& row : doc.rows) decoded += row[0] == "decoded";
    REQUIRE(decoded == 3);  // u1, v2, u2: one clean symbol per slot
}

TEST_CASE("dof sweep emits slope comment and one row per power") {
    RunConfig cfg = base_config(RunConfig::Command::DofSweep);
    cfg.scheme = SchemeId::TdmBaseline;
    cfg.trials = 100;
    cfg.powers_log2 = {20, 30, 40};
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const CsvDoc doc = parse_csv(res.out);
    REQUIRE(doc.rows.size() == 3);
    double slope = 0.0;
    bool saw_slope = false;
    for (const std::string& c : doc.comments) {
        if (c.rfind("slope: ", 0) == 0) {
            slope = std::stod(c.substr(7));
            saw_slope = true;
        }
    }
    REQUIRE(saw_slope);
    REQUIRE(slope > 0.9);
    REQUIRE(slope < 1.1);
    for (const auto& row : doc.rows) {
        REQUIRE(row[0] == "TDM baseline");
        REQUIRE(std::stoi(row[4]) == 100);
    }
}

TEST_CASE("dof sweep validates power exponents") {
    RunConfig cfg = base_config(RunConfig::Command::DofSweep);
    cfg.scheme = SchemeId::Scheme1;
    cfg.powers_log2 = {-3, 20};
    REQUIRE(run_lib(cfg).code == 2);
    cfg.powers_log2 = {20};
    REQUIRE(run_lib(cfg).code == 2);
    cfg.powers_log2 = {20, 30};
    cfg.trials = 0;
    REQUIRE(run_lib(cfg).code == 2);
}

TEST_CASE("enumerate writes atlas and summary files") {
    RunConfig cfg = base_config(RunConfig::Command::Enumerate);
    cfg.out = (temp_dir() / "atlas.csv").string();
    const LibResult res = run_lib(cfg);
    REQUIRE(res.code == 0);
    const CsvDoc atlas = parse_csv(slurp(cfg.out));
    REQUIRE(atlas.rows.size() == 729);
    const json summary = json::parse(slurp(cfg.out + ".summary.json"));
    REQUIRE(summary.at("counts").at("total") == 729);
    REQUIRE(summary.at("disagreements") == 0);
    const int synergistic = summary.at("counts").at("synergistic").get<int>();
    int verdicts = 0;
    for (const auto& row : atlas.rows) verdicts += row[6] == "Synergistic";
    REQUIRE(verdicts == synergistic);
    // Byte-identical rerun.
    RunConfig cfg2 = cfg;
    cfg2.out = (temp_dir() / "atlas2.csv").string();
    REQUIRE(run_lib(cfg2).code == 0);
    REQUIRE(slurp(cfg.out) == slurp(cfg2.out));
    REQUIRE(slurp(cfg.out + ".summary.json") == slurp(cfg2.out + ".summary.json"));
}

TEST_CASE("demo walks through the three base schemes") {
    RunConfig cfg = base_config(RunConfig::Command::Demo);
    cfg.seed = 7;
    const LibResult a = run_lib(cfg);
    REQUIRE(a.code == 0);
    REQUIRE(a.out.find("=== Scheme 1 ") != std::string::npos);
    REQUIRE(a.out.find("=== Scheme 2 ") != std::string::npos);
    REQUIRE(a.out.find("=== Scheme 3 ") != std::string::npos);
    REQUIRE(a.out.find("max residual") != std::string::npos);
    REQUIRE(a.out == run_lib(cfg).out);
    // Single-scheme variant.
    cfg.scheme = SchemeId::Scheme1Mirror;
    const LibResult b = run_lib(cfg);
    REQUIRE(b.out.find("=== Scheme 1 mirror ") != std::string::npos);
}

TEST_CASE("cli rejects a malformed pattern with the alphabet in the message") {
    const CliResult res = run_cli("classify --pattern XX,PN,NP --no-timestamp");
    REQUIRE(res.code == 2);
    REQUIRE(res.err.find("PP,PD,PN,DP,DD,DN,NP,ND,NN") != std::string::npos);
}

TEST_CASE("cli classify matches the library output") {
    const CliResult res = run_cli("classify --pattern DD,PN,NP --no-timestamp");
    REQUIRE(res.code == 0);
    RunConfig cfg = base_config(RunConfig::Command::Classify);
    cfg.pattern = parse_pattern("DD,PN,NP");
    REQUIRE(res.out == run_lib(cfg).out);
}

TEST_CASE("cli rejects unknown schemes and bad flags") {
    REQUIRE(run_cli("simulate --scheme scheme9").code == 2);
    REQUIRE(run_cli("frobnicate").code == 2);
    REQUIRE(run_cli("--help").code == 0);
}

TEST_CASE("cli classify honors the positional pattern form") {
    const CliResult res = run_cli("classify 'DD,DD,PP' --no-timestamp");
    REQUIRE(res.code == 0);
    REQUIRE(res.out.find("Scheme 2 mirror") != std::string::npos);
}
