// Command-line laboratory for the 3-slot alternating-CSIT X-channel:
// classify CSIT patterns, trace interference creation-resurrection blocks,
// sweep Monte-Carlo sum rates, enumerate the full pattern atlas, or print a
// worked demo.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "xcsit/xcsit.hpp"

namespace {

struct RawArgs {
    std::string pattern;
    std::string scheme;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 1;
    int trials = 2000;
    std::vector<double> powers = {20, 25, 30, 35, 40};
    double noise = 0.0;
    bool no_timestamp = false;
};

void add_common_flags(CLI::App* cmd, RawArgs& raw) {
    cmd->add_option("-o,--out", raw.out, "Write the report to this file instead of stdout");
    cmd->add_option("--format", raw.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--no-timestamp", raw.no_timestamp,
                  "Omit the generation-time comment (byte-reproducible output)");
}

// Translates parsed flags into a RunConfig, raising std::invalid_argument
// for anything malformed so every validation path exits with code 2.
xcsit::RunConfig to_config(xcsit::RunConfig::Command command, const RawArgs& raw) {
    xcsit::RunConfig cfg;
    cfg.command = command;
    if (!raw.pattern.empty()) cfg.pattern = xcsit::parse_pattern(raw.pattern);
    if (!raw.scheme.empty()) {
        const auto s = xcsit::parse_scheme(raw.scheme);
        if (!s)
            throw std::invalid_argument(
                "unknown scheme \"" + raw.scheme +
                "\" (valid: scheme1, scheme1m, scheme2, scheme2m, scheme3, scheme3m, tdm)");
        cfg.scheme = *s;
    }
    cfg.seed = raw.seed;
    cfg.trials = raw.trials;
    cfg.powers_log2 = raw.powers;
    cfg.noise_power = raw.noise;
    cfg.out = raw.out;
    cfg.format = raw.format == "json" ? xcsit::RunConfig::Format::Json
                                      : xcsit::RunConfig::Format::Csv;
    cfg.timestamp = !raw.no_timestamp;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alternating-CSIT X-channel laboratory"};
    app.require_subcommand(1);
    RawArgs raw;

    CLI::App* classify = app.add_subcommand(
        "classify", "Check one CSIT pattern against the coverage requirements");
    classify->add_option("PATTERN", raw.pattern, "CSIT pattern, e.g. \"DD,PN,NP\"");
    classify->add_option("-p,--pattern", raw.pattern, "CSIT pattern, e.g. \"DD,PN,NP\"")
        ->excludes("PATTERN");
    add_common_flags(classify, raw);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Trace one transmission block (channel, plan, receive, decode)");
    simulate->add_option("-p,--pattern", raw.pattern, "CSIT pattern the transmitters see");
    simulate->add_option("-s,--scheme", raw.scheme, "Scheme to run (default: pick from pattern)");
    simulate->add_option("--seed", raw.seed, "Seed for channel/symbol/noise draws");
    simulate->add_option("--noise", raw.noise, "Per-use noise power (default 0: noiseless)");
    add_common_flags(simulate, raw);

    CLI::App* sweep = app.add_subcommand(
        "dof-sweep", "Monte-Carlo sum-rate sweep and least-squares DoF slope");
    sweep->add_option("-s,--scheme", raw.scheme, "Scheme to sweep");
    sweep->add_option("-p,--pattern", raw.pattern, "Pick the scheme covering this pattern");
    sweep->add_option("--seed", raw.seed, "Base seed (common random numbers across powers)");
    sweep->add_option("--trials", raw.trials, "Channel draws per power point");
    sweep->add_option("--powers", raw.powers, "log2 of the power points")
        ->delimiter(',');
    add_common_flags(sweep, raw);

    CLI::App* enumerate = app.add_subcommand(
        "enumerate", "Classify all 729 patterns; writes atlas plus JSON summary");
    add_common_flags(enumerate, raw);

    CLI::App* demo = app.add_subcommand(
        "demo", "Readable walkthrough of the creation-resurrection schemes");
    demo->add_option("-s,--scheme", raw.scheme, "Walk through one scheme only");
    demo->add_option("--seed", raw.seed, "Seed for the walkthrough draws");
    add_common_flags(demo, raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    xcsit::RunConfig::Command command;
    if (classify->parsed())
        command = xcsit::RunConfig::Command::Classify;
    else if (simulate->parsed())
        command = xcsit::RunConfig::Command::Simulate;
    else if (sweep->parsed())
        command = xcsit::RunConfig::Command::DofSweep;
    else if (enumerate->parsed())
        command = xcsit::RunConfig::Command::Enumerate;
    else
        command = xcsit::RunConfig::Command::Demo;

    try {
        return xcsit::run(to_config(command, raw));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
