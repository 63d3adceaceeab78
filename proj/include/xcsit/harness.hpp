#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xcsit/channel.hpp"
#include "xcsit/classifier.hpp"
#include "xcsit/csit.hpp"
#include "xcsit/decoder.hpp"
#include "xcsit/dof.hpp"
#include "xcsit/errors.hpp"
#include "xcsit/json_io.hpp"
#include "xcsit/report.hpp"
#include "xcsit/scheme.hpp"

namespace xcsit {

// Raised when an output file cannot be opened or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// One resolved invocation of the laboratory. The CLI fills this from flags;
// tests construct it directly.
struct RunConfig {
    enum class Command { Classify, Simulate, DofSweep, Enumerate, Demo };
    enum class Format { Csv, Json };

    Command command = Command::Classify;
    std::optional<CsitPattern> pattern;
    std::optional<SchemeId> scheme;
    std::uint64_t seed = 1;
    int trials = 2000;
    std::vector<double> powers_log2 = {20, 25, 30, 35, 40};
    double noise_power = 0.0;
    double eps = kDefaultEpsChan;
    std::string out;  // empty writes to the primary stream
    Format format = Format::Csv;
    bool timestamp = true;  // emit a generation-time comment/field
};

namespace detail {

// Seed streams for the different random objects a simulate run draws.
inline constexpr std::uint64_t kChannelStream = 1;
inline constexpr std::uint64_t kSymbolStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

inline std::string iso8601_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string format_complex(const Complex& c) {
    std::string s = format_double(c.real());
    s += (c.imag() < 0.0 ? "-" : "+");
    s += format_double(std::abs(c.imag()));
    s += "i";
    return s;
}

inline const char* verdict_name(bool synergistic) {
    return synergistic ? "Synergistic" : "NotCovered";
}

inline std::vector<std::string> pattern_row(const PatternReport& rep) {
    std::vector<std::string> row;
    row.push_back(to_string(rep.pattern));
    row.push_back(rep.requirements.delayed_then_perfect ? "1" : "0");
    row.push_back(rep.requirements.no_blind_slot ? "1" : "0");
    row.push_back(rep.requirements.final_slot_perfect ? "1" : "0");
    row.push_back(rep.match ? to_string(rep.match->matched) : "");
    row.push_back(rep.match ? display_name(rep.match->scheme) : "");
    row.push_back(verdict_name(rep.synergistic()));
    return row;
}

inline json pattern_json(const PatternReport& rep) {
    json j;
    j["pattern"] = to_string(rep.pattern);
    j["requirements"] = {{"delayed_then_perfect", rep.requirements.delayed_then_perfect},
                         {"no_blind_slot", rep.requirements.no_blind_slot},
                         {"final_slot_perfect", rep.requirements.final_slot_perfect}};
    j["matched_minimal"] = rep.match ? json(to_string(rep.match->matched)) : json(nullptr);
    j["scheme"] = rep.match ? json(display_name(rep.match->scheme)) : json(nullptr);
    j["verdict"] = verdict_name(rep.synergistic());
    return j;
}

inline json summary_json(const AtlasSummary& s) {
    json per_scheme;
    for (std::size_t k = 0; k < kIcrSchemes.size(); ++k)
        per_scheme[display_name(kIcrSchemes[k])] = s.per_scheme[k];
    return json{{"counts",
                 {{"total", s.total},
                  {"synergistic", s.synergistic},
                  {"requirements_met", s.requirements_met},
                  {"per_scheme", per_scheme}}},
                {"disagreements", s.disagreements}};
}

}  // namespace detail

inline constexpr std::array<const char*, 7> kAtlasColumns = {
    "pattern", "req1", "req2", "req3", "matched_minimal", "scheme", "verdict"};

// --- classify -------------------------------------------------------------

inline CsvDoc classify_doc(const PatternReport& rep) {
    CsvDoc doc;
    doc.columns.assign(kAtlasColumns.begin(), kAtlasColumns.end());
    doc.rows.push_back(detail::pattern_row(rep));
    return doc;
}

// --- enumerate ------------------------------------------------------------

inline CsvDoc atlas_doc(const PatternAtlas& atlas) {
    CsvDoc doc;
    doc.columns.assign(kAtlasColumns.begin(), kAtlasColumns.end());
    doc.rows.reserve(atlas.reports.size());
    for (const PatternReport& rep : atlas.reports) doc.rows.push_back(detail::pattern_row(rep));
    return doc;
}

inline json atlas_json(const PatternAtlas& atlas) {
    json arr = json::array();
    for (const PatternReport& rep : atlas.reports) arr.push_back(detail::pattern_json(rep));
    return json{{"patterns", std::move(arr)}, {"summary", detail::summary_json(atlas.summary)}};
}

// --- simulate -------------------------------------------------------------

// Everything one noiseless-or-noisy single-block run produces; the report
// emitters below walk this structure.
struct SimulationTrace {
    SchemeId scheme = SchemeId::Scheme1;
    CsitPattern pattern;
    std::uint64_t seed = 0;
    double noise_power = 0.0;
    ChannelRealization channel;
    SymbolVector symbols;
    TransmitPlan plan;
    TxSignals tx;
    ReceivedBlock block;
    std::vector<AccessRecord> access_log;
    // Combined observations, decoded symbols, and labels; TDM decodes
    // per-slot instead and leaves the combined list empty.
    std::vector<std::pair<std::string, Complex>> combined;
    std::vector<std::pair<std::string, Complex>> decoded;
    double residual = 0.0;
};

inline SimulationTrace run_simulation(SchemeId scheme, const CsitPattern& pattern,
                                      std::uint64_t seed, double noise_power,
                                      double eps = kDefaultEpsChan) {
    SimulationTrace tr;
    tr.scheme = scheme;
    tr.pattern = pattern;
    tr.seed = seed;
    tr.noise_power = noise_power;
    tr.channel = draw_channel(mix_seed(seed, detail::kChannelStream), eps);
    tr.symbols = draw_symbols(mix_seed(seed, detail::kSymbolStream));
    CsitView view(tr.channel, pattern);
    tr.plan = build_plan(scheme, view);
    tr.access_log = view.log();
    tr.tx = transmit(tr.plan, tr.symbols);
    tr.block = apply_channel(tr.tx, tr.channel, noise_power, mix_seed(seed, detail::kNoiseStream));
    if (is_icr(scheme)) {
        const SchemeDecoder dec = assemble_effective_system(scheme, tr.channel);
        for (int rx = 0; rx < 2; ++rx)
            for (int r = 0; r < 2; ++r) {
                Complex val = 0.0;
                for (int t = 0; t < 3; ++t) val += dec.recipe.rx[rx][r].w[t] * tr.block.y[rx][t];
                tr.combined.emplace_back(dec.recipe.rx[rx][r].label, val);
            }
        const DecodeResult res = decode(dec, tr.block, &tr.symbols);
        tr.decoded = {{"u1_hat", res.symbols.u1},
                      {"u2_hat", res.symbols.u2},
                      {"v1_hat", res.symbols.v1},
                      {"v2_hat", res.symbols.v2}};
        tr.residual = *res.residual;
    } else {
        // TDM: each slot carries one clean symbol; its receiver divides off
        // the (globally known) channel gain.
        tr.residual = 0.0;
        for (int slot = 0; slot < 3; ++slot)
            for (int g = 0; g < 2; ++g)
                for (int tx = 0; tx < 2; ++tx)
                    if (tr.plan.f[g][tx][slot] != Complex(0.0)) {
                        const int rx = g;
                        const Complex gain = tr.channel.at(rx, tx, slot) * tr.plan.f[g][tx][slot];
                        const Complex hat = tr.block.y[rx][slot] / gain;
                        const char* names[2][2] = {{"u1_hat", "u2_hat"}, {"v1_hat", "v2_hat"}};
                        tr.decoded.emplace_back(names[g][tx], hat);
                        tr.residual = std::max(tr.residual, std::abs(hat - tr.symbols.at(g, tx)));
                    }
    }
    return tr;
}

inline CsvDoc simulate_doc(const SimulationTrace& tr) {
    CsvDoc doc;
    doc.comments.push_back(std::string("scheme: ") + display_name(tr.scheme));
    doc.comments.push_back("pattern: " + to_string(tr.pattern));
    doc.comments.push_back("seed: " + std::to_string(tr.seed));
    doc.comments.push_back("noise_power: " + format_double(tr.noise_power));
    doc.columns = {"section", "name", "slot", "re", "im"};
    const auto push = [&doc](const char* section, const std::string& name, int slot,
                             const Complex& v) {
        doc.rows.push_back({section, name, slot >= 0 ? format_int(slot + 1) : "",
                            format_double(v.real()), format_double(v.imag())});
    };
    for (int rx = 0; rx < 2; ++rx)
        for (int tx = 0; tx < 2; ++tx)
            for (int slot = 0; slot < 3; ++slot)
                push("channel", "h" + std::to_string(rx + 1) + std::to_string(tx + 1), slot,
                     tr.channel.at(rx, tx, slot));
    push("symbols", "u1", -1, tr.symbols.u1);
    push("symbols", "u2", -1, tr.symbols.u2);
    push("symbols", "v1", -1, tr.symbols.v1);
    push("symbols", "v2", -1, tr.symbols.v2);
    const char* weight_names[2][2] = {{"f_u1", "f_u2"}, {"f_v1", "f_v2"}};
    for (int g = 0; g < 2; ++g)
        for (int tx = 0; tx < 2; ++tx)
            for (int slot = 0; slot < 3; ++slot)
                push("plan", weight_names[g][tx], slot, tr.plan.f[g][tx][slot]);
    for (int tx = 0; tx < 2; ++tx)
        for (int slot = 0; slot < 3; ++slot)
            push("tx", "x" + std::to_string(tx + 1), slot, tr.tx.x[tx][slot]);
    for (int rx = 0; rx < 2; ++rx)
        for (int slot = 0; slot < 3; ++slot)
            push("noise", "n" + std::to_string(rx + 1), slot, tr.block.noise[rx][slot]);
    for (int rx = 0; rx < 2; ++rx)
        for (int slot = 0; slot < 3; ++slot)
            push("rx", "y" + std::to_string(rx + 1), slot, tr.block.y[rx][slot]);
    for (const auto& [label, val] : tr.combined) push("combined", label, -1, val);
    for (const auto& [label, val] : tr.decoded) push("decoded", label, -1, val);
    push("result", "residual", -1, Complex(tr.residual, 0.0));
    return doc;
}

inline json simulate_json(const SimulationTrace& tr) {
    json j;
    j["scheme"] = display_name(tr.scheme);
    j["pattern"] = to_string(tr.pattern);
    j["seed"] = tr.seed;
    j["noise_power"] = tr.noise_power;
    j["channel"] = to_json(tr.channel);
    j["symbols"] = {{"u1", to_json(tr.symbols.u1)},
                    {"u2", to_json(tr.symbols.u2)},
                    {"v1", to_json(tr.symbols.v1)},
                    {"v2", to_json(tr.symbols.v2)}};
    j["plan"] = to_json(tr.plan);
    json txj = json::array(), rxj = json::array(), noisej = json::array();
    for (int t = 0; t < 2; ++t) {
        json row = json::array();
        for (int slot = 0; slot < 3; ++slot) row.push_back(to_json(tr.tx.x[t][slot]));
        txj.push_back(std::move(row));
    }
    for (int rx = 0; rx < 2; ++rx) {
        json yrow = json::array(), nrow = json::array();
        for (int slot = 0; slot < 3; ++slot) {
            yrow.push_back(to_json(tr.block.y[rx][slot]));
            nrow.push_back(to_json(tr.block.noise[rx][slot]));
        }
        rxj.push_back(std::move(yrow));
        noisej.push_back(std::move(nrow));
    }
    j["tx"] = std::move(txj);
    j["rx"] = std::move(rxj);
    j["noise"] = std::move(noisej);
    json combined = json::object(), decoded = json::object();
    for (const auto& [label, val] : tr.combined) combined[label] = to_json(val);
    for (const auto& [label, val] : tr.decoded) decoded[label] = to_json(val);
    j["combined"] = std::move(combined);
    j["decoded"] = std::move(decoded);
    j["residual"] = tr.residual;
    json logj = json::array();
    for (const AccessRecord& a : tr.access_log)
        logj.push_back({{"rx", a.rx + 1},
                        {"tx", a.tx + 1},
                        {"coeff_slot", a.coeff_slot + 1},
                        {"access_slot", a.access_slot + 1}});
    j["access_log"] = std::move(logj);
    return j;
}

// --- dof sweep --------------------------------------------------------------

inline CsvDoc dof_doc(const DofEstimate& est, std::uint64_t seed) {
    CsvDoc doc;
    doc.comments.push_back(std::string("scheme: ") + display_name(est.scheme));
    doc.comments.push_back("seed: " + std::to_string(seed));
    doc.comments.push_back("slope: " + format_double(est.slope));
    doc.comments.push_back("intercept: " + format_double(est.intercept));
    doc.columns = {"scheme", "P", "log2P", "sum_rate", "trials", "skipped"};
    for (const RatePoint& pt : est.points)
        doc.rows.push_back({display_name(est.scheme), format_double(pt.power),
                            format_double(std::log2(pt.power)), format_double(pt.sum_rate),
                            format_int(pt.trials), format_int(pt.skipped)});
    return doc;
}

inline json dof_json(const DofEstimate& est, std::uint64_t seed) {
    json points = json::array();
    for (const RatePoint& pt : est.points)
        points.push_back({{"P", pt.power},
                          {"log2P", std::log2(pt.power)},
                          {"sum_rate", pt.sum_rate},
                          {"trials", pt.trials},
                          {"skipped", pt.skipped}});
    return json{{"scheme", display_name(est.scheme)},
                {"seed", seed},
                {"slope", est.slope},
                {"intercept", est.intercept},
                {"points", std::move(points)}};
}

// --- demo -------------------------------------------------------------------

namespace detail {

inline std::string combining_description(const CombinedRow& row, int rx) {
    std::string s;
    for (int t = 0; t < 3; ++t) {
        if (row.w[t] == 0.0) continue;
        if (!s.empty())
            s += row.w[t] < 0.0 ? " - " : " + ";
        else if (row.w[t] < 0.0)
            s += "-";
        s += "y" + std::to_string(rx + 1) + "(" + std::to_string(t + 1) + ")";
    }
    return s;
}

inline void demo_one_scheme(std::string& out, SchemeId scheme, std::uint64_t seed) {
    const CsitPattern pattern = bound_pattern(scheme);
    const SimulationTrace tr = run_simulation(scheme, pattern, seed, 0.0);
    out += "=== ";
    out += display_name(scheme);
    out += "  pattern (" + to_string(pattern) + ")  seed " +
           std::to_string(seed) + " ===\n\n";
    out += "channel realization h_ij(t), i = receiver, j = transmitter:\n";
    for (int slot = 0; slot < 3; ++slot) {
        out += "  slot " + std::to_string(slot + 1) + ":";
        for (int rx = 0; rx < 2; ++rx)
            for (int tx = 0; tx < 2; ++tx)
                out += "  h" + std::to_string(rx + 1) + std::to_string(tx + 1) + " = " +
                       format_complex(tr.channel.at(rx, tx, slot));
        out += "\n";
    }
    out += "\nsymbols for receiver 1: u1 = " + format_complex(tr.symbols.u1) +
           "  u2 = " + format_complex(tr.symbols.u2) + "\n";
    out += "symbols for receiver 2: v1 = " + format_complex(tr.symbols.v1) +
           "  v2 = " + format_complex(tr.symbols.v2) + "\n";
    const char* sym_names[2][2] = {{"u1", "u2"}, {"v1", "v2"}};
    for (int slot = 0; slot < 3; ++slot) {
        out += "\nslot " + std::to_string(slot + 1) + ":\n";
        for (int tx = 0; tx < 2; ++tx) {
            out += "  x" + std::to_string(tx + 1) + "(" + std::to_string(slot + 1) + ") =";
            bool any = false;
            for (int g = 0; g < 2; ++g) {
                const Complex f = tr.plan.f[g][tx][slot];
                if (f == Complex(0.0)) continue;
                out += std::string(any ? " + " : " ") + "(" + format_complex(f) + ")*" +
                       sym_names[g][tx];
                any = true;
            }
            if (!any) out += " 0";
            out += "  = " + format_complex(tr.tx.x[tx][slot]) + "\n";
        }
        for (int rx = 0; rx < 2; ++rx)
            out += "  y" + std::to_string(rx + 1) + "(" + std::to_string(slot + 1) + ") = " +
                   format_complex(tr.block.y[rx][slot]) + "\n";
    }
    if (is_icr(scheme)) {
        const SchemeDecoder dec = assemble_effective_system(scheme, tr.channel);
        for (int rx = 0; rx < 2; ++rx) {
            out += "\nreceiver " + std::to_string(rx + 1) + " combining:\n";
            for (int r = 0; r < 2; ++r) {
                const CombinedRow& row = dec.recipe.rx[rx][r];
                out += "  " + std::string(row.label) + " = " + combining_description(row, rx);
                if (row.cancels) out += "   [cancels " + std::string(row.cancels) + "]";
                out += " = " + format_complex(tr.combined[rx * 2 + r].second) + "\n";
            }
        }
    }
    out += "\ndecoded:";
    for (const auto& [label, val] : tr.decoded) out += "  " + label + " = " + format_complex(val);
    out += "\nmax residual = " + format_double(tr.residual) + "\n\n";
}

}  // namespace detail

inline std::string demo_text(std::optional<SchemeId> scheme, std::uint64_t seed) {
    std::string out;
    out += "interference creation-resurrection walkthrough\n";
    out += "----------------------------------------------\n\n";
    if (scheme) {
        detail::demo_one_scheme(out, *scheme, seed);
    } else {
        int k = 0;
        for (SchemeId s : {SchemeId::Scheme1, SchemeId::Scheme2, SchemeId::Scheme3})
            detail::demo_one_scheme(out, s, mix_seed(seed, static_cast<std::uint64_t>(k++)));
    }
    return out;
}

// --- dispatch ---------------------------------------------------------------

namespace detail {

inline void write_text(const RunConfig& cfg, const std::string& text, std::ostream& primary) {
    if (cfg.out.empty()) {
        primary << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw IoError("cannot open output file " + cfg.out);
    f << text;
    if (!f) throw IoError("failed writing output file " + cfg.out);
}

inline void write_aux(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file " + path);
    f << text;
    if (!f) throw IoError("failed writing output file " + path);
}

inline SchemeId resolve_scheme(const RunConfig& cfg) {
    if (cfg.scheme) {
        if (cfg.pattern) require_compatible(*cfg.scheme, *cfg.pattern);
        return *cfg.scheme;
    }
    if (!cfg.pattern)
        throw std::invalid_argument("need --scheme or --pattern to pick a scheme");
    const auto match = select_scheme(*cfg.pattern);
    if (!match)
        throw std::invalid_argument("no scheme covers pattern (" + to_string(*cfg.pattern) +
                                    "); run classify to see which requirement fails");
    return match->scheme;
}

inline CsitPattern resolve_pattern(const RunConfig& cfg, SchemeId scheme) {
    if (cfg.pattern) return *cfg.pattern;
    if (is_icr(scheme)) return bound_pattern(scheme);
    return CsitPattern{};  // TDM reads nothing; the all-N pattern is honest
}

}  // namespace detail

// Executes one command, writing the report to cfg.out (or `primary`) and
// diagnostics to `err`. Returns the process exit code: 0 success, 2 for
// validation problems, 3 for numeric failures, 1 for I/O failures.
inline int run(const RunConfig& cfg, std::ostream& primary = std::cout,
               std::ostream& err = std::cerr) {
    try {
        std::vector<std::string> stamp;
        if (cfg.timestamp) stamp.push_back("generated " + detail::iso8601_utc_now());
        switch (cfg.command) {
            case RunConfig::Command::Classify: {
                if (!cfg.pattern) throw std::invalid_argument("classify requires --pattern");
                const PatternReport rep = classify_pattern(*cfg.pattern);
                if (cfg.format == RunConfig::Format::Csv) {
                    CsvDoc doc = classify_doc(rep);
                    doc.comments = stamp;
                    detail::write_text(cfg, emit_csv(doc), primary);
                } else {
                    json j = detail::pattern_json(rep);
                    if (cfg.timestamp) j["generated"] = detail::iso8601_utc_now();
                    detail::write_text(cfg, j.dump(2) + "\n", primary);
                }
                return 0;
            }
            case RunConfig::Command::Enumerate: {
                const PatternAtlas atlas = enumerate_patterns();
                if (cfg.format == RunConfig::Format::Csv) {
                    CsvDoc doc = atlas_doc(atlas);
                    doc.comments = stamp;
                    detail::write_text(cfg, emit_csv(doc), primary);
                } else {
                    json j = atlas_json(atlas);
                    if (cfg.timestamp) j["generated"] = detail::iso8601_utc_now();
                    detail::write_text(cfg, j.dump(2) + "\n", primary);
                }
                const std::string aux = cfg.out.empty() ? "" : cfg.out + ".summary.json";
                detail::write_aux(aux, detail::summary_json(atlas.summary).dump(2) + "\n", err);
                return 0;
            }
            case RunConfig::Command::Simulate: {
                const SchemeId scheme = detail::resolve_scheme(cfg);
                const CsitPattern pattern = detail::resolve_pattern(cfg, scheme);
                const SimulationTrace tr =
                    run_simulation(scheme, pattern, cfg.seed, cfg.noise_power, cfg.eps);
                if (cfg.format == RunConfig::Format::Csv) {
                    CsvDoc doc = simulate_doc(tr);
                    doc.comments.insert(doc.comments.begin(), stamp.begin(), stamp.end());
                    detail::write_text(cfg, emit_csv(doc), primary);
                } else {
                    json j = simulate_json(tr);
                    if (cfg.timestamp) j["generated"] = detail::iso8601_utc_now();
                    detail::write_text(cfg, j.dump(2) + "\n", primary);
                }
                return 0;
            }
            case RunConfig::Command::DofSweep: {
                const SchemeId scheme = detail::resolve_scheme(cfg);
                if (cfg.powers_log2.empty())
                    throw std::invalid_argument("dof-sweep requires at least two power points");
                std::vector<double> powers;
                powers.reserve(cfg.powers_log2.size());
                for (double x : cfg.powers_log2) {
                    if (!(x > 0.0))
                        throw std::invalid_argument("power exponents must be positive");
                    powers.push_back(std::exp2(x));
                }
                const DofEstimate est =
                    estimate_dof(scheme, powers, cfg.trials, cfg.seed, cfg.eps);
                if (cfg.format == RunConfig::Format::Csv) {
                    CsvDoc doc = dof_doc(est, cfg.seed);
                    doc.comments.insert(doc.comments.begin(), stamp.begin(), stamp.end());
                    detail::write_text(cfg, emit_csv(doc), primary);
                } else {
                    json j = dof_json(est, cfg.seed);
                    if (cfg.timestamp) j["generated"] = detail::iso8601_utc_now();
                    detail::write_text(cfg, j.dump(2) + "\n", primary);
                }
                return 0;
            }
            case RunConfig::Command::Demo: {
                detail::write_text(cfg, demo_text(cfg.scheme, cfg.seed), primary);
                return 0;
            }
        }
        throw std::logic_error("unreachable command");
    } catch (const SingularSystemError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace xcsit
