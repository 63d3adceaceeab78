#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xcsit/channel.hpp"
#include "xcsit/csit.hpp"
#include "xcsit/errors.hpp"

namespace xcsit {

// The six interference creation-resurrection schemes plus the no-CSIT TDM
// baseline. Each mirror swaps the roles of the two receivers.
enum class SchemeId {
    Scheme1,
    Scheme1Mirror,
    Scheme2,
    Scheme2Mirror,
    Scheme3,
    Scheme3Mirror,
    TdmBaseline,
};

inline constexpr std::array<SchemeId, 6> kIcrSchemes = {
    SchemeId::Scheme1, SchemeId::Scheme1Mirror, SchemeId::Scheme2,
    SchemeId::Scheme2Mirror, SchemeId::Scheme3, SchemeId::Scheme3Mirror,
};

constexpr bool is_icr(SchemeId s) { return s != SchemeId::TdmBaseline; }

constexpr const char* display_name(SchemeId s) {
    switch (s) {
        case SchemeId::Scheme1: return "Scheme 1";
        case SchemeId::Scheme1Mirror: return "Scheme 1 mirror";
        case SchemeId::Scheme2: return "Scheme 2";
        case SchemeId::Scheme2Mirror: return "Scheme 2 mirror";
        case SchemeId::Scheme3: return "Scheme 3";
        case SchemeId::Scheme3Mirror: return "Scheme 3 mirror";
        default: return "TDM baseline";
    }
}

// Compact command-line token.
constexpr const char* token(SchemeId s) {
    switch (s) {
        case SchemeId::Scheme1: return "scheme1";
        case SchemeId::Scheme1Mirror: return "scheme1m";
        case SchemeId::Scheme2: return "scheme2";
        case SchemeId::Scheme2Mirror: return "scheme2m";
        case SchemeId::Scheme3: return "scheme3";
        case SchemeId::Scheme3Mirror: return "scheme3m";
        default: return "tdm";
    }
}

constexpr SchemeId mirror_of(SchemeId s) {
    switch (s) {
        case SchemeId::Scheme1: return SchemeId::Scheme1Mirror;
        case SchemeId::Scheme1Mirror: return SchemeId::Scheme1;
        case SchemeId::Scheme2: return SchemeId::Scheme2Mirror;
        case SchemeId::Scheme2Mirror: return SchemeId::Scheme2;
        case SchemeId::Scheme3: return SchemeId::Scheme3Mirror;
        case SchemeId::Scheme3Mirror: return SchemeId::Scheme3;
        default: return SchemeId::TdmBaseline;
    }
}

// Accepts tokens ("scheme2m", "tdm") and display names ("Scheme 2 mirror"),
// case-insensitive, ignoring spaces/dashes/underscores.
inline std::optional<SchemeId> parse_scheme(std::string_view text) {
    std::string key;
    for (char c : text) {
        if (c == ' ' || c == '-' || c == '_') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    constexpr std::array<SchemeId, 7> all = {
        SchemeId::Scheme1, SchemeId::Scheme1Mirror, SchemeId::Scheme2,
        SchemeId::Scheme2Mirror, SchemeId::Scheme3, SchemeId::Scheme3Mirror,
        SchemeId::TdmBaseline,
    };
    for (SchemeId s : all) {
        if (key == token(s)) return s;
        std::string disp;
        for (const char* p = display_name(s); *p; ++p) {
            if (*p == ' ') continue;
            disp.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(*p))));
        }
        if (key == disp) return s;
    }
    return std::nullopt;
}

// A scheme together with the weakest CSIT pattern it runs under.
struct SchemeBinding {
    SchemeId scheme;
    CsitPattern pattern;
};

namespace detail {
constexpr SlotCsit slot(CsitState a, CsitState b) { return SlotCsit{a, b}; }
constexpr CsitPattern pat(SlotCsit a, SlotCsit b, SlotCsit c) { return CsitPattern{{a, b, c}}; }
constexpr auto P = CsitState::Perfect;
constexpr auto D = CsitState::Delayed;
constexpr auto N = CsitState::None;
}  // namespace detail

// Minimal scheme/pattern bindings in listing order; select_scheme resolves
// ties by first match, so this order is part of the observable contract.
inline const std::array<SchemeBinding, 6>& scheme_table() {
    using namespace detail;
    static const std::array<SchemeBinding, 6> table = {{
        {SchemeId::Scheme1, pat(slot(D, D), slot(P, N), slot(N, P))},
        {SchemeId::Scheme1Mirror, pat(slot(D, D), slot(N, P), slot(P, N))},
        {SchemeId::Scheme3Mirror, pat(slot(N, D), slot(D, P), slot(P, N))},
        {SchemeId::Scheme3, pat(slot(D, N), slot(P, D), slot(N, P))},
        {SchemeId::Scheme2Mirror, pat(slot(D, N), slot(N, D), slot(P, P))},
        {SchemeId::Scheme2, pat(slot(N, D), slot(D, N), slot(P, P))},
    }};
    return table;
}

// Minimal pattern a scheme is bound to. TDM has none (it reads no CSIT).
inline const CsitPattern& bound_pattern(SchemeId s) {
    for (const auto& b : scheme_table())
        if (b.scheme == s) return b.pattern;
    throw std::invalid_argument(std::string("bound_pattern: ") + display_name(s) +
                                " has no CSIT binding");
}

struct SchemeMatch {
    SchemeId scheme;
    CsitPattern matched;  // the table entry the input pattern dominates
    friend bool operator==(const SchemeMatch&, const SchemeMatch&) = default;
};

// First table entry (in listing order) whose pattern the input dominates;
// nullopt when the pattern covers none of them.
inline std::optional<SchemeMatch> select_scheme(const CsitPattern& p) {
    for (const auto& b : scheme_table())
        if (dominates(p, b.pattern)) return SchemeMatch{b.scheme, b.pattern};
    return std::nullopt;
}

// One logged coefficient request: h_{rx+1,tx+1}(coeff_slot+1) asked for while
// forming slot access_slot+1's transmit signal.
struct AccessRecord {
    int rx = 0, tx = 0, coeff_slot = 0, access_slot = 0;
    friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

// Whether a pattern permits the request: perfect state grants same-slot
// access, delayed (or perfect) state grants access from any strictly later
// slot. Future coefficients are never available.
constexpr bool access_allowed(const CsitPattern& p, const AccessRecord& a) {
    if (a.coeff_slot == a.access_slot)
        return p.slots[a.access_slot].row(a.rx) == CsitState::Perfect;
    if (a.coeff_slot < a.access_slot)
        return p.slots[a.coeff_slot].row(a.rx) >= CsitState::Delayed;
    return false;
}

// Transmit-side gated view of a channel realization. Every coefficient read
// is checked against the CSIT pattern and logged; a disallowed read throws.
// Use one view per plan build so the log describes exactly that build.
class CsitView {
public:
    CsitView(const ChannelRealization& ch, const CsitPattern& pattern)
        : ch_(&ch), pattern_(pattern) {
        log_.reserve(16);
    }

    const CsitPattern& pattern() const { return pattern_; }
    const std::vector<AccessRecord>& log() const { return log_; }

    bool readable(int rx, int tx, int coeff_slot, int access_slot) const {
        return access_allowed(pattern_, AccessRecord{rx, tx, coeff_slot, access_slot});
    }

    // Returns h_{rx+1,tx+1}(coeff_slot+1) as known when forming slot
    // access_slot+1; throws CsitAccessError if the pattern forbids it.
    Complex read(int rx, int tx, int coeff_slot, int access_slot) {
        const AccessRecord rec{rx, tx, coeff_slot, access_slot};
        log_.push_back(rec);
        if (!access_allowed(pattern_, rec)) {
            const char* need = coeff_slot == access_slot
                                   ? " (same-slot access requires P)"
                                   : (coeff_slot < access_slot ? " (delayed access requires P or D)"
                                                               : " (future coefficients are never available)");
            throw CsitAccessError(
                "csit access violation: h" + std::to_string(rx + 1) + std::to_string(tx + 1) +
                "(" + std::to_string(coeff_slot + 1) + ") requested at slot " +
                std::to_string(access_slot + 1) + " under pattern (" + to_string(pattern_) +
                "): row " + std::to_string(rx + 1) + " at slot " + std::to_string(coeff_slot + 1) +
                " is " + std::string(1, to_char(pattern_.slots[coeff_slot].row(rx))) + need);
        }
        return ch_->at(rx, tx, coeff_slot);
    }

private:
    const ChannelRealization* ch_;
    CsitPattern pattern_;
    std::vector<AccessRecord> log_;
};

// Precoding weights of one block. f[g][tx][slot] multiplies the symbol
// carried by transmitter tx for receiver group g (0 = u-symbols, 1 = v), so
// x_tx(slot) = f[0][tx][slot] u_{tx+1} + f[1][tx][slot] v_{tx+1}.
struct TransmitPlan {
    SchemeId scheme = SchemeId::TdmBaseline;
    std::array<std::array<std::array<Complex, 3>, 2>, 2> f{};

    friend bool operator==(const TransmitPlan&, const TransmitPlan&) = default;
};

// No-CSIT baseline: one interference-free symbol per slot, alternating
// links (u1 from T1, then v2 from T2, then u2 from T2). Reads nothing.
inline TransmitPlan tdm_plan() {
    TransmitPlan plan;
    plan.scheme = SchemeId::TdmBaseline;
    plan.f[0][0][0] = 1.0;
    plan.f[1][1][1] = 1.0;
    plan.f[0][1][2] = 1.0;
    return plan;
}

inline TransmitPlan build_tdm_plan(CsitView&) { return tdm_plan(); }

// Builds a scheme's precoding weights through the gated view. The reads lay
// out each scheme's two-phase story: superpose (or send cleanly), then
// resurrect a past slot's interference with inverted current coefficients so
// the receiver can cancel it by differencing.
inline TransmitPlan build_plan(SchemeId scheme, CsitView& view) {
    TransmitPlan plan;
    plan.scheme = scheme;
    auto rd = [&view](int rx, int tx, int coeff_slot, int access_slot) {
        return view.read(rx, tx, coeff_slot, access_slot);
    };
    switch (scheme) {
        case SchemeId::Scheme1:
            // Slot 1: both transmitters superpose their two symbols.
            plan.f[0][0][0] = plan.f[1][0][0] = 1.0;
            plan.f[0][1][0] = plan.f[1][1][0] = 1.0;
            // Slot 2: resurrect receiver 1's slot-1 interference h11(1)v1 + h12(1)v2.
            plan.f[1][0][1] = rd(0, 0, 0, 1) / rd(0, 0, 1, 1);
            plan.f[1][1][1] = rd(0, 1, 0, 1) / rd(0, 1, 1, 1);
            // Slot 3: resurrect receiver 2's slot-1 interference h21(1)u1 + h22(1)u2.
            plan.f[0][0][2] = rd(1, 0, 0, 2) / rd(1, 0, 2, 2);
            plan.f[0][1][2] = rd(1, 1, 0, 2) / rd(1, 1, 2, 2);
            break;
        case SchemeId::Scheme1Mirror:
            plan.f[0][0][0] = plan.f[1][0][0] = 1.0;
            plan.f[0][1][0] = plan.f[1][1][0] = 1.0;
            // Slot 2 now serves receiver 2: resurrect h21(1)u1 + h22(1)u2.
            plan.f[0][0][1] = rd(1, 0, 0, 1) / rd(1, 0, 1, 1);
            plan.f[0][1][1] = rd(1, 1, 0, 1) / rd(1, 1, 1, 1);
            // Slot 3 serves receiver 1: resurrect h11(1)v1 + h12(1)v2.
            plan.f[1][0][2] = rd(0, 0, 0, 2) / rd(0, 0, 2, 2);
            plan.f[1][1][2] = rd(0, 1, 0, 2) / rd(0, 1, 2, 2);
            break;
        case SchemeId::Scheme2:
            // Clean u-slot, clean v-slot, then one slot resurrecting both
            // receivers' interference at once under perfect CSIT.
            plan.f[0][0][0] = plan.f[0][1][0] = 1.0;
            plan.f[1][0][1] = plan.f[1][1][1] = 1.0;
            plan.f[0][0][2] = rd(1, 0, 0, 2) / rd(1, 0, 2, 2);
            plan.f[1][0][2] = rd(0, 0, 1, 2) / rd(0, 0, 2, 2);
            plan.f[0][1][2] = rd(1, 1, 0, 2) / rd(1, 1, 2, 2);
            plan.f[1][1][2] = rd(0, 1, 1, 2) / rd(0, 1, 2, 2);
            break;
        case SchemeId::Scheme2Mirror:
            plan.f[1][0][0] = plan.f[1][1][0] = 1.0;
            plan.f[0][0][1] = plan.f[0][1][1] = 1.0;
            plan.f[1][0][2] = rd(0, 0, 0, 2) / rd(0, 0, 2, 2);
            plan.f[0][0][2] = rd(1, 0, 1, 2) / rd(1, 0, 2, 2);
            plan.f[1][1][2] = rd(0, 1, 0, 2) / rd(0, 1, 2, 2);
            plan.f[0][1][2] = rd(1, 1, 1, 2) / rd(1, 1, 2, 2);
            break;
        case SchemeId::Scheme3:
            // Clean v-slot; slot 2 superposes fresh u-symbols with a
            // resurrection of receiver 1's slot-1 interference; slot 3
            // resurrects receiver 2's slot-2 interference.
            plan.f[1][0][0] = plan.f[1][1][0] = 1.0;
            plan.f[0][0][1] = plan.f[0][1][1] = 1.0;
            plan.f[1][0][1] = rd(0, 0, 0, 1) / rd(0, 0, 1, 1);
            plan.f[1][1][1] = rd(0, 1, 0, 1) / rd(0, 1, 1, 1);
            plan.f[0][0][2] = rd(1, 0, 1, 2) / rd(1, 0, 2, 2);
            plan.f[0][1][2] = rd(1, 1, 1, 2) / rd(1, 1, 2, 2);
            break;
        case SchemeId::Scheme3Mirror:
            plan.f[0][0][0] = plan.f[0][1][0] = 1.0;
            plan.f[1][0][1] = plan.f[1][1][1] = 1.0;
            plan.f[0][0][1] = rd(1, 0, 0, 1) / rd(1, 0, 1, 1);
            plan.f[0][1][1] = rd(1, 1, 0, 1) / rd(1, 1, 1, 1);
            plan.f[1][0][2] = rd(0, 0, 1, 2) / rd(0, 0, 2, 2);
            plan.f[1][1][2] = rd(0, 1, 1, 2) / rd(0, 1, 2, 2);
            break;
        case SchemeId::TdmBaseline:
            plan = tdm_plan();
            break;
    }
    return plan;
}

// Raises PatternMismatchError unless the pattern dominates the scheme's
// binding (TDM accepts anything). build_plan itself does not pre-check: its
// gated reads surface the first offending slot instead.
inline void require_compatible(SchemeId scheme, const CsitPattern& pattern) {
    if (!is_icr(scheme)) return;
    const CsitPattern& bound = bound_pattern(scheme);
    if (!dominates(pattern, bound))
        throw PatternMismatchError(std::string("pattern (") + to_string(pattern) +
                                   ") does not dominate (" + to_string(bound) +
                                   "), the minimal pattern of " + display_name(scheme));
}

inline TxSignals transmit(const TransmitPlan& plan, const SymbolVector& s) {
    TxSignals out;
    for (int tx = 0; tx < 2; ++tx)
        for (int slot = 0; slot < 3; ++slot)
            out.x[tx][slot] =
                plan.f[0][tx][slot] * s.at(0, tx) + plan.f[1][tx][slot] * s.at(1, tx);
    return out;
}

// Role-swap helpers: exchanging the two receivers everywhere maps each
// scheme onto its mirror. Tests lean on this symmetry.
constexpr CsitPattern swap_receivers(const CsitPattern& p) {
    CsitPattern q = p;
    for (auto& s : q.slots) {
        const CsitState t = s.r1;
        s.r1 = s.r2;
        s.r2 = t;
    }
    return q;
}

inline ChannelRealization swap_receivers(const ChannelRealization& ch) {
    ChannelRealization out = ch;
    out.h[0] = ch.h[1];
    out.h[1] = ch.h[0];
    return out;
}

inline SymbolVector swap_receivers(const SymbolVector& s) {
    return SymbolVector{s.v1, s.v2, s.u1, s.u2};
}

}  // namespace xcsit
