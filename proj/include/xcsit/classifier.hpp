#pragma once

#include <array>
#include <optional>
#include <vector>

#include "xcsit/csit.hpp"
#include "xcsit/scheme.hpp"

namespace xcsit {

// The three structural requirements a 3-slot CSIT pattern must meet for the
// creation-resurrection machinery to work. Evaluated independently so
// reports can show which one fails.
struct Theorem1Result {
    // 1: each receiver row has some (P or D) slot strictly before a P slot.
    bool delayed_then_perfect = false;
    // 2: no slot is blind for both receivers at once.
    bool no_blind_slot = false;
    // 3: the final slot is perfect for at least one receiver.
    bool final_slot_perfect = false;

    constexpr bool all() const { return delayed_then_perfect && no_blind_slot && final_slot_perfect; }
};

constexpr std::array<CsitState, 3> row_states(const CsitPattern& p, int rx) {
    return {p.slots[0].row(rx), p.slots[1].row(rx), p.slots[2].row(rx)};
}

constexpr bool row_delayed_then_perfect(const std::array<CsitState, 3>& row) {
    for (int later = 1; later < 3; ++later) {
        if (row[later] != CsitState::Perfect) continue;
        for (int earlier = 0; earlier < later; ++earlier)
            if (row[earlier] >= CsitState::Delayed) return true;
    }
    return false;
}

constexpr Theorem1Result satisfies_theorem1(const CsitPattern& p) {
    Theorem1Result res;
    res.delayed_then_perfect =
        row_delayed_then_perfect(row_states(p, 0)) && row_delayed_then_perfect(row_states(p, 1));
    res.no_blind_slot = true;
    for (const SlotCsit& s : p.slots)
        if (s.r1 == CsitState::None && s.r2 == CsitState::None) res.no_blind_slot = false;
    res.final_slot_perfect = p.slots[2].r1 == CsitState::Perfect ||
                             p.slots[2].r2 == CsitState::Perfect;
    return res;
}

// Classification of one pattern: the requirement triple and, when the
// pattern dominates a table entry, the first matching scheme.
struct PatternReport {
    CsitPattern pattern;
    Theorem1Result requirements;
    std::optional<SchemeMatch> match;

    bool synergistic() const { return match.has_value(); }
};

struct AtlasSummary {
    int total = 0;
    int synergistic = 0;
    int requirements_met = 0;
    // Patterns where the requirement triple and scheme coverage disagree;
    // zero is the structural claim the whole atlas exists to demonstrate.
    int disagreements = 0;
    std::array<int, 6> per_scheme{};  // indexed by kIcrSchemes order
};

struct PatternAtlas {
    std::vector<PatternReport> reports;
    AtlasSummary summary;
};

inline PatternReport classify_pattern(const CsitPattern& p) {
    return PatternReport{p, satisfies_theorem1(p), select_scheme(p)};
}

// Classifies all 729 patterns in index order and tallies the agreement
// between the structural requirements and scheme coverage.
inline PatternAtlas enumerate_patterns() {
    PatternAtlas atlas;
    atlas.reports.reserve(kPatternCount);
    atlas.summary.total = kPatternCount;
    for (int i = 0; i < kPatternCount; ++i) {
        atlas.reports.push_back(classify_pattern(pattern_from_index(i)));
        const PatternReport& rep = atlas.reports.back();
        if (rep.synergistic()) {
            ++atlas.summary.synergistic;
            for (std::size_t k = 0; k < kIcrSchemes.size(); ++k)
                if (kIcrSchemes[k] == rep.match->scheme) ++atlas.summary.per_scheme[k];
        }
        if (rep.requirements.all()) ++atlas.summary.requirements_met;
        if (rep.requirements.all() != rep.synergistic()) ++atlas.summary.disagreements;
    }
    return atlas;
}

}  // namespace xcsit
