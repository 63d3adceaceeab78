#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xcsit {

// Transmitter-side knowledge of the channel coefficients toward one receiver
// during one slot: no knowledge, knowledge that arrives after the slot has
// passed, or instantaneous exact knowledge. The numeric order
// None < Delayed < Perfect is the dominance order used throughout: a state
// can stand in for any weaker one.
enum class CsitState : std::uint8_t { None = 0, Delayed = 1, Perfect = 2 };

constexpr char to_char(CsitState s) {
    switch (s) {
        case CsitState::Perfect: return 'P';
        case CsitState::Delayed: return 'D';
        default: return 'N';
    }
}

constexpr std::optional<CsitState> csit_state_from_char(char c) {
    switch (c) {
        case 'P': case 'p': return CsitState::Perfect;
        case 'D': case 'd': return CsitState::Delayed;
        case 'N': case 'n': return CsitState::None;
        default: return std::nullopt;
    }
}

// Joint knowledge state of one slot. r1 covers the coefficients feeding
// receiver 1 (h_11, h_12), r2 those feeding receiver 2 (h_21, h_22); both
// transmitters share the same state.
struct SlotCsit {
    CsitState r1 = CsitState::None;
    CsitState r2 = CsitState::None;

    constexpr CsitState row(int rx) const { return rx == 0 ? r1 : r2; }
    friend constexpr bool operator==(SlotCsit, SlotCsit) = default;
};

constexpr bool dominates(SlotCsit a, SlotCsit b) {
    return a.r1 >= b.r1 && a.r2 >= b.r2;
}

inline std::string to_string(SlotCsit s) { return {to_char(s.r1), to_char(s.r2)}; }

// The nine per-slot states in display order, echoed by parse errors.
inline constexpr std::string_view kSlotStateAlphabet =
    "PP,PD,PN,DP,DD,DN,NP,ND,NN";

// CSIT pattern of a 3-slot transmission block.
struct CsitPattern {
    std::array<SlotCsit, 3> slots{};

    constexpr CsitState state(int rx, int slot) const { return slots[slot].row(rx); }
    friend constexpr bool operator==(const CsitPattern&, const CsitPattern&) = default;
};

// Componentwise dominance: a provides at least the knowledge of b in every
// slot and row. This is a partial order, not a total one.
constexpr bool dominates(const CsitPattern& a, const CsitPattern& b) {
    return dominates(a.slots[0], b.slots[0]) && dominates(a.slots[1], b.slots[1]) &&
           dominates(a.slots[2], b.slots[2]);
}

inline std::string to_string(const CsitPattern& p) {
    return to_string(p.slots[0]) + "," + to_string(p.slots[1]) + "," + to_string(p.slots[2]);
}

// Parses "DD,PN,NP" (case-insensitive, optional surrounding parentheses and
// spaces). Throws std::invalid_argument naming the offending token and the
// valid per-slot alphabet.
inline CsitPattern parse_pattern(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == '(' || c == ')') continue;
        cleaned.push_back(c);
    }
    std::array<std::string, 3> tok;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t comma = cleaned.find(',', pos);
        if (i < 2) {
            if (comma == std::string::npos)
                throw std::invalid_argument("pattern \"" + std::string(text) +
                                            "\": expected three comma-separated slot states");
            tok[i] = cleaned.substr(pos, comma - pos);
            pos = comma + 1;
        } else {
            if (comma != std::string::npos)
                throw std::invalid_argument("pattern \"" + std::string(text) +
                                            "\": expected exactly three slot states");
            tok[i] = cleaned.substr(pos);
        }
    }
    CsitPattern p;
    for (int i = 0; i < 3; ++i) {
        const auto bad = [&] {
            return std::invalid_argument("pattern \"" + std::string(text) +
                                         "\": invalid slot state \"" + tok[i] +
                                         "\" (valid states: " + std::string(kSlotStateAlphabet) + ")");
        };
        if (tok[i].size() != 2) throw bad();
        const auto a = csit_state_from_char(tok[i][0]);
        const auto b = csit_state_from_char(tok[i][1]);
        if (!a || !b) throw bad();
        p.slots[i] = SlotCsit{*a, *b};
    }
    return p;
}

// Enumeration of all 9^3 = 729 patterns. The index is a base-9 encoding of
// the three slots; the exact order is unimportant but fixed.
inline constexpr int kPatternCount = 729;

constexpr CsitPattern pattern_from_index(int index) {
    CsitPattern p;
    for (int slot = 2; slot >= 0; --slot) {
        const int digit = index % 9;
        index /= 9;
        p.slots[slot] = SlotCsit{static_cast<CsitState>(digit / 3),
                                 static_cast<CsitState>(digit % 3)};
    }
    return p;
}

constexpr int pattern_index(const CsitPattern& p) {
    int index = 0;
    for (int slot = 0; slot < 3; ++slot)
        index = index * 9 + static_cast<int>(p.slots[slot].r1) * 3 +
                static_cast<int>(p.slots[slot].r2);
    return index;
}

}  // namespace xcsit
