#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "xcsit/json_io.hpp"
#include "xcsit/scheme.hpp"

using namespace xcsit;

namespace {

ChannelRealization ones_channel() {
    ChannelRealization ch;
    for (int rx = 0; rx < 2; ++rx)
        for (int tx = 0; tx < 2; ++tx)
            for (int slot = 0; slot < 3; ++slot) ch.h[rx][tx][slot] = 1.0;
    return ch;
}

}  // namespace

TEST_CASE("pattern text round trip and validation") {
    const CsitPattern p = parse_pattern("DD,PN,NP");
    REQUIRE(to_string(p) == "DD,PN,NP");
    REQUIRE(parse_pattern("(dd, pn, np)") == p);
    REQUIRE_THROWS_WITH(parse_pattern("XX,PN,NP"),
                        Catch::Matchers::ContainsSubstring("PP,PD,PN,DP,DD,DN,NP,ND,NN"));
    REQUIRE_THROWS_AS(parse_pattern("DD,PN"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_pattern("DD,PN,NP,PP"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_pattern("DDD,PN,NP"), std::invalid_argument);
}

TEST_CASE("pattern index enumeration is a bijection") {
    for (int i = 0; i < kPatternCount; ++i)
        REQUIRE(pattern_index(pattern_from_index(i)) == i);
}

TEST_CASE("scheme names parse back") {
    for (SchemeId s : kIcrSchemes) {
        REQUIRE(parse_scheme(token(s)) == s);
        REQUIRE(parse_scheme(display_name(s)) == s);
    }
    REQUIRE(parse_scheme("tdm") == SchemeId::TdmBaseline);
    REQUIRE(parse_scheme("Scheme 2 Mirror") == SchemeId::Scheme2Mirror);
    REQUIRE_FALSE(parse_scheme("scheme4").has_value());
}

TEST_CASE("binding table holds the six minimal patterns, mutually incomparable") {
    const auto& table = scheme_table();
    REQUIRE(to_string(table[0].pattern) == "DD,PN,NP");
    REQUIRE(table[0].scheme == SchemeId::Scheme1);
    REQUIRE(to_string(table[1].pattern) == "DD,NP,PN");
    REQUIRE(table[1].scheme == SchemeId::Scheme1Mirror);
    REQUIRE(to_string(table[2].pattern) == "ND,DP,PN");
    REQUIRE(table[2].scheme == SchemeId::Scheme3Mirror);
    REQUIRE(to_string(table[3].pattern) == "DN,PD,NP");
    REQUIRE(table[3].scheme == SchemeId::Scheme3);
    REQUIRE(to_string(table[4].pattern) == "DN,ND,PP");
    REQUIRE(table[4].scheme == SchemeId::Scheme2Mirror);
    REQUIRE(to_string(table[5].pattern) == "ND,DN,PP");
    REQUIRE(table[5].scheme == SchemeId::Scheme2);
    for (const auto& a : table)
        for (const auto& b : table)
            if (a.scheme != b.scheme) REQUIRE_FALSE(dominates(a.pattern, b.pattern));
    // Bindings pair up as mirrors of each other via the receiver swap.
    for (const auto& a : table)
        REQUIRE(bound_pattern(mirror_of(a.scheme)) == swap_receivers(a.pattern));
    REQUIRE_THROWS_AS(bound_pattern(SchemeId::TdmBaseline), std::invalid_argument);
}

TEST_CASE("identity channel collapses every resurrection gain to one") {
    const ChannelRealization ch = ones_channel();
    CsitView view(ch, bound_pattern(SchemeId::Scheme1));
    const TransmitPlan plan = build_plan(SchemeId::Scheme1, view);
    // Slot 1 superposes everything, slot 2 re-sends v, slot 3 re-sends u.
    REQUIRE(plan.f[0][0][0] == Complex(1.0));
    REQUIRE(plan.f[1][0][0] == Complex(1.0));
    REQUIRE(plan.f[1][0][1] == Complex(1.0));
    REQUIRE(plan.f[1][1][1] == Complex(1.0));
    REQUIRE(plan.f[0][0][1] == Complex(0.0));
    REQUIRE(plan.f[0][0][2] == Complex(1.0));
    REQUIRE(plan.f[0][1][2] == Complex(1.0));
    REQUIRE(plan.f[1][0][2] == Complex(0.0));
}

TEST_CASE("resurrection weight is the old-to-new coefficient ratio") {
    ChannelRealization ch = ones_channel();
    ch.h[1][0][0] = 2.0;  // h21(1)
    ch.h[1][0][2] = 4.0;  // h21(3)
    CsitView view(ch, bound_pattern(SchemeId::Scheme2));
    const TransmitPlan plan = build_plan(SchemeId::Scheme2, view);
    // Transmitter 1's slot-3 weight on u1 must be h21(1)/h21(3) = 0.5.
    REQUIRE(plan.f[0][0][2] == Complex(0.5));
}

TEST_CASE("forbidden coefficient read names the offending slot") {
    const ChannelRealization ch = draw_channel(5);
    CsitView view(ch, parse_pattern("DD,NN,NP"));
    REQUIRE_THROWS_WITH(build_plan(SchemeId::Scheme1, view),
                        Catch::Matchers::ContainsSubstring("slot 2"));
    CsitView view2(ch, parse_pattern("DD,NN,NP"));
    REQUIRE_THROWS_AS(build_plan(SchemeId::Scheme1, view2), CsitAccessError);
}

TEST_CASE("reads from slot one of an all-none pattern fail") {
    const ChannelRealization ch = draw_channel(6);
    CsitView view(ch, CsitPattern{});
    REQUIRE_FALSE(view.readable(0, 0, 0, 0));
    REQUIRE_FALSE(view.readable(0, 0, 0, 2));
    REQUIRE_THROWS_AS(view.read(0, 0, 0, 1), CsitAccessError);
    // Future coefficients are never available, not even under all-perfect.
    CsitView future(ch, parse_pattern("PP,PP,PP"));
    REQUIRE_FALSE(future.readable(0, 0, 2, 0));
    REQUIRE_THROWS_AS(future.read(0, 0, 2, 0), CsitAccessError);
}

TEST_CASE("compatibility check mirrors dominance") {
    REQUIRE_NOTHROW(require_compatible(SchemeId::Scheme1, parse_pattern("DD,PN,NP")));
    REQUIRE_NOTHROW(require_compatible(SchemeId::Scheme1, parse_pattern("PP,PP,PP")));
    REQUIRE_THROWS_AS(require_compatible(SchemeId::Scheme1, parse_pattern("DD,NN,NP")),
                      PatternMismatchError);
    REQUIRE_NOTHROW(require_compatible(SchemeId::TdmBaseline, CsitPattern{}));
}

TEST_CASE("tdm plan reads nothing and spends every slot on one clean symbol") {
    const ChannelRealization ch = draw_channel(8);
    CsitView view(ch, CsitPattern{});  // all-N: any read would throw
    const TransmitPlan plan = build_tdm_plan(view);
    REQUIRE(view.log().empty());
    REQUIRE(plan.f[1][0][0] == Complex(0.0));  // no v1 in slot 1
    REQUIRE(plan.f[0][1][1] == Complex(0.0));  // no u2 in slot 2
    int active = 0;
    for (int slot = 0; slot < 3; ++slot) {
        int per_slot = 0;
        for (int g = 0; g < 2; ++g)
            for (int tx = 0; tx < 2; ++tx)
                if (plan.f[g][tx][slot] != Complex(0.0)) ++per_slot;
        REQUIRE(per_slot == 1);
        active += per_slot;
    }
    REQUIRE(active == 3);
    // On the identity channel the slot-1 receive at receiver 1 is u1 itself.
    SymbolVector s;
    s.u1 = Complex(0.25, -1.5);
    const TxSignals x = transmit(plan, s);
    const ReceivedBlock block = apply_channel(x, ones_channel(), 0.0, 0);
    REQUIRE(block.y[0][0] == s.u1);
}

TEST_CASE("selection walks the table in listing order") {
    const auto m1 = select_scheme(parse_pattern("DD,PN,NP"));
    REQUIRE(m1.has_value());
    REQUIRE(m1->scheme == SchemeId::Scheme1);
    REQUIRE(m1->matched == parse_pattern("DD,PN,NP"));
    // (DD,DD,PP) covers both Scheme 2 rows; the mirror row is listed first.
    const auto m2 = select_scheme(parse_pattern("DD,DD,PP"));
    REQUIRE(m2.has_value());
    REQUIRE(m2->scheme == SchemeId::Scheme2Mirror);
    REQUIRE(m2->matched == parse_pattern("DN,ND,PP"));
    // All-perfect dominates every row; first row wins.
    const auto m3 = select_scheme(parse_pattern("PP,PP,PP"));
    REQUIRE(m3.has_value());
    REQUIRE(m3->scheme == SchemeId::Scheme1);
}

TEST_CASE("a blind first slot stays uncovered despite rich later slots") {
    // (NN,DD,PP) satisfies delayed-then-perfect on both rows, but slot 1 is
    // blind for both receivers, so no table row is dominated.
    const CsitPattern p = parse_pattern("NN,DD,PP");
    REQUIRE_FALSE(select_scheme(p).has_value());
    for (const auto& b : scheme_table()) REQUIRE_FALSE(dominates(p, b.pattern));
    // Upgrading slot 1 on either side restores coverage.
    REQUIRE(select_scheme(parse_pattern("ND,DD,PP")).has_value());
    REQUIRE(select_scheme(parse_pattern("DN,DD,PP")).has_value());
}

TEST_CASE("plan builds log only pattern-approved reads") {
    for (SchemeId scheme : kIcrSchemes) {
        const ChannelRealization ch = draw_channel(100 + static_cast<int>(scheme));
        const CsitPattern bound = bound_pattern(scheme);
        CsitView view(ch, bound);
        build_plan(scheme, view);
        REQUIRE_FALSE(view.log().empty());
        for (const AccessRecord& rec : view.log()) REQUIRE(access_allowed(bound, rec));
        // Under a strictly richer pattern the build must not read more: the
        // log still validates against the minimal pattern.
        CsitView rich(ch, parse_pattern("PP,PP,PP"));
        build_plan(scheme, rich);
        REQUIRE(rich.log().size() == view.log().size());
        for (const AccessRecord& rec : rich.log()) REQUIRE(access_allowed(bound, rec));
    }
}

TEST_CASE("mirrors are exact receiver swaps") {
    for (SchemeId scheme : {SchemeId::Scheme1, SchemeId::Scheme2, SchemeId::Scheme3}) {
        const ChannelRealization ch = draw_channel(50 + static_cast<int>(scheme));
        CsitView view(ch, bound_pattern(scheme));
        const TransmitPlan plan = build_plan(scheme, view);
        const ChannelRealization swapped = swap_receivers(ch);
        CsitView mview(swapped, bound_pattern(mirror_of(scheme)));
        const TransmitPlan mplan = build_plan(mirror_of(scheme), mview);
        for (int g = 0; g < 2; ++g)
            for (int tx = 0; tx < 2; ++tx)
                for (int slot = 0; slot < 3; ++slot)
                    REQUIRE(mplan.f[1 - g][tx][slot] == plan.f[g][tx][slot]);
    }
}

TEST_CASE("transmit applies the plan weights to the right symbols") {
    const ChannelRealization ch = draw_channel(31);
    CsitView view(ch, bound_pattern(SchemeId::Scheme3));
    const TransmitPlan plan = build_plan(SchemeId::Scheme3, view);
    SymbolVector s;
    s.u1 = Complex(1.0, 1.0);
    s.u2 = Complex(-2.0, 0.5);
    s.v1 = Complex(0.0, -1.0);
    s.v2 = Complex(3.0, 0.0);
    const TxSignals x = transmit(plan, s);
    for (int tx = 0; tx < 2; ++tx)
        for (int slot = 0; slot < 3; ++slot) {
            const Complex want =
                plan.f[0][tx][slot] * s.at(0, tx) + plan.f[1][tx][slot] * s.at(1, tx);
            REQUIRE(x.x[tx][slot] == want);
        }
}

TEST_CASE("selection is monotone under dominance") {
    std::mt19937_64 eng(17);
    std::uniform_int_distribution<int> pick(0, kPatternCount - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    int upgraded_cases = 0;
    for (int it = 0; it < 400; ++it) {
        const CsitPattern p = pattern_from_index(pick(eng));
        if (!select_scheme(p)) continue;
        CsitPattern q = p;
        for (auto& slot : q.slots) {
            if (coin(eng) && slot.r1 != CsitState::Perfect)
                slot.r1 = static_cast<CsitState>(static_cast<int>(slot.r1) + 1);
            if (coin(eng) && slot.r2 != CsitState::Perfect)
                slot.r2 = static_cast<CsitState>(static_cast<int>(slot.r2) + 1);
        }
        REQUIRE(dominates(q, p));
        REQUIRE(select_scheme(q).has_value());
        ++upgraded_cases;
    }
    REQUIRE(upgraded_cases > 50);  // the sampler actually exercised the property
}

TEST_CASE("plan json round trip") {
    const ChannelRealization ch = draw_channel(77);
    CsitView view(ch, bound_pattern(SchemeId::Scheme2Mirror));
    const TransmitPlan plan = build_plan(SchemeId::Scheme2Mirror, view);
    const json j = to_json(plan);
    REQUIRE(j.at("scheme") == "scheme2m");
    REQUIRE(j.at("f").size() == 2);
    const TransmitPlan back = plan_from_json(json::parse(j.dump()));
    REQUIRE(back == plan);
}
