#pragma once

#include <json.hpp>

#include "xcsit/channel.hpp"
#include "xcsit/scheme.hpp"

// JSON bindings for the fixture and plan types. Complex numbers serialize as
// [re, im] pairs; kept in a separate header so the core stays light.

namespace xcsit {

using json = nlohmann::json;

inline json to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("json: complex values must be [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

// Channel fixture: {"seed": ..., "eps": ..., "h": [rx][tx][slot] pairs}.
inline json to_json(const ChannelRealization& ch) {
    json h = json::array();
    for (int rx = 0; rx < 2; ++rx) {
        json per_rx = json::array();
        for (int tx = 0; tx < 2; ++tx) {
            json per_tx = json::array();
            for (int slot = 0; slot < 3; ++slot) per_tx.push_back(to_json(ch.h[rx][tx][slot]));
            per_rx.push_back(std::move(per_tx));
        }
        h.push_back(std::move(per_rx));
    }
    return json{{"seed", ch.seed}, {"eps", ch.eps}, {"h", std::move(h)}};
}

inline ChannelRealization channel_from_json(const json& j) {
    ChannelRealization ch;
    ch.seed = j.at("seed").get<std::uint64_t>();
    ch.eps = j.at("eps").get<double>();
    const json& h = j.at("h");
    if (!h.is_array() || h.size() != 2)
        throw std::invalid_argument("json: \"h\" must hold two receiver rows");
    for (int rx = 0; rx < 2; ++rx) {
        if (!h[rx].is_array() || h[rx].size() != 2)
            throw std::invalid_argument("json: each receiver row must hold two transmitters");
        for (int tx = 0; tx < 2; ++tx) {
            if (!h[rx][tx].is_array() || h[rx][tx].size() != 3)
                throw std::invalid_argument("json: each link must hold three slots");
            for (int slot = 0; slot < 3; ++slot)
                ch.h[rx][tx][slot] = complex_from_json(h[rx][tx][slot]);
        }
    }
    return ch;
}

// Plan dump: {"scheme": token, "f": [group][tx][slot] pairs}.
inline json to_json(const TransmitPlan& plan) {
    json f = json::array();
    for (int g = 0; g < 2; ++g) {
        json per_g = json::array();
        for (int tx = 0; tx < 2; ++tx) {
            json per_tx = json::array();
            for (int slot = 0; slot < 3; ++slot) per_tx.push_back(to_json(plan.f[g][tx][slot]));
            per_g.push_back(std::move(per_tx));
        }
        f.push_back(std::move(per_g));
    }
    return json{{"scheme", token(plan.scheme)}, {"f", std::move(f)}};
}

inline TransmitPlan plan_from_json(const json& j) {
    TransmitPlan plan;
    const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
    if (!scheme)
        throw std::invalid_argument("json: unknown scheme \"" +
                                    j.at("scheme").get<std::string>() + "\"");
    plan.scheme = *scheme;
    const json& f = j.at("f");
    if (!f.is_array() || f.size() != 2)
        throw std::invalid_argument("json: \"f\" must hold two symbol groups");
    for (int g = 0; g < 2; ++g)
        for (int tx = 0; tx < 2; ++tx)
            for (int slot = 0; slot < 3; ++slot)
                plan.f[g][tx][slot] = complex_from_json(f.at(g).at(tx).at(slot));
    return plan;
}

}  // namespace xcsit
