#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "xcsit/channel.hpp"
#include "xcsit/errors.hpp"
#include "xcsit/linalg.hpp"
#include "xcsit/scheme.hpp"

namespace xcsit {

// |det M| below this fraction of ||M||_F^2 flags the effective system as too
// close to singular to zero-force. Both sides scale quadratically with the
// coefficient magnitude, so the flag is scale invariant.
inline constexpr double kSingularRelTol = 1e-12;

// How many fresh channel draws a Monte-Carlo trial may burn through before a
// singular realization is treated as a hard failure.
inline constexpr int kRedrawBudget = 64;

// One receiver-side linear combination: r = sum_t w[t] y(t+1). The weights
// are always 0 or +-1; label names the interference-free observation the row
// realizes, cancels (if set) names the interference term the row removes.
struct CombinedRow {
    std::array<double, 3> w{};
    const char* label = "";
    const char* cancels = nullptr;
};

// Two rows per receiver; row order matches the effective-system matrix rows.
struct CombiningRecipe {
    std::array<std::array<CombinedRow, 2>, 2> rx{};
};

inline CombiningRecipe combining_recipe(SchemeId scheme) {
    CombiningRecipe r;
    switch (scheme) {
        case SchemeId::Scheme1:
            r.rx[0] = {{{{1, -1, 0}, "L1^1", "I1"}, {{0, 0, 1}, "L1^2", nullptr}}};
            r.rx[1] = {{{{1, 0, -1}, "L2^1", "I2"}, {{0, 1, 0}, "L2^2", nullptr}}};
            break;
        case SchemeId::Scheme1Mirror:
            r.rx[0] = {{{{1, 0, -1}, "L1^1", "I1"}, {{0, 1, 0}, "L1^2", nullptr}}};
            r.rx[1] = {{{{1, -1, 0}, "L2^1", "I2"}, {{0, 0, 1}, "L2^2", nullptr}}};
            break;
        case SchemeId::Scheme2:
            r.rx[0] = {{{{0, -1, 1}, "L1^2", "I1"}, {{1, 0, 0}, "L1^1", nullptr}}};
            r.rx[1] = {{{{-1, 0, 1}, "L2^2", "I2"}, {{0, 1, 0}, "L2^1", nullptr}}};
            break;
        case SchemeId::Scheme2Mirror:
            r.rx[0] = {{{{-1, 0, 1}, "L1^2", "I1"}, {{0, 1, 0}, "L1^1", nullptr}}};
            r.rx[1] = {{{{0, -1, 1}, "L2^2", "I2"}, {{1, 0, 0}, "L2^1", nullptr}}};
            break;
        case SchemeId::Scheme3:
            r.rx[0] = {{{{-1, 1, 0}, "L1^1", "I1"}, {{0, 0, 1}, "L1^2", nullptr}}};
            r.rx[1] = {{{{1, 0, 0}, "L2^1", nullptr}, {{0, 1, -1}, "L2^2", "I2"}}};
            break;
        case SchemeId::Scheme3Mirror:
            r.rx[0] = {{{{1, 0, 0}, "L1^1", nullptr}, {{0, 1, -1}, "L1^2", "I1"}}};
            r.rx[1] = {{{{-1, 1, 0}, "L2^1", "I2"}, {{0, 0, 1}, "L2^2", nullptr}}};
            break;
        default:
            throw std::invalid_argument("combining_recipe: TDM baseline has no 2x2 combining");
    }
    return r;
}

// Per-receiver zero-forced system after combining: r_i = M_i s_i + n_i with
// s_1 = (u1,u2), s_2 = (v1,v2) and noise covariance K_i = W_i W_i^H.
struct EffectiveSystem {
    std::array<Mat2, 2> M{};
    std::array<Mat2, 2> K{};
    std::array<bool, 2> singular{};
};

struct SchemeDecoder {
    SchemeId scheme = SchemeId::Scheme1;
    CombiningRecipe recipe;
    EffectiveSystem system;
};

namespace detail {

// Closed-form effective matrices: each row writes out one interference-free
// observation's coefficients on the desired symbol pair. Entries are either
// a direct coefficient or a coefficient times a resurrection ratio
// h(t')/h(t) matching the precoder that produced the observation.
inline EffectiveSystem effective_matrices(SchemeId scheme, const ChannelRealization& c) {
    auto h = [&c](int rx, int tx, int slot) { return c.at(rx, tx, slot); };
    auto row = [](Mat2& m, int r, Complex a, Complex b) {
        m(r, 0) = a;
        m(r, 1) = b;
    };
    EffectiveSystem sys;
    Mat2& M1 = sys.M[0];
    Mat2& M2 = sys.M[1];
    switch (scheme) {
        case SchemeId::Scheme1:
            row(M1, 0, h(0, 0, 0), h(0, 1, 0));
            row(M1, 1, h(0, 0, 2) * h(1, 0, 0) / h(1, 0, 2), h(0, 1, 2) * h(1, 1, 0) / h(1, 1, 2));
            row(M2, 0, h(1, 0, 0), h(1, 1, 0));
            row(M2, 1, h(1, 0, 1) * h(0, 0, 0) / h(0, 0, 1), h(1, 1, 1) * h(0, 1, 0) / h(0, 1, 1));
            break;
        case SchemeId::Scheme1Mirror:
            row(M1, 0, h(0, 0, 0), h(0, 1, 0));
            row(M1, 1, h(0, 0, 1) * h(1, 0, 0) / h(1, 0, 1), h(0, 1, 1) * h(1, 1, 0) / h(1, 1, 1));
            row(M2, 0, h(1, 0, 0), h(1, 1, 0));
            row(M2, 1, h(1, 0, 2) * h(0, 0, 0) / h(0, 0, 2), h(1, 1, 2) * h(0, 1, 0) / h(0, 1, 2));
            break;
        case SchemeId::Scheme2:
            row(M1, 0, h(0, 0, 2) * h(1, 0, 0) / h(1, 0, 2), h(0, 1, 2) * h(1, 1, 0) / h(1, 1, 2));
            row(M1, 1, h(0, 0, 0), h(0, 1, 0));
            row(M2, 0, h(1, 0, 2) * h(0, 0, 1) / h(0, 0, 2), h(1, 1, 2) * h(0, 1, 1) / h(0, 1, 2));
            row(M2, 1, h(1, 0, 1), h(1, 1, 1));
            break;
        case SchemeId::Scheme2Mirror:
            row(M1, 0, h(0, 0, 2) * h(1, 0, 1) / h(1, 0, 2), h(0, 1, 2) * h(1, 1, 1) / h(1, 1, 2));
            row(M1, 1, h(0, 0, 1), h(0, 1, 1));
            row(M2, 0, h(1, 0, 2) * h(0, 0, 0) / h(0, 0, 2), h(1, 1, 2) * h(0, 1, 0) / h(0, 1, 2));
            row(M2, 1, h(1, 0, 0), h(1, 1, 0));
            break;
        case SchemeId::Scheme3:
            row(M1, 0, h(0, 0, 1), h(0, 1, 1));
            row(M1, 1, h(0, 0, 2) * h(1, 0, 1) / h(1, 0, 2), h(0, 1, 2) * h(1, 1, 1) / h(1, 1, 2));
            row(M2, 0, h(1, 0, 0), h(1, 1, 0));
            row(M2, 1, h(1, 0, 1) * h(0, 0, 0) / h(0, 0, 1), h(1, 1, 1) * h(0, 1, 0) / h(0, 1, 1));
            break;
        case SchemeId::Scheme3Mirror:
            row(M1, 0, h(0, 0, 0), h(0, 1, 0));
            row(M1, 1, h(0, 0, 1) * h(1, 0, 0) / h(1, 0, 1), h(0, 1, 1) * h(1, 1, 0) / h(1, 1, 1));
            row(M2, 0, h(1, 0, 1), h(1, 1, 1));
            row(M2, 1, h(1, 0, 2) * h(0, 0, 1) / h(0, 0, 2), h(1, 1, 2) * h(0, 1, 1) / h(0, 1, 2));
            break;
        default:
            throw std::invalid_argument("effective_matrices: TDM baseline has no 2x2 system");
    }
    return sys;
}

// Independent route to the same combined coefficients: push unit symbols
// through the actual transmit plan and the combining weights, then demand
// agreement with the closed-form matrices and exact interference kill-off.
// Catches any drift between the plan builders and the decoder tables.
inline void self_check(SchemeId scheme, const ChannelRealization& c,
                       const CombiningRecipe& recipe, const EffectiveSystem& sys) {
    CsitView view(c, bound_pattern(scheme));
    const TransmitPlan plan = build_plan(scheme, view);
    for (int rx = 0; rx < 2; ++rx) {
        // G[t][g*2+j]: received coefficient of symbol (g,j) at slot t.
        std::array<std::array<Complex, 4>, 3> G{};
        for (int t = 0; t < 3; ++t)
            for (int g = 0; g < 2; ++g)
                for (int j = 0; j < 2; ++j)
                    G[t][g * 2 + j] = c.at(rx, j, t) * plan.f[g][j][t];
        for (int r = 0; r < 2; ++r) {
            const auto& w = recipe.rx[rx][r].w;
            for (int col = 0; col < 4; ++col) {
                Complex combined = 0.0;
                double scale = 1.0;
                for (int t = 0; t < 3; ++t) {
                    combined += w[t] * G[t][col];
                    scale += std::abs(w[t]) * std::abs(G[t][col]);
                }
                const bool desired = (col / 2) == rx;
                const Complex want = desired ? sys.M[rx](r, col % 2) : Complex(0.0);
                if (std::abs(combined - want) > 1e-9 * (scale + std::abs(want)))
                    throw std::logic_error(
                        std::string("effective-system self-check failed for ") +
                        display_name(scheme) + " at receiver " + std::to_string(rx + 1));
            }
        }
    }
}

}  // namespace detail

// Builds the receiver-side decoder for an ICR scheme: combining recipe,
// closed-form effective matrices, combining-noise covariance K = W W^H, and
// the singularity flags. Receivers know the whole realization.
inline SchemeDecoder assemble_effective_system(SchemeId scheme, const ChannelRealization& c) {
    SchemeDecoder dec;
    dec.scheme = scheme;
    dec.recipe = combining_recipe(scheme);
    dec.system = detail::effective_matrices(scheme, c);
    for (int rx = 0; rx < 2; ++rx) {
        Mat2& K = dec.system.K[rx];
        for (int r = 0; r < 2; ++r)
            for (int q = 0; q < 2; ++q) {
                double acc = 0.0;
                for (int t = 0; t < 3; ++t)
                    acc += dec.recipe.rx[rx][r].w[t] * dec.recipe.rx[rx][q].w[t];
                K(r, q) = acc;
            }
        dec.system.singular[rx] =
            std::abs(det(dec.system.M[rx])) < kSingularRelTol * frobenius_sq(dec.system.M[rx]);
    }
    detail::self_check(scheme, c, dec.recipe, dec.system);
    return dec;
}

struct DecodeResult {
    SymbolVector symbols;
    // Max absolute reconstruction error over the four symbols; set only when
    // ground truth is supplied.
    std::optional<double> residual;
};

// Applies the combining rows to the received block and zero-forces each
// receiver's 2x2 system. Refuses flagged-singular systems.
inline DecodeResult decode(const SchemeDecoder& dec, const ReceivedBlock& block,
                           const SymbolVector* truth = nullptr) {
    for (int rx = 0; rx < 2; ++rx)
        if (dec.system.singular[rx])
            throw SingularSystemError(std::string("decode: ") + display_name(dec.scheme) +
                                      " effective system at receiver " + std::to_string(rx + 1) +
                                      " is singular");
    DecodeResult out;
    std::array<Vec2, 2> s;
    for (int rx = 0; rx < 2; ++rx) {
        Vec2 r;
        for (int t = 0; t < 3; ++t) {
            r.x += dec.recipe.rx[rx][0].w[t] * block.y[rx][t];
            r.y += dec.recipe.rx[rx][1].w[t] * block.y[rx][t];
        }
        s[rx] = solve(dec.system.M[rx], r);
    }
    out.symbols = SymbolVector{s[0].x, s[0].y, s[1].x, s[1].y};
    if (truth) {
        const double res =
            std::max(std::max(std::abs(out.symbols.u1 - truth->u1), std::abs(out.symbols.u2 - truth->u2)),
                     std::max(std::abs(out.symbols.v1 - truth->v1), std::abs(out.symbols.v2 - truth->v2)));
        out.residual = res;
    }
    return out;
}

}  // namespace xcsit
