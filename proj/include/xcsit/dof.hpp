#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcsit/channel.hpp"
#include "xcsit/csit.hpp"
#include "xcsit/decoder.hpp"
#include "xcsit/rational.hpp"
#include "xcsit/scheme.hpp"

namespace xcsit {

// Sum degrees of freedom of the uniform-state channels: alternating perfect
// CSIT gives 4/3, all-delayed gives 6/5, no CSIT gives 1.
inline Rational state_dof(SlotCsit s) {
    if (s.r1 != s.r2)
        throw std::invalid_argument("state_dof: no tabulated value for mixed state " +
                                    to_string(s));
    switch (s.r1) {
        case CsitState::Perfect: return Rational(4, 3);
        case CsitState::Delayed: return Rational(6, 5);
        default: return Rational(1);
    }
}

// Average of the per-slot tabulated values over a block whose slots all have
// uniform states, e.g. (DD,DD,PP) -> (6/5 + 6/5 + 4/3)/3 = 56/45. Exact.
inline Rational weighted_average_dof(const CsitPattern& p) {
    Rational acc(0);
    for (const SlotCsit& s : p.slots) acc = acc + state_dof(s);
    return acc * Rational(1, 3);
}

// Monte-Carlo sum rate of one scheme at one power point.
struct RatePoint {
    double power = 0.0;
    double sum_rate = 0.0;  // bits per channel use, averaged over trials
    int trials = 0;
    int skipped = 0;  // singular realizations redrawn along the way
};

struct DofEstimate {
    SchemeId scheme = SchemeId::Scheme1;
    double slope = 0.0;      // least-squares slope of sum_rate vs log2 P
    double intercept = 0.0;
    std::vector<RatePoint> points;
};

namespace detail {

// log2 det(I + c A) for the 2x2 PSD product A = K^-1 M M^H; expanding the
// determinant keeps everything real and avoids forming huge intermediates.
inline double log2_det_capacity(const Mat2& M, const Mat2& K, double c) {
    const Mat2 A = inverse(K) * (M * adjoint(M));
    const double tr = trace(A).real();
    const double dt = det(A).real();
    const double val = 1.0 + c * tr + c * c * dt;
    return std::log2(val < 1.0 ? 1.0 : val);
}

}  // namespace detail

// Instantaneous sum rate of an assembled ICR block: each of the four symbol
// streams carries power P/2 (two streams share each slot), the block spans
// three uses. Precoders are not renormalized, so the realized per-slot
// transmit power deviates from P by the resurrection-ratio magnitudes; the
// deviation is bounded because |h| >= eps and vanishes from the DoF slope.
inline double scheme_trial_rate(const SchemeDecoder& dec, double power) {
    double bits = 0.0;
    for (int rx = 0; rx < 2; ++rx)
        bits += detail::log2_det_capacity(dec.system.M[rx], dec.system.K[rx], power / 2.0);
    return bits / 3.0;
}

// Instantaneous sum rate of the TDM baseline: one full-power
// interference-free stream per slot, unit noise per use.
inline double tdm_trial_rate(const ChannelRealization& ch, double power) {
    const TransmitPlan plan = tdm_plan();
    double bits = 0.0;
    for (int slot = 0; slot < 3; ++slot)
        for (int g = 0; g < 2; ++g)
            for (int tx = 0; tx < 2; ++tx)
                if (plan.f[g][tx][slot] != Complex(0.0)) {
                    const int rx = g;  // group g symbols are decoded by receiver g+1
                    const double gain = std::norm(ch.at(rx, tx, slot) * plan.f[g][tx][slot]);
                    bits += std::log2(1.0 + power * gain);
                }
    return bits / 3.0;
}

// Averaged sum rate over independent channel draws. Trial seeds depend only
// on (seed, trial, redraw attempt), never on the power, so sweeps see common
// random numbers across power points. Singular draws are redrawn and counted
// in skipped; exhausting the redraw budget raises SingularSystemError.
inline RatePoint sum_rate(SchemeId scheme, double power, int trials, std::uint64_t seed,
                          double eps = kDefaultEpsChan) {
    if (!(power > 0.0))
        throw std::invalid_argument("sum_rate: power must be positive");
    if (trials < 1)
        throw std::invalid_argument("sum_rate: trials must be at least 1");
    RatePoint point;
    point.power = power;
    point.trials = trials;
    double acc = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(trial));
        if (!is_icr(scheme)) {
            acc += tdm_trial_rate(draw_channel(trial_seed, eps), power);
            continue;
        }
        for (int attempt = 0;; ++attempt) {
            if (attempt > kRedrawBudget)
                throw SingularSystemError("sum_rate: redraw budget exhausted at trial " +
                                          std::to_string(trial));
            const ChannelRealization ch =
                draw_channel(mix_seed(trial_seed, static_cast<std::uint64_t>(attempt)), eps);
            const SchemeDecoder dec = assemble_effective_system(scheme, ch);
            if (dec.system.singular[0] || dec.system.singular[1]) {
                ++point.skipped;
                continue;
            }
            acc += scheme_trial_rate(dec, power);
            break;
        }
    }
    point.sum_rate = acc / trials;
    return point;
}

// Least-squares slope of sum rate against log2 P over a power sweep: the
// measured degrees of freedom. Needs at least two distinct powers above 1.
inline DofEstimate estimate_dof(SchemeId scheme, std::span<const double> powers, int trials,
                                std::uint64_t seed, double eps = kDefaultEpsChan) {
    if (powers.size() < 2)
        throw std::invalid_argument("estimate_dof: need at least two power points");
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] > 1.0))
            throw std::invalid_argument("estimate_dof: powers must exceed 1");
        for (std::size_t j = i + 1; j < powers.size(); ++j)
            if (powers[i] == powers[j])
                throw std::invalid_argument("estimate_dof: duplicate power point");
    }
    DofEstimate est;
    est.scheme = scheme;
    est.points.reserve(powers.size());
    double mx = 0.0, my = 0.0;
    for (double p : powers) {
        est.points.push_back(sum_rate(scheme, p, trials, seed, eps));
        mx += std::log2(p);
        my += est.points.back().sum_rate;
    }
    mx /= static_cast<double>(powers.size());
    my /= static_cast<double>(powers.size());
    double sxx = 0.0, sxy = 0.0;
    for (const RatePoint& pt : est.points) {
        const double dx = std::log2(pt.power) - mx;
        sxx += dx * dx;
        sxy += dx * (pt.sum_rate - my);
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    return est;
}

}  // namespace xcsit
