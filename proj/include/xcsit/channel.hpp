#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "xcsit/linalg.hpp"

namespace xcsit {

// Channel coefficients below this magnitude are resampled, keeping every
// inverse taken by the precoders finite.
inline constexpr double kDefaultEpsChan = 1e-6;

// splitmix64-style mixer used to derive independent per-trial / per-stream
// seeds from a user seed. Deliberately independent of the transmit power so
// that rate sweeps reuse identical channel draws across power points
// (common random numbers).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One fading realization of the 2x2 coefficient grid over a 3-slot block.
// h[rx][tx][slot] is the gain from transmitter tx+1 to receiver rx+1 in slot
// slot+1; every coefficient satisfies |h| >= eps when produced by
// draw_channel. Aggregate on purpose: tests craft realizations directly.
struct ChannelRealization {
    std::uint64_t seed = 0;
    double eps = kDefaultEpsChan;
    std::array<std::array<std::array<Complex, 3>, 2>, 2> h{};

    const Complex& at(int rx, int tx, int slot) const { return h[rx][tx][slot]; }
    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

// i.i.d. CN(0,1) coefficients (Rayleigh fading), independent across slots,
// resampled while |h| < eps. Deterministic in (seed, eps): fixed draw order
// rx-major, then tx, then slot.
inline ChannelRealization draw_channel(std::uint64_t seed, double eps = kDefaultEpsChan) {
    if (!(eps > 0.0))
        throw std::invalid_argument("draw_channel: eps must be positive, got " +
                                    std::to_string(eps));
    if (eps >= 1.0)
        throw std::invalid_argument("draw_channel: eps must be below 1, got " +
                                    std::to_string(eps));
    ChannelRealization r;
    r.seed = seed;
    r.eps = eps;
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
    for (int rx = 0; rx < 2; ++rx)
        for (int tx = 0; tx < 2; ++tx)
            for (int slot = 0; slot < 3; ++slot) {
                Complex c;
                do {
                    c = Complex(gauss(engine), gauss(engine));
                } while (std::abs(c) < eps);
                r.h[rx][tx][slot] = c;
            }
    return r;
}

// The four information symbols of a block: u1, u2 are destined to receiver 1
// (from transmitters 1 and 2), v1, v2 to receiver 2.
struct SymbolVector {
    Complex u1{}, u2{}, v1{}, v2{};

    // Symbol carried by transmitter tx for receiver group rx (0 = u, 1 = v).
    const Complex& at(int rx, int tx) const {
        return rx == 0 ? (tx == 0 ? u1 : u2) : (tx == 0 ? v1 : v2);
    }
    friend bool operator==(const SymbolVector&, const SymbolVector&) = default;
};

// Unit-energy QPSK symbols, deterministic in the seed.
inline SymbolVector draw_symbols(std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<int> corner(0, 3);
    const auto qpsk = [&] {
        const int k = corner(engine);
        const double s = 1.0 / std::sqrt(2.0);
        return Complex((k & 1) ? s : -s, (k & 2) ? s : -s);
    };
    SymbolVector v;
    v.u1 = qpsk();
    v.u2 = qpsk();
    v.v1 = qpsk();
    v.v2 = qpsk();
    return v;
}

// Transmit signals of a block: x[tx][slot].
struct TxSignals {
    std::array<std::array<Complex, 3>, 2> x{};
};

// Receive-side view of a block: y[rx][slot] plus the exact noise samples that
// were added, so tests can reconstruct the noiseless signal.
struct ReceivedBlock {
    std::array<std::array<Complex, 3>, 2> y{};
    std::array<std::array<Complex, 3>, 2> noise{};
    double noise_power = 0.0;
};

// y_i(t) = sum_j h_ij(t) x_j(t) + n_i(t) with n_i(t) ~ CN(0, noise_power).
// noise_power == 0 adds exact zeros without touching the noise generator.
inline ReceivedBlock apply_channel(const TxSignals& x, const ChannelRealization& ch,
                                   double noise_power, std::uint64_t noise_seed) {
    if (noise_power < 0.0)
        throw std::invalid_argument("apply_channel: noise_power must be non-negative");
    ReceivedBlock out;
    out.noise_power = noise_power;
    if (noise_power > 0.0) {
        std::mt19937_64 engine(noise_seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
        for (int rx = 0; rx < 2; ++rx)
            for (int slot = 0; slot < 3; ++slot)
                out.noise[rx][slot] = Complex(gauss(engine), gauss(engine));
    }
    for (int rx = 0; rx < 2; ++rx)
        for (int slot = 0; slot < 3; ++slot) {
            const Complex signal = ch.h[rx][0][slot] * x.x[0][slot] +
                                   ch.h[rx][1][slot] * x.x[1][slot];
            out.y[rx][slot] = signal + out.noise[rx][slot];
        }
    return out;
}

}  // namespace xcsit
