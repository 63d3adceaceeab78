#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace xcsit {

using Complex = std::complex<double>;

// 2x2 complex matrix, row major. Just enough linear algebra for the
// per-receiver effective systems; nothing here is performance critical.
struct Mat2 {
    std::array<std::array<Complex, 2>, 2> m{};

    Complex& operator()(int r, int c) { return m[r][c]; }
    const Complex& operator()(int r, int c) const { return m[r][c]; }

    static Mat2 identity() {
        Mat2 a;
        a(0, 0) = a(1, 1) = 1.0;
        return a;
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct Vec2 {
    Complex x{}, y{};
};

inline Complex det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

inline double frobenius_sq(const Mat2& a) {
    return std::norm(a(0, 0)) + std::norm(a(0, 1)) + std::norm(a(1, 0)) + std::norm(a(1, 1));
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return c;
}

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline Mat2 operator*(Complex s, const Mat2& a) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = s * a(i, j);
    return c;
}

// Conjugate transpose.
inline Mat2 adjoint(const Mat2& a) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

inline Complex trace(const Mat2& a) { return a(0, 0) + a(1, 1); }

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y, a(1, 0) * v.x + a(1, 1) * v.y};
}

// Cramer solve of a s = b. The caller is responsible for det(a) != 0; the
// decoder checks its singularity flag before calling.
inline Vec2 solve(const Mat2& a, const Vec2& b) {
    const Complex d = det(a);
    return {(b.x * a(1, 1) - a(0, 1) * b.y) / d, (a(0, 0) * b.y - b.x * a(1, 0)) / d};
}

inline Mat2 inverse(const Mat2& a) {
    const Complex d = det(a);
    Mat2 c;
    c(0, 0) = a(1, 1) / d;
    c(0, 1) = -a(0, 1) / d;
    c(1, 0) = -a(1, 0) / d;
    c(1, 1) = a(0, 0) / d;
    return c;
}

}  // namespace xcsit
