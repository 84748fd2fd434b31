#pragma once

#include <array>
#include <cmath>

#include "flowshoot/errors.hpp"

namespace flowshoot {

/// Point or direction in Euclidean 3-space. Holds positions, controls,
/// adjoint vectors and flow velocities alike.
struct Vec3 {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? c1 : (i == 1 ? c2 : c3); }
    constexpr double& operator[](int i) { return i == 0 ? c1 : (i == 1 ? c2 : c3); }

    constexpr Vec3& operator+=(const Vec3& o) {
        c1 += o.c1;
        c2 += o.c2;
        c3 += o.c3;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        c1 -= o.c1;
        c2 -= o.c2;
        c3 -= o.c3;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        c1 *= s;
        c2 *= s;
        c3 *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.c1, -a.c2, -a.c3}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.c1 * b.c1 + a.c2 * b.c2 + a.c3 * b.c3; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a) {
    return std::isfinite(a.c1) && std::isfinite(a.c2) && std::isfinite(a.c3);
}

/// Below this norm a vector has no usable direction.
inline constexpr double kZeroVectorThreshold = 1e-12;

/// Unit vector along `a`. Throws ZeroVectorError when |a| < 1e-12.
inline Vec3 normalize(const Vec3& a) {
    const double n = norm(a);
    if (!(n >= kZeroVectorThreshold)) throw ZeroVectorError("cannot normalize a vector of norm below 1e-12");
    return (1.0 / n) * a;
}

/// 3x3 matrix, row-major: row i is the gradient of component i of a map.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static constexpr Mat3 identity() { return Mat3{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}; }
    static constexpr Mat3 diagonal(double a, double b, double c) { return Mat3{{{{a, 0, 0}, {0, b, 0}, {0, 0, c}}}}; }

    constexpr double operator()(int i, int j) const { return m[i][j]; }
    constexpr double& operator()(int i, int j) { return m[i][j]; }

    constexpr Mat3 transposed() const {
        Mat3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
        return t;
    }

    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Mat3 operator*(double s, Mat3 a) {
    for (auto& row : a.m)
        for (auto& e : row) e *= s;
    return a;
}

/// M a
constexpr Vec3 apply(const Mat3& M, const Vec3& a) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = M.m[i][0] * a.c1 + M.m[i][1] * a.c2 + M.m[i][2] * a.c3;
    return r;
}

/// Mᵀ a, i.e. component i = Σ_j M[j][i]·a[j].
constexpr Vec3 transpose_apply(const Mat3& M, const Vec3& a) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = M.m[0][i] * a.c1 + M.m[1][i] * a.c2 + M.m[2][i] * a.c3;
    return r;
}

inline bool is_finite(const Mat3& M) {
    for (const auto& row : M.m)
        for (double e : row)
            if (!std::isfinite(e)) return false;
    return true;
}

}  // namespace flowshoot
