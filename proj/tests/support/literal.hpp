#pragma once

// Term-by-term transcriptions of the per-surface optimality systems, kept
// apart from the library's unified formulas so the two can be compared.

#include <cmath>

#include "flowshoot/vec3.hpp"

namespace flowshoot::literal {

// d(i, j) = ∂v_i/∂x_j
struct Local {
    Vec3 x;
    Vec3 psi;
    double mu = 0.0;
    Vec3 v;
    Mat3 d;
};

inline Vec3 cylinder_control(const Local& s) {
    const double a = s.psi.c1 - 2 * s.mu * s.x.c1;
    const double b = s.psi.c2 - 2 * s.mu * s.x.c2;
    const double c = s.psi.c3;
    const double n = std::sqrt(a * a + b * b + c * c);
    return {a / n, b / n, c / n};
}

inline Vec3 cylinder_adjoint(const Local& s) {
    const Vec3 u = cylinder_control(s);
    const auto& d = s.d.m;
    const double e1 = -s.psi.c1 + 2 * s.mu * s.x.c1;
    const double e2 = -s.psi.c2 + 2 * s.mu * s.x.c2;
    const double psi3 = s.psi.c3;
    return {
        e1 * d[0][0] + e2 * d[1][0] - psi3 * d[2][0] + 2 * s.mu * u.c1 + 2 * s.mu * s.v.c1,
        e1 * d[0][1] + e2 * d[1][1] - psi3 * d[2][1] + 2 * s.mu * u.c2 + 2 * s.mu * s.v.c2,
        e1 * d[0][2] + e2 * d[1][2] - psi3 * d[2][2],
    };
}

inline Vec3 sphere_control(const Local& s) {
    const double a = s.psi.c1 - 2 * s.mu * s.x.c1;
    const double b = s.psi.c2 - 2 * s.mu * s.x.c2;
    const double c = s.psi.c3 - 2 * s.mu * s.x.c3;
    const double n = std::sqrt(a * a + b * b + c * c);
    return {a / n, b / n, c / n};
}

inline Vec3 sphere_adjoint(const Local& s) {
    const Vec3 u = sphere_control(s);
    const auto& d = s.d.m;
    const double e1 = -s.psi.c1 + 2 * s.mu * s.x.c1;
    const double e2 = -s.psi.c2 + 2 * s.mu * s.x.c2;
    const double e3 = -s.psi.c3 + 2 * s.mu * s.x.c3;
    return {
        e1 * d[0][0] + e2 * d[1][0] + e3 * d[2][0] + 2 * s.mu * u.c1 + 2 * s.mu * s.v.c1,
        e1 * d[0][1] + e2 * d[1][1] + e3 * d[2][1] + 2 * s.mu * u.c2 + 2 * s.mu * s.v.c2,
        e1 * d[0][2] + e2 * d[1][2] + e3 * d[2][2] + 2 * s.mu * u.c3 + 2 * s.mu * s.v.c3,
    };
}

inline double torus_w(const Vec3& x, double R) {
    const double rho = std::sqrt(x.c1 * x.c1 + x.c2 * x.c2);
    return (rho - R) / rho;
}

inline Vec3 torus_control(const Local& s, double R) {
    const double w = torus_w(s.x, R);
    const double a = s.psi.c1 - 2 * s.mu * w * s.x.c1;
    const double b = s.psi.c2 - 2 * s.mu * w * s.x.c2;
    const double c = s.psi.c3 - 2 * s.mu * s.x.c3;
    const double n = std::sqrt(a * a + b * b + c * c);
    return {a / n, b / n, c / n};
}

inline Vec3 torus_adjoint(const Local& s, double R) {
    const Vec3 u = torus_control(s, R);
    const auto& d = s.d.m;
    const double w = torus_w(s.x, R);
    const double x1 = s.x.c1, x2 = s.x.c2, x3 = s.x.c3;
    const double r3 = std::pow(x1 * x1 + x2 * x2, 1.5);
    const double e1 = -s.psi.c1 + 2 * s.mu * w * x1;
    const double e2 = -s.psi.c2 + 2 * s.mu * w * x2;
    const double e3 = -s.psi.c3 + 2 * s.mu * x3;
    const double s1 = u.c1 + s.v.c1, s2 = u.c2 + s.v.c2;
    return {
        e1 * d[0][0] + e2 * d[1][0] + e3 * d[2][0] +
            2 * s.mu * (s1 * w + s1 * x1 * x1 * R / r3 + s2 * x1 * x2 * R / r3),
        e1 * d[0][1] + e2 * d[1][1] + e3 * d[2][1] +
            2 * s.mu * (s2 * w + s2 * x2 * x2 * R / r3 + s1 * x1 * x2 * R / r3),
        e1 * d[0][2] + e2 * d[1][2] + e3 * d[2][2] + 2 * s.mu * u.c3 + 2 * s.mu * s.v.c3,
    };
}

// Coefficients p, q of the boundary quadratic for μ.
struct PQ {
    double p = 0.0;
    double q = 0.0;
};

inline PQ cylinder_pq(const Vec3& x, const Vec3& psi, const Vec3& v) {
    return {x.c1 * psi.c1 + x.c2 * psi.c2, x.c1 * v.c1 + x.c2 * v.c2};
}

inline PQ sphere_pq(const Vec3& x, const Vec3& psi, const Vec3& v) { return {dot(x, psi), dot(x, v)}; }

inline PQ torus_pq(const Vec3& x, const Vec3& psi, const Vec3& v, double R) {
    const double w = torus_w(x, R);
    return {w * x.c1 * psi.c1 + w * x.c2 * psi.c2 + x.c3 * psi.c3, w * x.c1 * v.c1 + w * x.c2 * v.c2 + x.c3 * v.c3};
}

// μ² − μp + (p² − |ψ|²q²) / (4(1 − q²))
inline double mu_quadratic(double mu, const PQ& c, const Vec3& psi) {
    return mu * mu - mu * c.p + (c.p * c.p - dot(psi, psi) * c.q * c.q) / (4.0 * (1.0 - c.q * c.q));
}

// Γ = 2x1(u1+v1) + 2x2(u2+v2) [+ 2x3(u3+v3)], with w on the torus's planar terms.
inline double cylinder_gamma(const Vec3& x, const Vec3& u, const Vec3& v) {
    return 2 * x.c1 * (u.c1 + v.c1) + 2 * x.c2 * (u.c2 + v.c2);
}

inline double sphere_gamma(const Vec3& x, const Vec3& u, const Vec3& v) { return 2 * dot(x, u + v); }

inline double torus_gamma(const Vec3& x, const Vec3& u, const Vec3& v, double R) {
    const double w = torus_w(x, R);
    return 2 * w * x.c1 * (u.c1 + v.c1) + 2 * w * x.c2 * (u.c2 + v.c2) + 2 * x.c3 * (u.c3 + v.c3);
}

}  // namespace flowshoot::literal
