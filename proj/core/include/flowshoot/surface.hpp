#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flowshoot/vec3.hpp"

namespace flowshoot {

enum class SurfaceKind { Cylinder, Sphere, Torus };

std::string_view to_string(SurfaceKind kind);

/// Parses "cylinder", "sphere" or "torus". Throws InvalidArgument otherwise.
SurfaceKind parse_surface_kind(std::string_view name);

/// State-constraint surface g(x) = 0 with the admissible set g(x) ≤ 0.
///
///   cylinder  g = x1² + x2² − 1
///   sphere    g = x1² + x2² + x3² − 1
///   torus     g = (√(x1² + x2²) − R)² + x3² − 1   (tube radius 1, major radius R)
///
/// On g = 0 every kind has |∇g| = 2, so the boundary unit normal is ∇g/2.
class Surface {
public:
    static Surface cylinder() { return Surface(SurfaceKind::Cylinder, 0.0); }
    static Surface sphere() { return Surface(SurfaceKind::Sphere, 0.0); }
    /// Throws InvalidArgument unless R > 1 (the tube would self-intersect).
    static Surface torus(double major_radius);
    /// Torus with any R ≥ 0, including the degenerate R = 0 that reduces to
    /// the unit sphere. Intended for formula-level comparisons only.
    static Surface torus_unchecked(double major_radius);

    SurfaceKind kind() const noexcept { return kind_; }
    /// 0 for cylinder and sphere.
    double major_radius() const noexcept { return major_radius_; }

    double value(const Vec3& x) const;
    Vec3 gradient(const Vec3& x) const;
    Mat3 hessian(const Vec3& x) const;
    /// (√(x1²+x2²) − R)/√(x1²+x2²) for the torus, exactly 1 otherwise.
    double w_factor(const Vec3& x) const;

    /// Nearest point on g = 0 (cylinder: rescale (x1, x2); sphere: rescale x;
    /// torus: rescale within the meridian half-plane).
    Vec3 project(const Vec3& x) const;

    /// Quasi-uniform points on g = 0. For the cylinder x3 spans [z_lo, z_hi].
    std::vector<Vec3> boundary_samples(int n, double z_lo = -1.0, double z_hi = 1.0) const;

    /// Half-widths of an axis-aligned box containing the bounded part of the set
    /// (the cylinder's x3 extent is left to the caller).
    Vec3 bounding_half_extent() const;

    friend bool operator==(const Surface&, const Surface&) = default;

private:
    Surface(SurfaceKind kind, double major_radius) : kind_(kind), major_radius_(major_radius) {}

    double planar_radius(const Vec3& x) const;

    SurfaceKind kind_;
    double major_radius_;
};

/// |∇g| on the boundary, shared by all three kinds.
inline constexpr double kBoundaryGradientNorm = 2.0;

/// Points with x1² + x2² below this are on the excluded torus axis.
inline constexpr double kTorusAxisExclusion = 1e-20;

inline double g_value(const Surface& s, const Vec3& x) { return s.value(x); }
inline Vec3 g_gradient(const Surface& s, const Vec3& x) { return s.gradient(x); }
inline Mat3 g_hessian(const Surface& s, const Vec3& x) { return s.hessian(x); }
inline double w_factor(const Surface& s, const Vec3& x) { return s.w_factor(x); }

}  // namespace flowshoot
