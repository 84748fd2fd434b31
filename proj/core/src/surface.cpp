#include "flowshoot/surface.hpp"

#include <cmath>
#include <numbers>

namespace flowshoot {

std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Cylinder: return "cylinder";
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Torus: return "torus";
    }
    return "unknown";
}

SurfaceKind parse_surface_kind(std::string_view name) {
    if (name == "cylinder") return SurfaceKind::Cylinder;
    if (name == "sphere") return SurfaceKind::Sphere;
    if (name == "torus") return SurfaceKind::Torus;
    throw InvalidArgument("unknown surface kind '" + std::string(name) + "'");
}

Surface Surface::torus(double major_radius) {
    if (!(major_radius > 1.0) || !std::isfinite(major_radius))
        throw InvalidArgument("torus major radius must be finite and > 1");
    return Surface(SurfaceKind::Torus, major_radius);
}

Surface Surface::torus_unchecked(double major_radius) {
    if (!(major_radius >= 0.0) || !std::isfinite(major_radius))
        throw InvalidArgument("torus major radius must be finite and >= 0");
    return Surface(SurfaceKind::Torus, major_radius);
}

double Surface::planar_radius(const Vec3& x) const {
    const double rho2 = x.c1 * x.c1 + x.c2 * x.c2;
    if (rho2 < kTorusAxisExclusion) throw TorusAxisError("torus quantity evaluated on the x3 axis");
    return std::sqrt(rho2);
}

double Surface::value(const Vec3& x) const {
    switch (kind_) {
        case SurfaceKind::Cylinder: return x.c1 * x.c1 + x.c2 * x.c2 - 1.0;
        case SurfaceKind::Sphere: return dot(x, x) - 1.0;
        case SurfaceKind::Torus: {
            const double d = planar_radius(x) - major_radius_;
            return d * d + x.c3 * x.c3 - 1.0;
        }
    }
    return 0.0;
}

double Surface::w_factor(const Vec3& x) const {
    if (kind_ != SurfaceKind::Torus) return 1.0;
    const double rho = planar_radius(x);
    return (rho - major_radius_) / rho;
}

Vec3 Surface::gradient(const Vec3& x) const {
    switch (kind_) {
        case SurfaceKind::Cylinder: return {2.0 * x.c1, 2.0 * x.c2, 0.0};
        case SurfaceKind::Sphere: return 2.0 * x;
        case SurfaceKind::Torus: {
            const double w = w_factor(x);
            return {2.0 * w * x.c1, 2.0 * w * x.c2, 2.0 * x.c3};
        }
    }
    return {};
}

Mat3 Surface::hessian(const Vec3& x) const {
    switch (kind_) {
        case SurfaceKind::Cylinder: return Mat3::diagonal(2.0, 2.0, 0.0);
        case SurfaceKind::Sphere: return Mat3::diagonal(2.0, 2.0, 2.0);
        case SurfaceKind::Torus: {
            const double rho = planar_radius(x);
            const double w = (rho - major_radius_) / rho;
            const double k = major_radius_ / (rho * rho * rho);
            Mat3 h;
            h(0, 0) = 2.0 * (w + k * x.c1 * x.c1);
            h(1, 1) = 2.0 * (w + k * x.c2 * x.c2);
            h(0, 1) = h(1, 0) = 2.0 * k * x.c1 * x.c2;
            h(2, 2) = 2.0;
            return h;
        }
    }
    return {};
}

Vec3 Surface::project(const Vec3& x) const {
    switch (kind_) {
        case SurfaceKind::Cylinder: {
            const double rho = std::hypot(x.c1, x.c2);
            if (rho < kZeroVectorThreshold) throw ZeroVectorError("cannot project the cylinder axis onto its boundary");
            return {x.c1 / rho, x.c2 / rho, x.c3};
        }
        case SurfaceKind::Sphere: return normalize(x);
        case SurfaceKind::Torus: {
            const double rho = planar_radius(x);
            const double dr = rho - major_radius_;
            const double d = std::hypot(dr, x.c3);
            if (d < kZeroVectorThreshold) throw ZeroVectorError("cannot project the torus core circle onto its boundary");
            const double rho_new = major_radius_ + dr / d;
            return {x.c1 * rho_new / rho, x.c2 * rho_new / rho, x.c3 / d};
        }
    }
    return x;
}

std::vector<Vec3> Surface::boundary_samples(int n, double z_lo, double z_hi) const {
    using std::numbers::pi;
    // Golden-ratio lattices give low-discrepancy coverage for any n.
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * pi * std::fmod(k / golden, 1.0);
        const double f = (k + 0.5) / n;
        switch (kind_) {
            case SurfaceKind::Cylinder:
                out.push_back({std::cos(a), std::sin(a), z_lo + f * (z_hi - z_lo)});
                break;
            case SurfaceKind::Sphere: {
                const double z = 1.0 - 2.0 * f;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                out.push_back({r * std::cos(a), r * std::sin(a), z});
                break;
            }
            case SurfaceKind::Torus: {
                const double b = 2.0 * pi * f;
                const double rho = major_radius_ + std::cos(b);
                out.push_back({rho * std::cos(a), rho * std::sin(a), std::sin(b)});
                break;
            }
        }
    }
    return out;
}

Vec3 Surface::bounding_half_extent() const {
    switch (kind_) {
        case SurfaceKind::Cylinder: return {1.0, 1.0, 0.0};
        case SurfaceKind::Sphere: return {1.0, 1.0, 1.0};
        case SurfaceKind::Torus: return {major_radius_ + 1.0, major_radius_ + 1.0, 1.0};
    }
    return {};
}

}  // namespace flowshoot
