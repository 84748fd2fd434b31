#include "flowshoot/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace flowshoot {

double default_horizon(const Surface& s, const FlowField& f, const Vec3& a, const Vec3& b, int n_samples) {
    // Sup of |v| estimated on a regular lattice of interior points.
    Vec3 half = s.bounding_half_extent();
    double zc = 0.0;
    if (half[2] == 0.0) {
        // Unbounded axis: cover the slab between the endpoints.
        zc = 0.5 * (a[2] + b[2]);
        half[2] = 0.5 * std::abs(a[2] - b[2]) + 1.0;
    }
    double vmax = std::max(norm(f.value(a)), norm(f.value(b)));
    const int side = std::max(2, static_cast<int>(std::cbrt(static_cast<double>(n_samples))));
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            for (int k = 0; k < side; ++k) {
                const Vec3 x{half[0] * (2.0 * (i + 0.5) / side - 1.0), half[1] * (2.0 * (j + 0.5) / side - 1.0),
                             zc + half[2] * (2.0 * (k + 0.5) / side - 1.0)};
                try {
                    if (s.value(x) <= 0.0) vmax = std::max(vmax, norm(f.value(x)));
                } catch (const Error&) {
                }
            }
    if (!(vmax < 1.0)) return 100.0;
    return std::clamp(4.0 * norm(b - a) / (1.0 - vmax), 1.0, 100.0);
}

}  // namespace flowshoot
