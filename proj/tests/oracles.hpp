#ifndef CURVEX_TEST_ORACLES_HPP
#define CURVEX_TEST_ORACLES_HPP

// Independent reference computations used to freeze expected values.  These
// deliberately avoid the library's own code paths wherever they check one.

#include <cmath>
#include <functional>
#include <vector>

#include "curvex/field.hpp"
#include "curvex/vec2.hpp"

namespace curvex::test {

/// Count nodes satisfying the sign-change predicate by scanning the full
/// lattice of a region with direct function evaluations.
inline std::size_t brute_force_interface_count(const Grid& grid, const Box2& region,
                                               const std::function<double(Vec2)>& phi) {
    const double h = grid.h;
    const int i0 = static_cast<int>(std::floor((region.lo.x - grid.origin.x) / h));
    const int j0 = static_cast<int>(std::floor((region.lo.y - grid.origin.y) / h));
    const int i1 = static_cast<int>(std::ceil((region.hi.x - grid.origin.x) / h));
    const int j1 = static_cast<int>(std::ceil((region.hi.y - grid.origin.y) / h));
    std::size_t count = 0;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const double v = phi(grid.pos(i, j));
            bool crossing = false;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4 && !crossing; ++k) {
                const int ii = i + di[k], jj = j + dj[k];
                if (ii < i0 || ii > i1 || jj < j0 || jj > j1) continue;
                if (v * phi(grid.pos(ii, jj)) <= 0.0) crossing = true;
            }
            if (crossing) ++count;
        }
    }
    return count;
}

/// Unsigned distance from a point to the curve (t, A sin(w t)) by dense
/// uniform sampling of the parameter.
inline double dense_scan_sine_distance(double A, double w, Vec2 q, double t_lo, double t_hi,
                                       int samples) {
    double best = std::numeric_limits<double>::max();
    for (int k = 0; k <= samples; ++k) {
        const double t = t_lo + (t_hi - t_lo) * k / samples;
        const double dx = t - q.x;
        const double dy = A * std::sin(w * t) - q.y;
        best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
}

/// Signed curvature of the parametric curve (gamma(t) cos t, gamma(t) sin t)
/// by five-point central differences of the coordinates.
inline double parametric_fd_curvature(const std::function<double(double)>& gamma, double theta,
                                      double dt = 3e-3) {
    auto x = [&](double t) { return gamma(t) * std::cos(t); };
    auto y = [&](double t) { return gamma(t) * std::sin(t); };
    auto d1 = [&](const std::function<double(double)>& f) {
        return (-f(theta + 2 * dt) + 8 * f(theta + dt) - 8 * f(theta - dt) + f(theta - 2 * dt)) /
               (12 * dt);
    };
    auto d2 = [&](const std::function<double(double)>& f) {
        return (-f(theta + 2 * dt) + 16 * f(theta + dt) - 30 * f(theta) + 16 * f(theta - dt) -
                f(theta - 2 * dt)) /
               (12 * dt * dt);
    };
    const double xp = d1(x), yp = d1(y);
    const double xpp = d2(x), ypp = d2(y);
    return (xp * ypp - yp * xpp) / std::pow(xp * xp + yp * yp, 1.5);
}

} // namespace curvex::test

#endif
