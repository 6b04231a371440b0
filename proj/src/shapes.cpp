#include "curvex/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvex {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// CircleShape

CircleShape::CircleShape(Vec2 center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw DataError("circle: radius must be positive");
}

double CircleShape::phi(Vec2 p) const {
    const Vec2 d = p - center_;
    return d.norm2() - radius_ * radius_;
}

std::vector<Vec2> CircleShape::interface_polyline(double spacing, const Box2& region) const {
    (void)region; // the circle is compact; emit the full contour
    const int n = std::max(16, static_cast<int>(std::ceil(2.0 * kPi * radius_ / spacing)));
    std::vector<Vec2> pts(n);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * kPi * k / n;
        pts[k] = {center_.x + radius_ * std::cos(t), center_.y + radius_ * std::sin(t)};
    }
    return pts;
}

CircleSdf::CircleSdf(Vec2 center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw DataError("circle: radius must be positive");
}

double CircleSdf::phi(Vec2 p) const { return (p - center_).norm() - radius_; }

std::vector<Vec2> CircleSdf::interface_polyline(double spacing, const Box2& region) const {
    return CircleShape(center_, radius_).interface_polyline(spacing, region);
}

// ---------------------------------------------------------------------------
// SineShape

SineShape::SineShape(double amplitude, double frequency, Vec2 shift, double tilt)
    : amplitude_(amplitude), frequency_(frequency), shift_(shift), tilt_(tilt),
      cos_t_(std::cos(tilt)), sin_t_(std::sin(tilt)) {
    if (!(amplitude > 0.0)) throw DataError("sine: amplitude must be positive");
    if (!(frequency > 0.0)) throw DataError("sine: frequency must be positive");
    if (tilt < -kPi / 2.0 || tilt >= kPi / 2.0) throw DataError("sine: tilt outside [-pi/2, pi/2)");
}

double SineShape::f(double t) const { return amplitude_ * std::sin(frequency_ * t); }
double SineShape::df(double t) const {
    return amplitude_ * frequency_ * std::cos(frequency_ * t);
}
double SineShape::ddf(double t) const {
    return -amplitude_ * frequency_ * frequency_ * std::sin(frequency_ * t);
}

Vec2 SineShape::to_canonical(Vec2 world) const {
    const Vec2 d = world - shift_;
    return {cos_t_ * d.x + sin_t_ * d.y, -sin_t_ * d.x + cos_t_ * d.y};
}

Vec2 SineShape::to_world(Vec2 canonical) const {
    return {cos_t_ * canonical.x - sin_t_ * canonical.y + shift_.x,
            sin_t_ * canonical.x + cos_t_ * canonical.y + shift_.y};
}

double SineShape::nearest_t_scan(Vec2 q, double lo, double hi, int samples) const {
    double best_t = lo;
    double best_d = std::numeric_limits<double>::max();
    const double step = (hi - lo) / samples;
    for (int k = 0; k <= samples; ++k) {
        const double t = lo + k * step;
        const double dx = t - q.x;
        const double dy = f(t) - q.y;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
    }
    return best_t;
}

double SineShape::nearest_t(Vec2 q) const {
    // Stationarity of the squared distance: g(t) = (t - qx) + (f(t) - qy) f'(t).
    const auto g = [&](double t) { return (t - q.x) + (f(t) - q.y) * df(t); };
    const auto dist2 = [&](double t) {
        const double dx = t - q.x;
        const double dy = f(t) - q.y;
        return dx * dx + dy * dy;
    };

    // |t* - qx| <= d <= |qy - f(qx)|, so the window can shrink to the
    // vertical drop; near the curve this packs the seeds densely enough to
    // bracket every nearby stationary point.
    const double vertical = std::abs(f(q.x) - q.y);
    const double reach =
        std::min(4.0 * amplitude_ + bracket_slack_, vertical + bracket_slack_);
    const double lo = q.x - reach;
    const double hi = q.x + reach;
    constexpr int kSeeds = 64;

    double gv[kSeeds + 1];
    for (int k = 0; k <= kSeeds; ++k) gv[k] = g(lo + (hi - lo) * k / kSeeds);

    // Visit sign-change brackets from the query outward; (t - qx)^2 already
    // bounds the distance, so far brackets are pruned once a candidate wins.
    struct Bracket {
        double a, b;
        double key;
    };
    std::vector<Bracket> brackets;
    for (int k = 0; k < kSeeds; ++k) {
        const double a = lo + (hi - lo) * k / kSeeds;
        const double b = lo + (hi - lo) * (k + 1) / kSeeds;
        if (gv[k] == 0.0 || gv[k] * gv[k + 1] < 0.0) {
            const double near = (q.x < a) ? a : (q.x > b ? b : q.x);
            brackets.push_back({a, b, (near - q.x) * (near - q.x)});
        }
    }
    std::sort(brackets.begin(), brackets.end(),
              [](const Bracket& x, const Bracket& y) { return x.key < y.key; });

    double best_t = q.x;
    double best_d = dist2(best_t);
    bool refined = false;
    for (const Bracket& br : brackets) {
        if (br.key > best_d) break;
        // bisection seed
        double a = br.a, b = br.b;
        double ga = g(a);
        for (int it = 0; it < 30; ++it) {
            const double m = 0.5 * (a + b);
            const double gm = g(m);
            if (ga * gm <= 0.0) b = m;
            else {
                a = m;
                ga = gm;
            }
        }
        double t = 0.5 * (a + b);
        // Newton polish on g
        bool converged = false;
        for (int it = 0; it < 20; ++it) {
            const double gt = g(t);
            const double dgt = 1.0 + df(t) * df(t) + (f(t) - q.y) * ddf(t);
            if (dgt == 0.0) break;
            const double step = gt / dgt;
            t -= step;
            if (t < br.a - 1.0 || t > br.b + 1.0) { // left the bracket, keep bisection value
                t = 0.5 * (a + b);
                break;
            }
            if (std::abs(step) < 1e-12) {
                converged = true;
                break;
            }
        }
        if (!converged) t = std::clamp(t, a - 1e-9, b + 1e-9);
        const double d = dist2(t);
        if (d < best_d) {
            best_d = d;
            best_t = t;
        }
        refined = true;
    }

    if (!refined) {
        // No stationary bracket found (flat g on the seed grid); fall back to
        // a fine scan.
        best_t = nearest_t_scan(q, lo, hi, 1 << 16);
        // parabolic-free polish with a short Newton run
        double t = best_t;
        for (int it = 0; it < 20; ++it) {
            const double gt = g(t);
            const double dgt = 1.0 + df(t) * df(t) + (f(t) - q.y) * ddf(t);
            if (dgt <= 0.0) break;
            t -= gt / dgt;
            if (std::abs(t - best_t) > (hi - lo) / (1 << 15)) break;
            if (dist2(t) <= dist2(best_t)) best_t = t;
        }
    }
    return best_t;
}

double SineShape::phi(Vec2 p) const {
    const Vec2 q = to_canonical(p);
    const double t = nearest_t(q);
    const double dx = t - q.x;
    const double dy = f(t) - q.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    const double fq = f(q.x);
    if (fq < q.y) return -d;
    if (fq == q.y) return 0.0;
    return d;
}

double SineShape::curvature_at(double t) const {
    const double c = std::cos(frequency_ * t);
    const double s = std::sin(frequency_ * t);
    const double aw2 = amplitude_ * frequency_ * frequency_;
    const double slope = amplitude_ * frequency_ * c;
    return -aw2 * s / std::pow(1.0 + slope * slope, 1.5);
}

double SineShape::target_curvature(Vec2 world_on_gamma) const {
    const Vec2 q = to_canonical(world_on_gamma);
    return curvature_at(nearest_t(q));
}

std::vector<Vec2> SineShape::interface_polyline(double spacing, const Box2& region) const {
    // Canonical t-range covering the region (plus slack for nearest points
    // just outside it).
    const Vec2 corners[4] = {region.lo,
                             {region.hi.x, region.lo.y},
                             {region.lo.x, region.hi.y},
                             region.hi};
    double tmin = std::numeric_limits<double>::max();
    double tmax = std::numeric_limits<double>::lowest();
    for (const Vec2& c : corners) {
        const double t = to_canonical(c).x;
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    const double pad = 2.0 * spacing + 1e-12;
    tmin -= pad;
    tmax += pad;
    const double max_slope = amplitude_ * frequency_;
    const double dt = spacing / std::sqrt(1.0 + max_slope * max_slope);
    const int n = std::max(2, static_cast<int>(std::ceil((tmax - tmin) / dt)));
    std::vector<Vec2> pts;
    pts.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = tmin + (tmax - tmin) * k / n;
        const Vec2 w = to_world({t, f(t)});
        if (region.contains(w)) pts.push_back(w);
    }
    return pts;
}

// ---------------------------------------------------------------------------
// RoseShape

RoseShape::RoseShape(double a, double b, int petals) : a_(a), b_(b), petals_(petals) {
    // a = 0 degenerates to a circle of radius b; b <= a self-intersects
    if (!(a >= 0.0) || !(b > a)) throw DataError("rose: requires b > a >= 0");
    if (petals < 1 || petals % 2 == 0) throw DataError("rose: petals must be odd and positive");
}

double RoseShape::gamma(double theta) const { return a_ * std::cos(petals_ * theta) + b_; }
double RoseShape::dgamma(double theta) const {
    return -a_ * petals_ * std::sin(petals_ * theta);
}
double RoseShape::ddgamma(double theta) const {
    return -a_ * petals_ * petals_ * std::cos(petals_ * theta);
}

double RoseShape::phi(Vec2 p) const {
    // At the origin the polar angle is undefined; take theta = 0, which gives
    // the interior value -(a + b).
    const double r = p.norm();
    const double theta = (r == 0.0) ? 0.0 : std::atan2(p.y, p.x);
    return r - gamma(theta);
}

double RoseShape::curvature_at(double theta) const {
    const double g = gamma(theta);
    const double dg = dgamma(theta);
    const double ddg = ddgamma(theta);
    const double num = g * g + 2.0 * dg * dg - g * ddg;
    const double den = std::pow(g * g + dg * dg, 1.5);
    return num / den;
}

double RoseShape::target_curvature(Vec2 world_on_gamma) const {
    return curvature_at(std::atan2(world_on_gamma.y, world_on_gamma.x));
}

std::vector<Vec2> RoseShape::interface_polyline(double spacing, const Box2& region) const {
    (void)region;
    const double speed_bound = std::hypot(a_ + b_, a_ * petals_);
    const int n = std::max(64, static_cast<int>(std::ceil(2.0 * kPi * speed_bound / spacing)));
    std::vector<Vec2> pts(n);
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * kPi * k / n;
        const double r = gamma(theta);
        pts[k] = {r * std::cos(theta), r * std::sin(theta)};
    }
    return pts;
}

} // namespace curvex
