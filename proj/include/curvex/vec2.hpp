#ifndef CURVEX_VEC2_HPP
#define CURVEX_VEC2_HPP

#include <cmath>

namespace curvex {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

/// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y].
struct Box2 {
    Vec2 lo;
    Vec2 hi;

    static Box2 centered(Vec2 c, double half_width) {
        return {{c.x - half_width, c.y - half_width}, {c.x + half_width, c.y + half_width}};
    }
    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    Box2 grown(double m) const { return {{lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}}; }
};

} // namespace curvex

#endif
