#ifndef CURVEX_SHAPES_HPP
#define CURVEX_SHAPES_HPP

#include <vector>

#include "curvex/errors.hpp"
#include "curvex/vec2.hpp"

namespace curvex {

/// Implicit interface: a level-set value anywhere plus a dense polyline along
/// the zero isocontour, used by field evaluation to enumerate band nodes.
class ImplicitShape {
  public:
    virtual ~ImplicitShape() = default;
    virtual double phi(Vec2 p) const = 0;
    /// Points along Gamma covering `region`, consecutive points at most
    /// `spacing` apart in arc length.
    virtual std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const = 0;
};

/// Circular interface with the quadratic (non-signed-distance) level set
/// phi = |x - xc|^2 - r^2.
class CircleShape : public ImplicitShape {
  public:
    CircleShape(Vec2 center, double radius);

    double phi(Vec2 p) const override;
    std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const override;

    /// Exact curvature of the interface (reciprocal radius).
    double target_curvature() const { return 1.0 / radius_; }

    Vec2 center() const { return center_; }
    double radius() const { return radius_; }

  private:
    Vec2 center_;
    double radius_;
};

/// Exact signed-distance circle, negative inside.  Used as a reference field
/// for convergence studies.
class CircleSdf : public ImplicitShape {
  public:
    CircleSdf(Vec2 center, double radius);

    double phi(Vec2 p) const override;
    std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const override;

    Vec2 center() const { return center_; }
    double radius() const { return radius_; }

  private:
    Vec2 center_;
    double radius_;
};

/// Sinusoidal interface y = A sin(w t) in a canonical frame that is tilted by
/// theta_s and shifted by x_s.  phi is the signed shortest distance to the
/// curve: negative above it, positive below.
class SineShape : public ImplicitShape {
  public:
    SineShape(double amplitude, double frequency, Vec2 shift, double tilt);

    double phi(Vec2 p) const override;
    std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const override;

    /// Exact signed curvature at the point of Gamma nearest to a world-space
    /// query that is already close to the interface.
    double target_curvature(Vec2 world_on_gamma) const;

    /// Curvature as a function of the curve parameter.
    double curvature_at(double t) const;

    /// Parameter of the point on the curve nearest to a canonical-frame query.
    double nearest_t(Vec2 canonical) const;

    Vec2 to_canonical(Vec2 world) const;
    Vec2 to_world(Vec2 canonical) const;

    double amplitude() const { return amplitude_; }
    double frequency() const { return frequency_; }

    /// Extra padding of the nearest-point bracket (callers working on a grid
    /// set this to 2h).
    void set_bracket_slack(double s) { bracket_slack_ = s; }

  private:
    double f(double t) const;
    double df(double t) const;
    double ddf(double t) const;
    double nearest_t_scan(Vec2 canonical, double lo, double hi, int samples) const;

    double amplitude_;
    double frequency_;
    Vec2 shift_;
    double tilt_;
    double cos_t_, sin_t_;
    double bracket_slack_ = 0.05;
};

/// Polar rose r = a cos(p theta) + b; five petals for p = 5.
class RoseShape : public ImplicitShape {
  public:
    RoseShape(double a, double b, int petals);

    double phi(Vec2 p) const override;
    std::vector<Vec2> interface_polyline(double spacing, const Box2& region) const override;

    /// gamma(theta) and derivatives.
    double gamma(double theta) const;
    double dgamma(double theta) const;
    double ddgamma(double theta) const;

    /// Exact signed curvature at polar angle theta.
    double curvature_at(double theta) const;

    /// Exact curvature at the polar angle of a near-interface world point.
    double target_curvature(Vec2 world_on_gamma) const;

    double a() const { return a_; }
    double b() const { return b_; }
    int petals() const { return petals_; }

  private:
    double a_, b_;
    int petals_;
};

} // namespace curvex

#endif
