#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "vec2.hpp"

namespace blab {

// Boundary data at arc length s. The curve is traversed counterclockwise and
// parametrized by arc length, so |tangent| = 1 and inward_normal = J(tangent).
struct FramePacket {
    Vec2 point;
    Vec2 tangent;
    Vec2 inward_normal;
    double curvature = 0.0;    // k(s) > 0 on a convex boundary
    double radius = 0.0;       // rho(s) = 1/k(s)
    double radius_rate = 0.0;  // d rho / ds
};

struct Cusp {
    double s = 0.0;  // arc length on the base curve where rho(s) = r
    Vec2 point;      // the cusp of the inner offset, gamma(s) + r J gamma'(s)
};

// Solutions of rho(s) = r. Regular crossings land in `cusps`; parameters where
// the equation is met but rho'(s) ~ 0 (non-regular value of the curvature
// radius) are reported separately and excluded.
struct CuspScan {
    std::vector<Cusp> cusps;
    std::vector<double> degenerate;
};

struct WeakFieldReport {
    bool admissible = false;
    double curvature_min = 0.0;
    double margin = 0.0;  // curvature_min - beta
};

// Magnetic field strength and the equivalent Larmor radius r = 1/beta.
struct FieldConfig {
    double beta = 0.0;
    double r = 0.0;
    bool from_beta_input = true;  // which of the two reciprocal fields was given

    static FieldConfig from_beta(double beta);
    static FieldConfig from_radius(double r);
};

// Parametrized closed curve seen through a generic lens: position and
// velocity (non-unit tangent) as functions of a parameter of the given
// period. Used where the geometry is not one of the built-in families,
// e.g. polar duals of boundaries.
struct CurveView {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> velocity;
    double period = 0.0;
};

// Smooth strictly convex closed boundary, one of three families:
//   circle:R                radius R about the origin
//   ellipse:a,b             semi-axes a >= b > 0 about the origin
//   trig:c0;a1,b1;a2,b2;... r(phi) = c0 + sum ak cos(k phi) + bk sin(k phi)
// All are parametrized counterclockwise by arc length via a 4096-interval
// table mapping arc length to the native angle parameter; table lookups are
// Hermite-interpolated and Newton-polished, so positions and frames are
// accurate to roundoff.
class ConvexCurve {
public:
    static ConvexCurve circle(double radius);
    static ConvexCurve ellipse(double a, double b);
    static ConvexCurve radial_trig(double c0,
                                   const std::vector<std::pair<double, double>>& harmonics,
                                   Vec2 center = {0.0, 0.0});
    static ConvexCurve parse(const std::string& spec);

    double length() const { return length_; }
    FramePacket frame(double s) const;
    Vec2 point(double s) const;
    Vec2 offset_point(double s, double d) const;         // d > 0 offsets inward
    double offset_tangent_scale(double s, double d) const;  // 1 - k(s) d

    CuspScan find_cusps(double r) const;
    WeakFieldReport validate_weak_field(double beta) const;
    double curvature_min() const { return k_min_; }
    double curvature_max() const { return k_max_; }

    // Signed interiority: positive inside, zero on the boundary, negative
    // outside. All three families are star-shaped about their center, so the
    // radial gauge r(theta) - |p - center| serves as the indicator.
    double inside_indicator(Vec2 p) const;

    // Arc length of the boundary point on the ray from the center through p.
    double arc_of_point(Vec2 p) const;

    // Arc-length parametrized view (period = length).
    CurveView view() const;

    std::string spec_string() const;

private:
    enum class Kind { Circle, Ellipse, Trig };

    ConvexCurve() = default;
    void build_table();
    void scan_curvature();

    // Native-parameter evaluations.
    Vec2 point_phi(double phi) const;
    Vec2 d1_phi(double phi) const;   // d gamma / d phi
    double speed(double phi) const;  // |d gamma / d phi|
    double curvature_phi(double phi) const;
    double radial_gauge(double theta) const;  // r(theta) of the star-shaped form
    void trig_eval(double phi, double& r, double& dr, double& ddr) const;

    double phi_of_s(double s) const;
    double s_of_phi(double phi) const;
    double rho_of_s(double s) const;
    double rho_rate(double s, double phi) const;
    double segment_length(double phi0, double phi1) const;  // Gauss quadrature of speed

    Kind kind_ = Kind::Circle;
    double a_ = 1.0, b_ = 1.0;  // circle stores radius in both
    double c0_ = 0.0;
    std::vector<std::pair<double, double>> harm_;
    Vec2 center_{0.0, 0.0};

    double length_ = 0.0;
    double k_min_ = 0.0, k_max_ = 0.0;
    std::vector<double> phi_nodes_, s_nodes_, w_nodes_;
};

}  // namespace blab
