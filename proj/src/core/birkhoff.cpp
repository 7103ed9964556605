#include "birkhoff.hpp"

#include <cmath>
#include <string>

#include "rootfind.hpp"

namespace blab {

BoundaryCollision reflect_step(const ConvexCurve& curve, double s, Vec2 direction) {
    double L = curve.length();
    FramePacket start = curve.frame(s);
    if (dot(direction, start.inward_normal) <= 1e-10)
        fail(Errc::tangential_start, "ray direction not transversal to the boundary");

    Vec2 p = start.point;
    auto along = [&](double t) { return curve.inside_indicator(p + direction * t); };

    // Step off the departure point, then march until the ray leaves the
    // domain. A chord of a convex oval is at most a diameter, so two lengths
    // of marching can only fail if the departure offset already overshot an
    // extremely grazing chord.
    double t_lo = 1e-9 * L;
    double v_lo = along(t_lo);
    if (v_lo <= 0.0)
        fail(Errc::tangential_start, "chord shorter than the departure offset");
    double t_hi = 0.0, v_hi = 0.0;
    bool bracketed = false;
    for (int k = 1; k <= 128; ++k) {
        double t = t_lo + (L / 64.0) * k;
        double v = along(t);
        if (v <= 0.0) {
            t_hi = t;
            v_hi = v;
            bracketed = true;
            break;
        }
        t_lo = t;
        v_lo = v;
    }
    if (!bracketed) fail(Errc::numerical_failure, "ray never left the domain");
    double t_hit = refine_root(along, t_lo, t_hi, v_lo, v_hi, 1e-12);

    BoundaryCollision c;
    c.s = curve.arc_of_point(p + direction * t_hit);
    FramePacket hit = curve.frame(c.s);
    c.point = hit.point;
    c.incoming = direction;
    Vec2 n = hit.inward_normal;
    Vec2 out = direction - n * (2.0 * dot(n, direction));
    c.outgoing = out * (1.0 / norm(out));
    c.eps = std::atan2(dot(c.outgoing, n), dot(c.outgoing, hit.tangent));
    return c;
}

Vec2 direction_from_angle(const ConvexCurve& curve, double s, double eps) {
    FramePacket f = curve.frame(s);
    return f.tangent * std::cos(eps) + f.inward_normal * std::sin(eps);
}

OrbitTrace orbit(const ConvexCurve& curve, double s, Vec2 direction, int n_steps) {
    if (n_steps < 1) fail(Errc::invalid_argument, "orbit needs at least one step");
    OrbitTrace trace;
    trace.collisions.reserve(n_steps);
    double cur_s = s;
    Vec2 cur_d = direction;
    for (int i = 1; i <= n_steps; ++i) {
        try {
            trace.collisions.push_back(reflect_step(curve, cur_s, cur_d));
        } catch (const Error& e) {
            fail(e.code(), "step " + std::to_string(i) + ": " + e.what());
        }
        cur_s = trace.collisions.back().s;
        cur_d = trace.collisions.back().outgoing;
    }
    return trace;
}

double integral_deviation(const OrbitTrace& trace, const PhasePolynomial& F) {
    if (trace.collisions.empty()) fail(Errc::invalid_argument, "empty trace");
    double f0 = F.eval(trace.collisions.front().point, trace.collisions.front().outgoing);
    double dev = 0.0;
    for (const BoundaryCollision& c : trace.collisions)
        dev = std::max(dev, std::abs(F.eval(c.point, c.outgoing) - f0));
    return dev / std::max(1.0, std::abs(f0));
}

}  // namespace blab
