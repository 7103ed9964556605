#pragma once

#include <vector>

#include "curves.hpp"
#include "polynomial.hpp"
#include "vec2.hpp"

namespace blab {

// Point of the energy level: a position with a unit velocity.
struct PhaseState {
    Vec2 position;
    Vec2 velocity;
};

// One bounce: where the chord lands and how it reflects there.
struct BoundaryCollision {
    double s = 0.0;    // arc length of the hit
    Vec2 point;        // gamma(s)
    Vec2 incoming;     // unit chord direction arriving at the hit
    Vec2 outgoing;     // reflected direction, renormalized to unit length
    double eps = 0.0;  // angle in (0, pi) between outgoing and the tangent
};

struct OrbitTrace {
    std::vector<BoundaryCollision> collisions;
};

// Next bounce of the chord leaving gamma(s) with the given unit direction.
// The hit is bracketed by the sign change of the inside indicator along the
// ray (steps of L/64 after a 1e-9 L departure offset) and polished to
// roundoff, so chords shorter than the departure offset are rejected as
// tangential.
BoundaryCollision reflect_step(const ConvexCurve& curve, double s, Vec2 direction);

// Inward direction making angle eps in (0, pi) with the tangent at gamma(s).
Vec2 direction_from_angle(const ConvexCurve& curve, double s, double eps);

OrbitTrace orbit(const ConvexCurve& curve, double s, Vec2 direction, int n_steps);

// Max over the trace of |F_i - F_0| / max(1, |F_0|), with F evaluated at the
// outgoing state of every collision.
double integral_deviation(const OrbitTrace& trace, const PhasePolynomial& F);

}  // namespace blab
