#pragma once

#include <random>
#include <vector>

#include "birkhoff.hpp"
#include "curves.hpp"
#include "polynomial.hpp"

namespace blab {

enum class Orientation { ccw, cw };

// One collision of the magnetic billiard: the particle left `position` with
// unit `velocity` and will travel the Larmor circle around `center` until the
// next boundary hit. The center is position + r J(velocity) for ccw motion
// and position - r J(velocity) for cw.
struct LarmorArcState {
    Vec2 position;
    Vec2 velocity;
    Orientation orientation = Orientation::ccw;
    Vec2 center;
};

// Annulus of Larmor centers whose circle of radius r meets the closed domain.
// Its outer boundary is the outward offset of the curve and its inner
// boundary is the inward offset, which in the weak-field regime is the locus
// of centers whose circle circumscribes the domain.
struct CenterAnnulus {
    CenterAnnulus(const ConvexCurve& curve, double r);

    const ConvexCurve& curve() const { return *curve_; }
    double r() const { return r_; }

    Vec2 inner_boundary(double s) const;  // gamma_{+r}
    Vec2 outer_boundary(double s) const;  // gamma_{-r}

    // Distance from the center to the boundary curve, minimized and maximized
    // over arc length.
    double nearest_boundary_distance(Vec2 center) const;
    double farthest_boundary_distance(Vec2 center) const;

    // Membership by the defining property: the circle of radius r around the
    // center meets the closed domain.
    bool contains(Vec2 center) const;

    // Membership by the boundary curves: inside the outer offset and not
    // strictly inside the inner offset. Agrees with contains() away from the
    // boundaries; kept separate as a consistency oracle.
    bool contains_by_offsets(Vec2 center) const;

private:
    const ConvexCurve* curve_;
    double r_;
};

// Exit collision of the Larmor circle around `center`: of the two boundary
// intersections, the one where the traversal velocity points outward. The
// collision's incoming direction is that traversal velocity and outgoing is
// its mirror reflection.
BoundaryCollision larmor_exit(const ConvexCurve& curve, double r, Vec2 center,
                              Orientation orientation);

// One step of the ordinary magnetic billiard: exit, reflect, re-center.
// The orientation is preserved.
LarmorArcState magnetic_step(const ConvexCurve& curve, double r, Vec2 center,
                             Orientation orientation);

// Defining polynomial of the pair of offset curves at distance r from the
// ellipse x^2/a^2 + y^2/b^2 = 1, degree 8. For a = b it degenerates to
// (x^2+y^2)^2 times the product of the two concentric offset circles.
BivariatePolynomial ellipse_offset_polynomial(double a, double b, double r);

// Offset polynomial for the curve families that admit a closed form, which
// are circles and ellipses. Throws no_offset_model otherwise.
BivariatePolynomial offset_polynomial(const ConvexCurve& curve, double r);

// The singular point of the a=2, b=1 offset polynomial in the open first
// quadrant, in closed form.
Vec2 ellipse_offset_singular_point(double r);

// Max over n samples of each offset curve of |poly| at the sample, scaled by
// the largest monomial magnitude within the sample's roundoff uncertainty.
double offset_vanishing_residual(const BivariatePolynomial& poly, const ConvexCurve& curve,
                                 double r, int n_samples);

// Uniform sample from the annulus interior, by rejection from the bounding
// box of the offset curves. A positive margin keeps the sample at least that
// far from both boundaries, measured in boundary-distance terms.
Vec2 sample_annulus_center(const CenterAnnulus& annulus, std::mt19937& rng, double margin = 0.0);

}  // namespace blab
