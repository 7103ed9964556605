#pragma once

#include <vector>

#include "birkhoff.hpp"
#include "curves.hpp"
#include "polynomial.hpp"
#include "vec2.hpp"

namespace blab {

// Polar duality about a fixed pole. Points and curves cross this interface in
// absolute coordinates; everything measured against the pole (line records,
// the x^2 + y^2 weights below) is pole-centered.
struct DualityFrame {
    Vec2 pole;
};

// The line u x + v y = 1 in pole-centered coordinates. Lines through the
// pole have no such record, which is exactly the ThroughPole error.
struct LineRecord {
    double u = 0.0;
    double v = 0.0;
};

// Integral of the angular billiard, G = F / (x^2 + y^2)^p pole-centered,
// with deg F <= 2p. F proportional to (x^2 + y^2)^p makes G constant, which
// conserves trivially; the flag marks that degenerate case.
struct AngularIntegralModel {
    BivariatePolynomial F;
    int p = 1;
    bool trivial_constant = false;

    double eval(Vec2 rel) const;  // G at a pole-centered point
};

// Mean of a quantity expected constant over samples, with its relative
// spread (max - min) / |mean|.
struct ConstancyStats {
    double mean = 0.0;
    double spread = 0.0;
};

// Dual of an absolute point (not the pole) and of a line record.
LineRecord dualize(const DualityFrame& frame, Vec2 point);
Vec2 dualize(const DualityFrame& frame, const LineRecord& line);

// Record of the line through two absolute points, or through a point along
// a direction. ThroughPole when the line passes within 1e-12 of the pole.
LineRecord line_through(const DualityFrame& frame, Vec2 P, Vec2 Q);
LineRecord line_along(const DualityFrame& frame, Vec2 P, Vec2 direction);

// Evaluate u x + v y - 1 at an absolute point (zero when incident).
double line_residual(const DualityFrame& frame, const LineRecord& line, Vec2 P);

// Dual curve: parameter t on gamma maps to the dual point of gamma's tangent
// line at t. The view's period is gamma's length and its velocity is
// analytic, so tangency solves on the dual side see a smooth curve.
CurveView dual_curve(const ConvexCurve& gamma, const DualityFrame& frame);

// Reflection of A about the ray through the tangency T: reflects ray OA
// across line OT and intersects with line AT. The angular step is this
// reflection applied to the right tangency.
Vec2 angular_reflect(const DualityFrame& frame, Vec2 A, Vec2 T);

// One step of the angular billiard outside Gamma. The tangency is the
// "right" one, fixed by sign((T - A) x (O - A)) > 0 for counterclockwise
// Gamma. InsideCurve when A is not exterior; OnExclusionSet when the
// reflected ray is parallel to the tangent line within angle 1e-10 (or
// fails to reach it).
Vec2 angular_step(const CurveView& Gamma, const DualityFrame& frame, Vec2 A);
Vec2 angular_step(const ConvexCurve& Gamma, const DualityFrame& frame, Vec2 A);

// |A(dual of incoming line) - dual of outgoing line| for one collision of
// the chord billiard in gamma, with the angular map acting outside the dual
// curve of gamma.
double duality_equivalence_residual(const ConvexCurve& gamma, const DualityFrame& frame,
                                    const BoundaryCollision& collision);

// Push a homogeneous degree-2p integral Phi(sigma, v1, v2) of the chord
// billiard to the angular side: F(x, y) = Phi(1, y, -x), G = F/(x^2+y^2)^p.
AngularIntegralModel transport_integral(const SigmaPolynomial& Phi, int p);

// Residual of the reparametrization identity
//   (-mu/eps)^{2m} Ft(x + eps Ft_y, y - eps Ft_x) = Ft(x + mu Ft_y, y - mu Ft_x),
//   mu = -(x^2+y^2) eps / (x^2+y^2 + 2 eps (x Ft_y - y Ft_x)),
// at a pole-centered point with |Ft| < 1e-9, normalized by the larger side.
// MuSingular when |mu denominator| <= 1e-6; eps = 0 returns 0 exactly.
double identity1_residual(const BivariatePolynomial& Ft, double m, Vec2 point, double eps);

// Constancy of g^3 H(f) / (x^2+y^2)^{3m-3} over pole-centered samples of
// {f = 0}, H the affine Hessian. The mean estimates the constant.
ConstancyStats identity2_residual(const BivariatePolynomial& f, const BivariatePolynomial& g,
                                  double m, const std::vector<Vec2>& samples);

}  // namespace blab
