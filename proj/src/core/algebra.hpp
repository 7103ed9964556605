#pragma once

#include <limits>
#include <vector>

#include "polynomial.hpp"

namespace blab {

// H(f) = f_xx f_y^2 - 2 f_xy f_x f_y + f_yy f_x^2, the numerator of the
// implicit curvature of {f = 0}.
double affine_hessian(const Jet2& j);
double affine_hessian(const BivariatePolynomial& f, Vec2 p);

// Signed curvature -H(f)/|grad f|^3 with respect to the normal (f_x, f_y).
// Throws Errc::singular_point when the gradient is below 1e-12.
double implicit_curvature(const BivariatePolynomial& f, Vec2 p);

struct Box {
    Vec2 lo, hi;
};

// All points in the region with f = f_x = f_y = 0: Gauss-Newton on the
// overdetermined 3-condition system, seeded from a 200x200 grid; duplicates
// merged within 1e-8; every result re-verified scale-aware.
std::vector<Vec2> find_singular_points(const BivariatePolynomial& f, const Box& region);

struct BranchEstimate {
    Vec2 base_point;
    double puiseux_index = 0.0;  // estimated p/q
    double index_ci = 0.0;       // inter-quartile range of pairwise slopes
    // log-log vanishing orders of H(aux) and |grad aux|^3 against the
    // adapted abscissa; NaN when no aux polynomial was supplied.
    double order_a = std::numeric_limits<double>::quiet_NaN();
    double order_b = std::numeric_limits<double>::quiet_NaN();
    int samples_used = 0;
};

struct BranchAnalysis {
    std::vector<BranchEstimate> branches;
    // Arcs whose continuation never reached the inner radius.
    int failed_traces = 0;
};

// Traces the real branches of {f = 0} into a singular point by
// predictor-corrector continuation from circles of radius 1e-2 down to 1e-7,
// estimating each branch's Puiseux index by median log-log regression over
// the trailing two decades. Arcs are grouped into branches by the tangent
// ray they approach, read off the lowest nonvanishing homogeneous form of
// the re-centered polynomial. Isolated points yield an empty list.
BranchAnalysis estimate_branch(const BivariatePolynomial& f, Vec2 singular_point,
                               const BivariatePolynomial* aux = nullptr);

// Follows the oval of {f = 0} through a regular seed point until it closes
// up; throws Errc::numerical_failure if it never does.
std::vector<Vec2> trace_closed_curve(const BivariatePolynomial& f, Vec2 seed, double step);

}  // namespace blab
