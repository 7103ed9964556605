#pragma once

#include <string>
#include <vector>

#include "magnetic.hpp"

namespace blab {

// A Larmor center tagged with the side of the two-sided dynamics it belongs
// to: side 1 circles are traversed counterclockwise, side 2 clockwise. The
// center map M alternates sides at every boundary collision.
struct SidedCenter {
    Vec2 point;
    int side = 1;
};

// Candidate integral of M given as functions of the center coordinates,
// F1 on side-1 centers and F2 on side-2 centers.
struct IntegralPair {
    BivariatePolynomial F1, F2;
};

// An integral split into the minimal defining polynomials of the two offset
// curves and a cofactor of fixed sign on them. The reduced integral is
// f_plus * g when the two boundary factors coincide and f_plus * f_minus * g
// when they differ, in which case the multiplicities must match.
struct FactoredIntegral {
    FactoredIntegral(const ConvexCurve& curve, double r, BivariatePolynomial f_plus,
                     BivariatePolynomial f_minus, int k, int l,
                     BivariatePolynomial g = BivariatePolynomial::constant(1.0));

    const BivariatePolynomial& f_plus() const { return fp_; }
    const BivariatePolynomial& f_minus() const { return fm_; }
    const BivariatePolynomial& cofactor() const { return g_; }
    int k() const { return k_; }
    int l() const { return l_; }
    bool split_boundaries() const { return split_; }
    const BivariatePolynomial& reduced() const { return tilde_; }

private:
    BivariatePolynomial fp_, fm_, g_, tilde_;
    int k_, l_;
    bool split_;
};

// Coefficients of the gradient-norm transport law A u' + B u = 0 along the
// inner offset curve, with rho = rho(s) the curvature radius of the base
// curve. In the weak-field regime r > rho, so A = 2 rho / (r^2 - rho^2) is
// positive and mu = 2 rho (r + rho)^2 / (r - rho) integrates the law:
// mu * u is constant in s.
struct OdePacket {
    double A = 0.0;
    double B = 0.0;   // A' + 6 rho rho' / ((r + rho)^2 (r - rho))
    double mu = 0.0;
    double u = 0.0;   // |grad of the reduced integral|^3 on the inner offset
};

// One step of the two-sided center map: run the Larmor arc on the center's
// side, reflect at the boundary, re-center on the opposite side.
SidedCenter twosided_step(const ConvexCurve& curve, double r, SidedCenter c);

// ||det DM| - 1| with DM the central finite-difference Jacobian of the point
// part of the step at c. The step flips the traversal side and with it the
// orientation, so area preservation means |det DM| = 1. The whole
// h-neighborhood of c must lie in the annulus interior.
double symplecticity_residual(const ConvexCurve& curve, double r, SidedCenter c, double h);

struct PairReport {
    double condition1 = 0.0;  // constancy along the Larmor circles of each side
    double condition2 = 0.0;  // the collision relation between the two functions
    bool degenerate = false;  // both functions constant
};

// Largest violation of the two collision relations F1(before) = F2(after)
// over two consecutive steps from each trial center. Condition 1 is exact
// for center functions and reported as zero.
PairReport check_integral_pair(const ConvexCurve& curve, double r, const IntegralPair& pair,
                               const std::vector<SidedCenter>& trials);

// Same report for a pair given in phase coordinates. Condition 1 samples
// each function along unit tangents of Larmor circles of its side around
// the trial centers; condition 2 compares the functions across the mirror
// reflection at the exit collisions.
PairReport check_phase_pair(const ConvexCurve& curve, double r, const PhasePolynomial& phi1,
                            const PhasePolynomial& phi2, const std::vector<SidedCenter>& trials);

// Single invariant from a valid pair: F1 + F2 when that is non-constant on
// the annulus, else (F1 - F2)^2. Throws both_degenerate when neither
// combination separates centers.
BivariatePolynomial combine_pair(const ConvexCurve& curve, double r, const IntegralPair& pair);

// max |F(c_i) - F(c_0)| / max(1, |F(c_0)|) along the n-step M-orbit of c0.
double orbit_invariance_deviation(const ConvexCurve& curve, double r,
                                  const BivariatePolynomial& F, SidedCenter c0, int n_steps);

struct BoundaryConstancy {
    double c = 0.0;             // mean of F over both offset curves
    double spread_plus = 0.0;   // max - min on the inner offset
    double spread_minus = 0.0;  // max - min on the outer offset
    double gap = 0.0;           // |mean_plus - mean_minus|
};

// Sampled constancy of F on the two offset curves, 512 points each. An
// invariant of M is constant there with a common value c.
BoundaryConstancy boundary_constancy_residual(const BivariatePolynomial& F,
                                              const ConvexCurve& curve, double r);

// F minus its common boundary value, so the result vanishes on both offsets.
BivariatePolynomial normalized_on_boundaries(const BivariatePolynomial& F,
                                             const ConvexCurve& curve, double r);

// Absolute difference between the two sides of the functional equation
// F(z_plus - r (I - R_{-eps}) n) = F(z_minus + r (I - R_eps) n) at arc
// length s, with n the inward normal and R_t rotation by t. The two
// arguments are the incoming and outgoing centers of a collision with
// reflection angle eps, so an invariant of M satisfies this identically.
// At eps = 0 it reduces to equality of F across the two offsets.
double remarkable_residual(const BivariatePolynomial& F, const ConvexCurve& curve, double r,
                           double s, double epsilon);

// |ratio - (r - rho)/(r + rho)| where ratio is the gradient norm of the
// reduced integral at the inner offset point over the one at the outer
// offset point. Throws singular_gradient when either gradient vanishes.
double gradient_ratio_residual(const FactoredIntegral& integral, const ConvexCurve& curve,
                               double r, double s);

// Transport coefficients at arc length s. A' enters B by central finite
// differences of A; u is filled from the integral when one is supplied and
// is zero otherwise.
OdePacket ode_and_factor(const ConvexCurve& curve, double r, double s,
                         const FactoredIntegral* integral = nullptr);

struct ConstancyEstimate {
    double C = 0.0;
    double spread = 0.0;  // (max - min) / |mean|
    int skipped = 0;      // samples with |H| below threshold
};

// Sampled constancy of q(s) = 2 (2rH - G)^2 (rH - G) / H^2 along the inner
// offset, with H the affine Hessian of the reduced integral and G its
// gradient norm cubed. Samples where |H| < 1e-9 are skipped and counted.
ConstancyEstimate identity22_constancy(const FactoredIntegral& integral,
                                       const ConvexCurve& curve, double r, int n_samples);

struct SingularBranch {
    Vec2 point;            // singular point the branch passes through
    double index = 0.0;    // estimated Puiseux index
    double index_ci = 0.0; // dispersion of the estimate
};

struct IntegrabilityVerdict {
    std::string verdict;
    std::vector<SingularBranch> evidence;
};

// Searches the offset polynomial of the curve for real singular points and
// estimates the Puiseux index of every real branch through them. A branch
// of index below 1.9 rules out a polynomial integral; smooth or isolated
// singular loci leave the question open. Requires a curve family with a
// closed-form offset polynomial.
IntegrabilityVerdict subquadratic_verdict(const ConvexCurve& curve, double r);

}  // namespace blab
