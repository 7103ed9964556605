#pragma once

/* C surface of the billiard laboratory: opaque handles over the C++ core,
   error codes instead of exceptions. Handles are immutable after creation
   and safe to share across threads; the error state is per thread.

   Constructors return NULL on failure; every other fallible call returns
   BLAB_OK or an error code, with blab_last_error() and
   blab_last_error_message() describing the most recent failure in the
   calling thread. Buffer-filling calls write at most `capacity` entries but
   report the full count, so a second call with a larger buffer completes a
   truncated first one. Text-filling calls always NUL-terminate and report
   the full length excluding the terminator. */

#ifdef __cplusplus
extern "C" {
#endif

int blab_abi_version(void);

/* Stable error values (append only). */
enum {
    BLAB_OK = 0,
    BLAB_INVALID_ARGUMENT = 1,
    BLAB_SINGULAR_POINT = 2,
    BLAB_TANGENTIAL_START = 3,
    BLAB_AT_POLE = 4,
    BLAB_THROUGH_POLE = 5,
    BLAB_ON_EXCLUSION_SET = 6,
    BLAB_INSIDE_CURVE = 7,
    BLAB_NOT_HOMOGENEOUS = 8,
    BLAB_MU_SINGULAR = 9,
    BLAB_NO_INTERSECTION = 10,
    BLAB_TANGENT_CIRCLE = 11,
    BLAB_BOTH_DEGENERATE = 12,
    BLAB_SINGULAR_GRADIENT = 13,
    BLAB_BRANCH_TRACE_FAILED = 14,
    BLAB_NO_OFFSET_MODEL = 15,
    BLAB_NUMERICAL_FAILURE = 16
};

int blab_last_error(void);
const char* blab_last_error_message(void);

/* Larmor traversal directions. */
enum { BLAB_CCW = 0, BLAB_CW = 1 };

typedef struct blab_curve blab_curve;       /* convex boundary curve */
typedef struct blab_poly blab_poly;         /* polynomial in (x, y) */
typedef struct blab_phase blab_phase;       /* polynomial in (x, y, v1, v2) */
typedef struct blab_factored blab_factored; /* factored two-sided integral */

/* Boundary data at arc length s. */
typedef struct blab_frame {
    double point[2];
    double tangent[2];
    double inward_normal[2];
    double curvature;
    double radius;      /* 1 / curvature */
    double radius_rate; /* d radius / ds */
} blab_frame;

/* One boundary collision: where a trajectory lands and how it reflects. */
typedef struct blab_collision {
    double s;
    double point[2];
    double incoming[2];
    double outgoing[2];
    double eps; /* angle in (0, pi) between outgoing and the tangent */
} blab_collision;

/* Cusp of an inner offset curve: rho(s) = r. */
typedef struct blab_cusp {
    double s;
    double point[2];
} blab_cusp;

/* Real branch of a plane curve through a singular point. order_a/order_b
   are the auxiliary vanishing orders and are NaN when no auxiliary
   polynomial was supplied; verdict evidence leaves them NaN as well. */
typedef struct blab_branch {
    double point[2];
    double index; /* estimated Puiseux index */
    double index_ci;
    double order_a;
    double order_b;
    int samples_used;
} blab_branch;

/* Coefficients of the gradient-norm transport law along an inner offset. */
typedef struct blab_ode {
    double A;
    double B;
    double mu;
    double u;
} blab_ode;

/* Residuals of the two conditions a two-sided integral pair must satisfy. */
typedef struct blab_pair_report {
    double condition1;
    double condition2;
    int degenerate; /* both functions constant */
} blab_pair_report;

/* Sampled constancy of a function on the two offset curves. */
typedef struct blab_constancy {
    double c; /* common value, estimated as the mean over both curves */
    double spread_plus;
    double spread_minus;
    double gap; /* |mean on inner offset - mean on outer offset| */
} blab_constancy;

/* ---- curves ---- */

/* Grammar: `circle:R`, `ellipse:a,b`, `trig:c0;a1,b1;a2,b2;...`. */
blab_curve* blab_curve_parse(const char* spec);
void blab_curve_free(blab_curve* curve);

int blab_curve_length(const blab_curve* curve, double* length);
int blab_curve_point(const blab_curve* curve, double s, double point[2]);
int blab_curve_frame(const blab_curve* curve, double s, blab_frame* frame);
/* d > 0 offsets inward. */
int blab_curve_offset_point(const blab_curve* curve, double s, double d, double point[2]);
int blab_curve_curvature_range(const blab_curve* curve, double* k_min, double* k_max);
/* Weak-field test for field strength beta: margin = k_min - beta. */
int blab_curve_weak_field(const blab_curve* curve, double beta, int* admissible, double* margin);
/* Cusps of the inner offset at distance r; parameters where rho(s) = r is
   met non-regularly land in `degenerate` instead. */
int blab_curve_cusps(const blab_curve* curve, double r, blab_cusp* cusps, int capacity,
                     int* count, double* degenerate, int degenerate_capacity,
                     int* degenerate_count);
/* Round-trip of the construction spec. */
int blab_curve_spec(const blab_curve* curve, char* buffer, int capacity, int* length);

/* ---- polynomials ---- */

/* Expressions over x, y with +, -, *, ^, parentheses, decimal literals. */
blab_poly* blab_poly_parse(const char* text);
void blab_poly_free(blab_poly* poly);

int blab_poly_eval(const blab_poly* poly, double x, double y, double* value);
int blab_poly_gradient(const blab_poly* poly, double x, double y, double gradient[2]);
int blab_poly_degree(const blab_poly* poly, int* degree);
/* Canonical `c*x^i*y^j` text with round-trip coefficients. */
int blab_poly_text(const blab_poly* poly, char* buffer, int capacity, int* length);

/* Expressions over x, y, v1, v2. */
blab_phase* blab_phase_parse(const char* text);
void blab_phase_free(blab_phase* phase);
int blab_phase_eval(const blab_phase* phase, double x, double y, double v1, double v2,
                    double* value);

/* ---- chord billiard ---- */

/* Inward direction making angle eps in (0, pi) with the tangent at s. */
int blab_direction_from_angle(const blab_curve* curve, double s, double eps, double direction[2]);
/* Next bounce of the chord leaving arc length s with the given direction. */
int blab_reflect_step(const blab_curve* curve, double s, const double direction[2],
                      blab_collision* collision);
/* n successive bounces from the same start. */
int blab_birkhoff_orbit(const blab_curve* curve, double s, const double direction[2], int n_steps,
                        blab_collision* collisions);

/* ---- angular billiard ---- */

/* One step of the angular billiard about the pole, acting on an exterior
   point. */
int blab_angular_step(const blab_curve* curve, const double pole[2], const double point[2],
                      double next[2]);
/* n successive steps; points_xy receives x0, y0, x1, y1, ... for the n
   images (the start is not recorded). */
int blab_angular_orbit(const blab_curve* curve, const double pole[2], const double start[2],
                       int n_steps, double* points_xy);

/* Residual of the reparametrization identity for f at a pole-centered point
   of {f = 0}, with 2m the degree of f. */
int blab_identity1_residual(const blab_poly* f, double m, double x, double y, double eps,
                            double* residual);
/* Constancy of g^3 H(f) / (x^2+y^2)^(3m-3) over pole-centered samples of
   {f = 0}; samples_xy holds x0, y0, x1, y1, ... */
int blab_identity2_constancy(const blab_poly* f, const blab_poly* g, double m,
                             const double* samples_xy, int n_samples, double* mean,
                             double* spread);

/* ---- magnetic billiard ---- */

/* Exit collision of the Larmor circle of radius r around the center. */
int blab_larmor_exit(const blab_curve* curve, double r, const double center[2], int orientation,
                     blab_collision* collision);
/* n steps of the ordinary magnetic billiard from the given center. Row i
   receives the collision of step i and the center after it (centers_xy
   holds cx0, cy0, cx1, cy1, ...). */
int blab_magnetic_orbit(const blab_curve* curve, double r, const double center[2],
                        int orientation, int n_steps, blab_collision* collisions,
                        double* centers_xy);

/* Defining polynomial of the two offset curves at distance r, for the curve
   families with a closed form (circles and ellipses). */
blab_poly* blab_offset_polynomial(const blab_curve* curve, double r);
/* Max over n samples of each offset curve of |poly|, scaled by the largest
   monomial magnitude within the sample's roundoff uncertainty. */
int blab_offset_vanishing_residual(const blab_poly* poly, const blab_curve* curve, double r,
                                   int n_samples, double* residual);
/* n centers drawn uniformly from the annulus of Larmor centers whose circle
   meets the domain, at least `margin` inside both boundaries. */
int blab_annulus_samples(const blab_curve* curve, double r, int n, unsigned seed, double margin,
                         double* centers_xy);

/* ---- plane curve singularities ---- */

/* All points of the box with f = f_x = f_y = 0. */
int blab_find_singular_points(const blab_poly* f, const double box_lo[2], const double box_hi[2],
                              double* points_xy, int capacity, int* count);
/* Puiseux index estimates for the real branches of {f = 0} through the
   point; aux may be NULL. failed_traces counts arcs whose continuation
   never reached the inner radius. */
int blab_estimate_branch(const blab_poly* f, const double point[2], const blab_poly* aux,
                         blab_branch* branches, int capacity, int* count, int* failed_traces);

/* ---- two-sided magnetic billiard ---- */

/* One step of the two-sided center map: run the Larmor arc on the center's
   side (1 = counterclockwise, 2 = clockwise), reflect, re-center on the
   opposite side. */
int blab_twosided_step(const blab_curve* curve, double r, const double center[2], int side,
                       double next[2], int* next_side);
/* n steps from the given center. Row i receives the center before step i,
   its side, and the collision of step i: rows holds cx, cy, exit s, eps per
   step (4 doubles each). */
int blab_twosided_orbit(const blab_curve* curve, double r, const double center[2], int side,
                        int n_steps, double* rows, int* sides);
/* max |F(c_i) - F(c_0)| / max(1, |F(c_0)|) along the n-step orbit. */
int blab_twosided_orbit_deviation(const blab_curve* curve, double r, const blab_poly* F,
                                  const double center[2], int side, int n_steps,
                                  double* deviation);
/* ||det DM| - 1| for the finite-difference Jacobian of the point part of
   the step, stencil width h. */
int blab_symplecticity_residual(const blab_curve* curve, double r, const double center[2],
                                int side, double h, double* residual);

/* Largest violation of the collision relations F1(before) = F2(after) over
   two consecutive steps from each of n side-1 trial centers drawn from the
   annulus with the given seed. */
int blab_pair_check(const blab_curve* curve, double r, const blab_poly* f1, const blab_poly* f2,
                    int n_trials, unsigned seed, blab_pair_report* report);
/* Same report for a pair given in phase coordinates: condition 1 samples
   each function along its side's Larmor circles, condition 2 compares the
   two across the mirror reflection at the exit collisions. */
int blab_phase_pair_check(const blab_curve* curve, double r, const blab_phase* phi1,
                          const blab_phase* phi2, int n_trials, unsigned seed,
                          blab_pair_report* report);
/* Single invariant from a valid pair: F1 + F2 when that is non-constant on
   the annulus, else (F1 - F2)^2. */
blab_poly* blab_combine_pair(const blab_curve* curve, double r, const blab_poly* f1,
                             const blab_poly* f2);

int blab_boundary_constancy(const blab_poly* F, const blab_curve* curve, double r,
                            blab_constancy* report);
/* F minus its common boundary value. */
blab_poly* blab_normalized_on_boundaries(const blab_poly* F, const blab_curve* curve, double r);
/* Functional equation of an invariant across one collision at arc length s
   with reflection angle eps. */
int blab_remarkable_residual(const blab_poly* F, const blab_curve* curve, double r, double s,
                             double eps, double* residual);

/* Integral split into the minimal polynomials of the two offset curves with
   multiplicities k, l and a cofactor of fixed sign on them; g = NULL means
   the constant 1. */
blab_factored* blab_factored_new(const blab_curve* curve, double r, const blab_poly* f_plus,
                                 const blab_poly* f_minus, int k, int l, const blab_poly* g);
void blab_factored_free(blab_factored* integral);
/* The reduced integral (a fresh handle). */
blab_poly* blab_factored_reduced(const blab_factored* integral);

/* |ratio - (r - rho)/(r + rho)| with ratio the gradient norm of the reduced
   integral at the inner offset point over the one at the outer. */
int blab_gradient_ratio_residual(const blab_factored* integral, const blab_curve* curve, double r,
                                 double s, double* residual);
/* Transport coefficients at arc length s; integral may be NULL, leaving
   u = 0. */
int blab_ode_packet(const blab_curve* curve, double r, double s, const blab_factored* integral,
                    blab_ode* packet);
/* Sampled constancy of 2 (2rH - G)^2 (rH - G) / H^2 along the inner offset;
   samples with |H| below threshold are skipped and counted. */
int blab_identity22_constancy(const blab_factored* integral, const blab_curve* curve, double r,
                              int n_samples, double* constant, double* spread, int* skipped);

/* Searches the offset polynomial for singular points, estimates the Puiseux
   index of every real branch through them, and renders the verdict text
   ("not algebraically integrable ..." or "no obstruction found"). */
int blab_verdict(const blab_curve* curve, double r, char* verdict, int verdict_capacity,
                 int* verdict_length, blab_branch* evidence, int evidence_capacity,
                 int* evidence_count);

#ifdef __cplusplus
}
#endif
