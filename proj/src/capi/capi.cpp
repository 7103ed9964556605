#include "blab/blab.h"

#include <algorithm>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "core/algebra.hpp"
#include "core/birkhoff.hpp"
#include "core/curves.hpp"
#include "core/dual.hpp"
#include "core/error.hpp"
#include "core/magnetic.hpp"
#include "core/polynomial.hpp"
#include "core/twosided.hpp"
#include "core/vec2.hpp"

struct blab_curve {
    blab::ConvexCurve impl;
};
struct blab_poly {
    blab::BivariatePolynomial impl;
};
struct blab_phase {
    blab::PhasePolynomial impl;
};
struct blab_factored {
    blab::FactoredIntegral impl;
};

namespace {

using blab::BoundaryCollision;
using blab::Errc;
using blab::Orientation;
using blab::Vec2;

thread_local int t_code = BLAB_OK;
thread_local std::string t_message;

void clear_error() {
    t_code = BLAB_OK;
    t_message.clear();
}

int set_error(int code, const char* what) {
    t_code = code;
    t_message = what;
    return code;
}

// Every entry point funnels through one of these two, so no exception
// crosses the C boundary and the thread error state is always current.
template <typename Fn>
int guarded(Fn&& fn) {
    clear_error();
    try {
        fn();
        return BLAB_OK;
    } catch (const blab::Error& e) {
        return set_error(static_cast<int>(e.code()), e.what());
    } catch (const std::exception& e) {
        return set_error(BLAB_NUMERICAL_FAILURE, e.what());
    }
}

template <typename Handle, typename Fn>
Handle* guarded_new(Fn&& fn) {
    clear_error();
    try {
        return new Handle{fn()};
    } catch (const blab::Error& e) {
        set_error(static_cast<int>(e.code()), e.what());
        return nullptr;
    } catch (const std::exception& e) {
        set_error(BLAB_NUMERICAL_FAILURE, e.what());
        return nullptr;
    }
}

void require(bool ok, const char* what) {
    if (!ok) blab::fail(Errc::invalid_argument, what);
}

const blab::ConvexCurve& ref(const blab_curve* c) {
    require(c != nullptr, "null curve handle");
    return c->impl;
}

const blab::BivariatePolynomial& ref(const blab_poly* p) {
    require(p != nullptr, "null polynomial handle");
    return p->impl;
}

const blab::PhasePolynomial& ref(const blab_phase* p) {
    require(p != nullptr, "null phase polynomial handle");
    return p->impl;
}

const blab::FactoredIntegral& ref(const blab_factored* f) {
    require(f != nullptr, "null factored integral handle");
    return f->impl;
}

Vec2 get2(const double* in, const char* what) {
    require(in != nullptr, what);
    return {in[0], in[1]};
}

void put2(double out[2], Vec2 v) {
    out[0] = v.x;
    out[1] = v.y;
}

Orientation orientation_of(int o) {
    require(o == BLAB_CCW || o == BLAB_CW, "orientation must be BLAB_CCW or BLAB_CW");
    return o == BLAB_CCW ? Orientation::ccw : Orientation::cw;
}

Orientation side_orientation(int side) {
    require(side == 1 || side == 2, "side must be 1 or 2");
    return side == 1 ? Orientation::ccw : Orientation::cw;
}

void fill_collision(blab_collision* out, const BoundaryCollision& hit) {
    require(out != nullptr, "null collision output");
    out->s = hit.s;
    put2(out->point, hit.point);
    put2(out->incoming, hit.incoming);
    put2(out->outgoing, hit.outgoing);
    out->eps = hit.eps;
}

void fill_text(const std::string& text, char* buffer, int capacity, int* length) {
    if (length) *length = static_cast<int>(text.size());
    require(buffer != nullptr && capacity > 0, "text buffer must have positive capacity");
    int n = std::min(static_cast<int>(text.size()), capacity - 1);
    std::memcpy(buffer, text.data(), static_cast<size_t>(n));
    buffer[n] = '\0';
}

std::vector<blab::SidedCenter> side1_trials(const blab::ConvexCurve& curve, double r,
                                            int n_trials, unsigned seed) {
    require(n_trials > 0, "n_trials must be positive");
    blab::CenterAnnulus annulus(curve, r);
    std::mt19937 rng(seed);
    std::vector<blab::SidedCenter> trials;
    trials.reserve(static_cast<size_t>(n_trials));
    for (int i = 0; i < n_trials; ++i)
        trials.push_back({blab::sample_annulus_center(annulus, rng, 1e-3 * r), 1});
    return trials;
}

}  // namespace

extern "C" {

int blab_abi_version(void) { return 1; }

int blab_last_error(void) { return t_code; }

const char* blab_last_error_message(void) { return t_message.c_str(); }

blab_curve* blab_curve_parse(const char* spec) {
    return guarded_new<blab_curve>([&] {
        require(spec != nullptr, "null curve spec");
        return blab::ConvexCurve::parse(spec);
    });
}

void blab_curve_free(blab_curve* curve) { delete curve; }

int blab_curve_length(const blab_curve* curve, double* length) {
    return guarded([&] {
        require(length != nullptr, "null length output");
        *length = ref(curve).length();
    });
}

int blab_curve_point(const blab_curve* curve, double s, double point[2]) {
    return guarded([&] {
        require(point != nullptr, "null point output");
        put2(point, ref(curve).point(s));
    });
}

int blab_curve_frame(const blab_curve* curve, double s, blab_frame* frame) {
    return guarded([&] {
        require(frame != nullptr, "null frame output");
        blab::FramePacket f = ref(curve).frame(s);
        put2(frame->point, f.point);
        put2(frame->tangent, f.tangent);
        put2(frame->inward_normal, f.inward_normal);
        frame->curvature = f.curvature;
        frame->radius = f.radius;
        frame->radius_rate = f.radius_rate;
    });
}

int blab_curve_offset_point(const blab_curve* curve, double s, double d, double point[2]) {
    return guarded([&] {
        require(point != nullptr, "null point output");
        put2(point, ref(curve).offset_point(s, d));
    });
}

int blab_curve_curvature_range(const blab_curve* curve, double* k_min, double* k_max) {
    return guarded([&] {
        require(k_min != nullptr && k_max != nullptr, "null curvature output");
        *k_min = ref(curve).curvature_min();
        *k_max = ref(curve).curvature_max();
    });
}

int blab_curve_weak_field(const blab_curve* curve, double beta, int* admissible, double* margin) {
    return guarded([&] {
        require(admissible != nullptr && margin != nullptr, "null weak-field output");
        blab::WeakFieldReport rep = ref(curve).validate_weak_field(beta);
        *admissible = rep.admissible ? 1 : 0;
        *margin = rep.margin;
    });
}

int blab_curve_cusps(const blab_curve* curve, double r, blab_cusp* cusps, int capacity,
                     int* count, double* degenerate, int degenerate_capacity,
                     int* degenerate_count) {
    return guarded([&] {
        require(count != nullptr, "null count output");
        blab::CuspScan scan = ref(curve).find_cusps(r);
        *count = static_cast<int>(scan.cusps.size());
        int n = std::min(*count, std::max(capacity, 0));
        require(n == 0 || cusps != nullptr, "null cusp buffer");
        for (int i = 0; i < n; ++i) {
            cusps[i].s = scan.cusps[static_cast<size_t>(i)].s;
            put2(cusps[i].point, scan.cusps[static_cast<size_t>(i)].point);
        }
        if (degenerate_count) *degenerate_count = static_cast<int>(scan.degenerate.size());
        int m = std::min(static_cast<int>(scan.degenerate.size()), std::max(degenerate_capacity, 0));
        require(m == 0 || degenerate != nullptr, "null degenerate buffer");
        for (int i = 0; i < m; ++i) degenerate[i] = scan.degenerate[static_cast<size_t>(i)];
    });
}

int blab_curve_spec(const blab_curve* curve, char* buffer, int capacity, int* length) {
    return guarded([&] { fill_text(ref(curve).spec_string(), buffer, capacity, length); });
}

blab_poly* blab_poly_parse(const char* text) {
    return guarded_new<blab_poly>([&] {
        require(text != nullptr, "null polynomial text");
        return blab::BivariatePolynomial::parse(text);
    });
}

void blab_poly_free(blab_poly* poly) { delete poly; }

int blab_poly_eval(const blab_poly* poly, double x, double y, double* value) {
    return guarded([&] {
        require(value != nullptr, "null value output");
        *value = ref(poly).eval(x, y);
    });
}

int blab_poly_gradient(const blab_poly* poly, double x, double y, double gradient[2]) {
    return guarded([&] {
        require(gradient != nullptr, "null gradient output");
        put2(gradient, ref(poly).gradient({x, y}));
    });
}

int blab_poly_degree(const blab_poly* poly, int* degree) {
    return guarded([&] {
        require(degree != nullptr, "null degree output");
        *degree = ref(poly).degree();
    });
}

int blab_poly_text(const blab_poly* poly, char* buffer, int capacity, int* length) {
    return guarded([&] { fill_text(ref(poly).to_string(), buffer, capacity, length); });
}

blab_phase* blab_phase_parse(const char* text) {
    return guarded_new<blab_phase>([&] {
        require(text != nullptr, "null polynomial text");
        return blab::PhasePolynomial::parse(text);
    });
}

void blab_phase_free(blab_phase* phase) { delete phase; }

int blab_phase_eval(const blab_phase* phase, double x, double y, double v1, double v2,
                    double* value) {
    return guarded([&] {
        require(value != nullptr, "null value output");
        *value = ref(phase).eval({x, y}, {v1, v2});
    });
}

int blab_direction_from_angle(const blab_curve* curve, double s, double eps,
                              double direction[2]) {
    return guarded([&] {
        require(direction != nullptr, "null direction output");
        put2(direction, blab::direction_from_angle(ref(curve), s, eps));
    });
}

int blab_reflect_step(const blab_curve* curve, double s, const double direction[2],
                      blab_collision* collision) {
    return guarded([&] {
        fill_collision(collision, blab::reflect_step(ref(curve), s,
                                                     get2(direction, "null direction")));
    });
}

int blab_birkhoff_orbit(const blab_curve* curve, double s, const double direction[2], int n_steps,
                        blab_collision* collisions) {
    return guarded([&] {
        require(n_steps > 0, "n_steps must be positive");
        require(collisions != nullptr, "null collision buffer");
        blab::OrbitTrace trace =
            blab::orbit(ref(curve), s, get2(direction, "null direction"), n_steps);
        for (int i = 0; i < n_steps; ++i)
            fill_collision(&collisions[i], trace.collisions[static_cast<size_t>(i)]);
    });
}

int blab_angular_step(const blab_curve* curve, const double pole[2], const double point[2],
                      double next[2]) {
    return guarded([&] {
        require(next != nullptr, "null point output");
        blab::DualityFrame frame{get2(pole, "null pole")};
        put2(next, blab::angular_step(ref(curve), frame, get2(point, "null point")));
    });
}

int blab_angular_orbit(const blab_curve* curve, const double pole[2], const double start[2],
                       int n_steps, double* points_xy) {
    return guarded([&] {
        require(n_steps > 0, "n_steps must be positive");
        require(points_xy != nullptr, "null point buffer");
        blab::DualityFrame frame{get2(pole, "null pole")};
        Vec2 a = get2(start, "null start point");
        for (int i = 0; i < n_steps; ++i) {
            a = blab::angular_step(ref(curve), frame, a);
            points_xy[2 * i] = a.x;
            points_xy[2 * i + 1] = a.y;
        }
    });
}

int blab_identity1_residual(const blab_poly* f, double m, double x, double y, double eps,
                            double* residual) {
    return guarded([&] {
        require(residual != nullptr, "null residual output");
        *residual = blab::identity1_residual(ref(f), m, {x, y}, eps);
    });
}

int blab_identity2_constancy(const blab_poly* f, const blab_poly* g, double m,
                             const double* samples_xy, int n_samples, double* mean,
                             double* spread) {
    return guarded([&] {
        require(mean != nullptr && spread != nullptr, "null constancy output");
        require(samples_xy != nullptr && n_samples > 0, "need at least one sample");
        std::vector<Vec2> samples;
        samples.reserve(static_cast<size_t>(n_samples));
        for (int i = 0; i < n_samples; ++i)
            samples.push_back({samples_xy[2 * i], samples_xy[2 * i + 1]});
        blab::ConstancyStats st = blab::identity2_residual(ref(f), ref(g), m, samples);
        *mean = st.mean;
        *spread = st.spread;
    });
}

int blab_larmor_exit(const blab_curve* curve, double r, const double center[2], int orientation,
                     blab_collision* collision) {
    return guarded([&] {
        fill_collision(collision, blab::larmor_exit(ref(curve), r, get2(center, "null center"),
                                                    orientation_of(orientation)));
    });
}

int blab_magnetic_orbit(const blab_curve* curve, double r, const double center[2],
                        int orientation, int n_steps, blab_collision* collisions,
                        double* centers_xy) {
    return guarded([&] {
        require(n_steps > 0, "n_steps must be positive");
        require(collisions != nullptr && centers_xy != nullptr, "null orbit buffer");
        Orientation o = orientation_of(orientation);
        Vec2 c = get2(center, "null center");
        for (int i = 0; i < n_steps; ++i) {
            fill_collision(&collisions[i], blab::larmor_exit(ref(curve), r, c, o));
            c = blab::magnetic_step(ref(curve), r, c, o).center;
            centers_xy[2 * i] = c.x;
            centers_xy[2 * i + 1] = c.y;
        }
    });
}

blab_poly* blab_offset_polynomial(const blab_curve* curve, double r) {
    return guarded_new<blab_poly>([&] { return blab::offset_polynomial(ref(curve), r); });
}

int blab_offset_vanishing_residual(const blab_poly* poly, const blab_curve* curve, double r,
                                   int n_samples, double* residual) {
    return guarded([&] {
        require(residual != nullptr, "null residual output");
        *residual = blab::offset_vanishing_residual(ref(poly), ref(curve), r, n_samples);
    });
}

int blab_annulus_samples(const blab_curve* curve, double r, int n, unsigned seed, double margin,
                         double* centers_xy) {
    return guarded([&] {
        require(n > 0, "n must be positive");
        require(centers_xy != nullptr, "null center buffer");
        blab::CenterAnnulus annulus(ref(curve), r);
        std::mt19937 rng(seed);
        for (int i = 0; i < n; ++i) {
            Vec2 c = blab::sample_annulus_center(annulus, rng, margin);
            centers_xy[2 * i] = c.x;
            centers_xy[2 * i + 1] = c.y;
        }
    });
}

int blab_find_singular_points(const blab_poly* f, const double box_lo[2], const double box_hi[2],
                              double* points_xy, int capacity, int* count) {
    return guarded([&] {
        require(count != nullptr, "null count output");
        blab::Box region{get2(box_lo, "null box corner"), get2(box_hi, "null box corner")};
        std::vector<Vec2> pts = blab::find_singular_points(ref(f), region);
        *count = static_cast<int>(pts.size());
        int n = std::min(*count, std::max(capacity, 0));
        require(n == 0 || points_xy != nullptr, "null point buffer");
        for (int i = 0; i < n; ++i) {
            points_xy[2 * i] = pts[static_cast<size_t>(i)].x;
            points_xy[2 * i + 1] = pts[static_cast<size_t>(i)].y;
        }
    });
}

int blab_estimate_branch(const blab_poly* f, const double point[2], const blab_poly* aux,
                         blab_branch* branches, int capacity, int* count, int* failed_traces) {
    return guarded([&] {
        require(count != nullptr, "null count output");
        blab::BranchAnalysis analysis = blab::estimate_branch(
            ref(f), get2(point, "null point"), aux ? &aux->impl : nullptr);
        *count = static_cast<int>(analysis.branches.size());
        if (failed_traces) *failed_traces = analysis.failed_traces;
        int n = std::min(*count, std::max(capacity, 0));
        require(n == 0 || branches != nullptr, "null branch buffer");
        for (int i = 0; i < n; ++i) {
            const blab::BranchEstimate& b = analysis.branches[static_cast<size_t>(i)];
            put2(branches[i].point, b.base_point);
            branches[i].index = b.puiseux_index;
            branches[i].index_ci = b.index_ci;
            branches[i].order_a = b.order_a;
            branches[i].order_b = b.order_b;
            branches[i].samples_used = b.samples_used;
        }
    });
}

int blab_twosided_step(const blab_curve* curve, double r, const double center[2], int side,
                       double next[2], int* next_side) {
    return guarded([&] {
        require(next != nullptr && next_side != nullptr, "null step output");
        blab::SidedCenter out =
            blab::twosided_step(ref(curve), r, {get2(center, "null center"), side});
        put2(next, out.point);
        *next_side = out.side;
    });
}

int blab_twosided_orbit(const blab_curve* curve, double r, const double center[2], int side,
                        int n_steps, double* rows, int* sides) {
    return guarded([&] {
        require(n_steps > 0, "n_steps must be positive");
        require(rows != nullptr && sides != nullptr, "null orbit buffer");
        blab::SidedCenter c{get2(center, "null center"), side};
        for (int i = 0; i < n_steps; ++i) {
            BoundaryCollision hit =
                blab::larmor_exit(ref(curve), r, c.point, side_orientation(c.side));
            rows[4 * i] = c.point.x;
            rows[4 * i + 1] = c.point.y;
            rows[4 * i + 2] = hit.s;
            rows[4 * i + 3] = hit.eps;
            sides[i] = c.side;
            c = blab::twosided_step(ref(curve), r, c);
        }
    });
}

int blab_twosided_orbit_deviation(const blab_curve* curve, double r, const blab_poly* F,
                                  const double center[2], int side, int n_steps,
                                  double* deviation) {
    return guarded([&] {
        require(deviation != nullptr, "null deviation output");
        *deviation = blab::orbit_invariance_deviation(
            ref(curve), r, ref(F), {get2(center, "null center"), side}, n_steps);
    });
}

int blab_symplecticity_residual(const blab_curve* curve, double r, const double center[2],
                                int side, double h, double* residual) {
    return guarded([&] {
        require(residual != nullptr, "null residual output");
        *residual = blab::symplecticity_residual(ref(curve), r,
                                                 {get2(center, "null center"), side}, h);
    });
}

int blab_pair_check(const blab_curve* curve, double r, const blab_poly* f1, const blab_poly* f2,
                    int n_trials, unsigned seed, blab_pair_report* report) {
    return guarded([&] {
        require(report != nullptr, "null report output");
        blab::PairReport rep =
            blab::check_integral_pair(ref(curve), r, {ref(f1), ref(f2)},
                                      side1_trials(ref(curve), r, n_trials, seed));
        report->condition1 = rep.condition1;
        report->condition2 = rep.condition2;
        report->degenerate = rep.degenerate ? 1 : 0;
    });
}

int blab_phase_pair_check(const blab_curve* curve, double r, const blab_phase* phi1,
                          const blab_phase* phi2, int n_trials, unsigned seed,
                          blab_pair_report* report) {
    return guarded([&] {
        require(report != nullptr, "null report output");
        blab::PairReport rep =
            blab::check_phase_pair(ref(curve), r, ref(phi1), ref(phi2),
                                   side1_trials(ref(curve), r, n_trials, seed));
        report->condition1 = rep.condition1;
        report->condition2 = rep.condition2;
        report->degenerate = rep.degenerate ? 1 : 0;
    });
}

blab_poly* blab_combine_pair(const blab_curve* curve, double r, const blab_poly* f1,
                             const blab_poly* f2) {
    return guarded_new<blab_poly>(
        [&] { return blab::combine_pair(ref(curve), r, {ref(f1), ref(f2)}); });
}

int blab_boundary_constancy(const blab_poly* F, const blab_curve* curve, double r,
                            blab_constancy* report) {
    return guarded([&] {
        require(report != nullptr, "null report output");
        blab::BoundaryConstancy bc = blab::boundary_constancy_residual(ref(F), ref(curve), r);
        report->c = bc.c;
        report->spread_plus = bc.spread_plus;
        report->spread_minus = bc.spread_minus;
        report->gap = bc.gap;
    });
}

blab_poly* blab_normalized_on_boundaries(const blab_poly* F, const blab_curve* curve, double r) {
    return guarded_new<blab_poly>(
        [&] { return blab::normalized_on_boundaries(ref(F), ref(curve), r); });
}

int blab_remarkable_residual(const blab_poly* F, const blab_curve* curve, double r, double s,
                             double eps, double* residual) {
    return guarded([&] {
        require(residual != nullptr, "null residual output");
        *residual = blab::remarkable_residual(ref(F), ref(curve), r, s, eps);
    });
}

blab_factored* blab_factored_new(const blab_curve* curve, double r, const blab_poly* f_plus,
                                 const blab_poly* f_minus, int k, int l, const blab_poly* g) {
    return guarded_new<blab_factored>([&] {
        return blab::FactoredIntegral(ref(curve), r, ref(f_plus), ref(f_minus), k, l,
                                      g ? g->impl : blab::BivariatePolynomial::constant(1.0));
    });
}

void blab_factored_free(blab_factored* integral) { delete integral; }

blab_poly* blab_factored_reduced(const blab_factored* integral) {
    return guarded_new<blab_poly>([&] { return ref(integral).reduced(); });
}

int blab_gradient_ratio_residual(const blab_factored* integral, const blab_curve* curve, double r,
                                 double s, double* residual) {
    return guarded([&] {
        require(residual != nullptr, "null residual output");
        *residual = blab::gradient_ratio_residual(ref(integral), ref(curve), r, s);
    });
}

int blab_ode_packet(const blab_curve* curve, double r, double s, const blab_factored* integral,
                    blab_ode* packet) {
    return guarded([&] {
        require(packet != nullptr, "null packet output");
        blab::OdePacket p =
            blab::ode_and_factor(ref(curve), r, s, integral ? &integral->impl : nullptr);
        packet->A = p.A;
        packet->B = p.B;
        packet->mu = p.mu;
        packet->u = p.u;
    });
}

int blab_identity22_constancy(const blab_factored* integral, const blab_curve* curve, double r,
                              int n_samples, double* constant, double* spread, int* skipped) {
    return guarded([&] {
        require(constant != nullptr && spread != nullptr, "null constancy output");
        blab::ConstancyEstimate est =
            blab::identity22_constancy(ref(integral), ref(curve), r, n_samples);
        *constant = est.C;
        *spread = est.spread;
        if (skipped) *skipped = est.skipped;
    });
}

int blab_verdict(const blab_curve* curve, double r, char* verdict, int verdict_capacity,
                 int* verdict_length, blab_branch* evidence, int evidence_capacity,
                 int* evidence_count) {
    return guarded([&] {
        require(evidence_count != nullptr, "null evidence count output");
        blab::IntegrabilityVerdict v = blab::subquadratic_verdict(ref(curve), r);
        fill_text(v.verdict, verdict, verdict_capacity, verdict_length);
        *evidence_count = static_cast<int>(v.evidence.size());
        int n = std::min(*evidence_count, std::max(evidence_capacity, 0));
        require(n == 0 || evidence != nullptr, "null evidence buffer");
        double nan = std::numeric_limits<double>::quiet_NaN();
        for (int i = 0; i < n; ++i) {
            const blab::SingularBranch& b = v.evidence[static_cast<size_t>(i)];
            put2(evidence[i].point, b.point);
            evidence[i].index = b.index;
            evidence[i].index_ci = b.index_ci;
            evidence[i].order_a = nan;
            evidence[i].order_b = nan;
            evidence[i].samples_used = 0;
        }
    });
}

}  // extern "C"
