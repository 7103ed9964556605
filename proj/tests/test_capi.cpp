#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "blab/blab.h"

// The suite drives the shared library exactly as a foreign-language binding
// would: every value crosses the C surface, nothing links the C++ core.

namespace {

const double kPi = 3.14159265358979323846;

struct CurveHandle {
    blab_curve* h;
    explicit CurveHandle(const char* spec) : h(blab_curve_parse(spec)) {}
    ~CurveHandle() { blab_curve_free(h); }
    operator const blab_curve*() const { return h; }
};

struct PolyHandle {
    blab_poly* h;
    explicit PolyHandle(const char* text) : h(blab_poly_parse(text)) {}
    explicit PolyHandle(blab_poly* adopt) : h(adopt) {}
    ~PolyHandle() { blab_poly_free(h); }
    operator const blab_poly*() const { return h; }
};

}  // namespace

TEST_CASE("version and error state") {
    CHECK(blab_abi_version() == 1);

    blab_curve* bad = blab_curve_parse("hexagon:3");
    CHECK(bad == nullptr);
    CHECK(blab_last_error() == BLAB_INVALID_ARGUMENT);
    CHECK(std::strlen(blab_last_error_message()) > 0);

    // a successful call clears the sticky state
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    double length = 0.0;
    CHECK(blab_curve_length(circle, &length) == BLAB_OK);
    CHECK(blab_last_error() == BLAB_OK);
    CHECK(std::strlen(blab_last_error_message()) == 0);

    CHECK(blab_curve_length(nullptr, &length) == BLAB_INVALID_ARGUMENT);
    CHECK(blab_curve_length(circle, nullptr) == BLAB_INVALID_ARGUMENT);
}

TEST_CASE("curve accessors") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);

    double length = 0.0;
    REQUIRE(blab_curve_length(circle, &length) == BLAB_OK);
    CHECK(length == doctest::Approx(2.0 * kPi).epsilon(1e-12));

    double p[2];
    REQUIRE(blab_curve_point(circle, 0.0, p) == BLAB_OK);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p[1]) < 1e-12);

    blab_frame f;
    REQUIRE(blab_curve_frame(circle, 0.0, &f) == BLAB_OK);
    CHECK(f.tangent[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.inward_normal[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(f.curvature == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.radius_rate == 0.0);

    double q[2];
    REQUIRE(blab_curve_offset_point(circle, 0.0, 0.25, q) == BLAB_OK);
    CHECK(q[0] == doctest::Approx(0.75).epsilon(1e-12));

    double k_min = 0.0, k_max = 0.0;
    REQUIRE(blab_curve_curvature_range(circle, &k_min, &k_max) == BLAB_OK);
    CHECK(k_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(k_max == doctest::Approx(1.0).epsilon(1e-9));

    int admissible = 0;
    double margin = 0.0;
    REQUIRE(blab_curve_weak_field(circle, 0.5, &admissible, &margin) == BLAB_OK);
    CHECK(admissible == 1);
    CHECK(margin == doctest::Approx(0.5).epsilon(1e-9));

    char spec[32];
    int spec_len = 0;
    REQUIRE(blab_curve_spec(circle, spec, sizeof(spec), &spec_len) == BLAB_OK);
    CHECK(std::string(spec) == "circle:1");
    CHECK(spec_len == 8);

    // truncation still reports the full length
    char tiny[4];
    REQUIRE(blab_curve_spec(circle, tiny, sizeof(tiny), &spec_len) == BLAB_OK);
    CHECK(std::string(tiny) == "cir");
    CHECK(spec_len == 8);
}

TEST_CASE("offset cusps of the ellipse") {
    CurveHandle ellipse("ellipse:2,1");
    REQUIRE(ellipse.h != nullptr);

    blab_cusp cusps[8];
    int count = 0, deg_count = 0;
    REQUIRE(blab_curve_cusps(ellipse, 1.0, cusps, 8, &count, nullptr, 0, &deg_count) == BLAB_OK);
    CHECK(count == 4);
    CHECK(deg_count == 0);
    const double x0 = 1.0817753426275478, y0 = 0.25992104989487319;
    for (int i = 0; i < count; ++i) {
        CHECK(std::abs(std::abs(cusps[i].point[0]) - x0) < 1e-9);
        CHECK(std::abs(std::abs(cusps[i].point[1]) - y0) < 1e-9);
    }

    // capacity 1 truncates the buffer, not the count
    blab_cusp one;
    REQUIRE(blab_curve_cusps(ellipse, 1.0, &one, 1, &count, nullptr, 0, nullptr) == BLAB_OK);
    CHECK(count == 4);
}

TEST_CASE("polynomial handles") {
    PolyHandle p("(x^2 + y^2 - 5)^2 - 16");
    REQUIRE(p.h != nullptr);

    double v = 0.0;
    REQUIRE(blab_poly_eval(p, 2.0, 0.0, &v) == BLAB_OK);
    CHECK(v == doctest::Approx(-15.0).epsilon(1e-15));

    double g[2];
    REQUIRE(blab_poly_gradient(p, 2.0, 0.0, g) == BLAB_OK);
    CHECK(g[0] == doctest::Approx(2.0 * (4.0 - 5.0) * 4.0).epsilon(1e-15));
    CHECK(g[1] == 0.0);

    int degree = 0;
    REQUIRE(blab_poly_degree(p, &degree) == BLAB_OK);
    CHECK(degree == 4);

    char text[256];
    int text_len = 0;
    REQUIRE(blab_poly_text(p, text, sizeof(text), &text_len) == BLAB_OK);
    PolyHandle round(text);
    REQUIRE(round.h != nullptr);
    double v2 = 0.0;
    REQUIRE(blab_poly_eval(round, 1.3, -0.4, &v2) == BLAB_OK);
    REQUIRE(blab_poly_eval(p, 1.3, -0.4, &v) == BLAB_OK);
    CHECK(v2 == v);

    CHECK(blab_poly_parse("x + z") == nullptr);
    CHECK(blab_last_error() == BLAB_INVALID_ARGUMENT);
    CHECK(std::string(blab_last_error_message()).find("z") != std::string::npos);

    blab_phase* phase = blab_phase_parse("x*v2 - y*v1");
    REQUIRE(phase != nullptr);
    REQUIRE(blab_phase_eval(phase, 0.0, 1.0, 0.5, 0.0, &v) == BLAB_OK);
    CHECK(v == doctest::Approx(-0.5).epsilon(1e-15));
    blab_phase_free(phase);
}

TEST_CASE("chord billiard through the C surface") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);

    double dir[2];
    REQUIRE(blab_direction_from_angle(circle, 0.0, kPi / 2.0, dir) == BLAB_OK);
    CHECK(dir[0] == doctest::Approx(-1.0).epsilon(1e-12));

    blab_collision hit;
    REQUIRE(blab_reflect_step(circle, 0.0, dir, &hit) == BLAB_OK);
    CHECK(hit.s == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(hit.point[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(hit.eps == doctest::Approx(kPi / 2.0).epsilon(1e-9));

    // a chord orbit stays on the boundary and conserves angular momentum
    REQUIRE(blab_direction_from_angle(circle, 0.0, 0.7, dir) == BLAB_OK);
    std::vector<blab_collision> orbit(200);
    REQUIRE(blab_birkhoff_orbit(circle, 0.0, dir, 200, orbit.data()) == BLAB_OK);
    blab_phase* momentum = blab_phase_parse("y*v1 - x*v2");
    REQUIRE(momentum != nullptr);
    double f0 = 0.0;
    REQUIRE(blab_phase_eval(momentum, 1.0, 0.0, dir[0], dir[1], &f0) == BLAB_OK);
    for (const blab_collision& c : orbit) {
        CHECK(std::abs(std::hypot(c.point[0], c.point[1]) - 1.0) < 1e-9);
        double fi = 0.0;
        REQUIRE(blab_phase_eval(momentum, c.point[0], c.point[1], c.outgoing[0], c.outgoing[1],
                                &fi) == BLAB_OK);
        CHECK(std::abs(fi - f0) < 1e-9);
    }
    blab_phase_free(momentum);
}

TEST_CASE("angular billiard through the C surface") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    double pole[2] = {0.0, 0.0};
    double a[2] = {3.0, 0.5};

    double b[2];
    REQUIRE(blab_angular_step(circle, pole, a, b) == BLAB_OK);
    CHECK(std::hypot(b[0], b[1]) > 1.0);

    std::vector<double> pts(2 * 50);
    REQUIRE(blab_angular_orbit(circle, pole, a, 50, pts.data()) == BLAB_OK);
    CHECK(pts[0] == b[0]);
    CHECK(pts[1] == b[1]);
    // about a centered pole the angular map preserves the distance gauge
    // G = (x^2 + y^2) / (x^2 + y^2 - 1) of the unit circle's exterior
    double g0 = (a[0] * a[0] + a[1] * a[1]) / (a[0] * a[0] + a[1] * a[1] - 1.0);
    for (int i = 0; i < 50; ++i) {
        double rr = pts[2 * i] * pts[2 * i] + pts[2 * i + 1] * pts[2 * i + 1];
        CHECK(std::abs(rr / (rr - 1.0) - g0) < 1e-8);
    }

    double inside[2] = {0.2, 0.0};
    CHECK(blab_angular_step(circle, pole, inside, b) == BLAB_INSIDE_CURVE);
}

TEST_CASE("duality identities through the C surface") {
    PolyHandle conic("4*x^2 + 1*y^2 - 1");
    REQUIRE(conic.h != nullptr);
    double residual = 0.0;
    REQUIRE(blab_identity1_residual(conic, 1.0, 0.5, 0.0, 1e-2, &residual) == BLAB_OK);
    CHECK(residual < 1e-9);

    PolyHandle quartic("x^4 + y^4 - 1");
    REQUIRE(quartic.h != nullptr);
    REQUIRE(blab_identity1_residual(quartic, 2.0, 0.94756908909083559, 0.66349501915591103,
                                    1e-2, &residual) == BLAB_OK);
    CHECK(residual > 1e-4);
    CHECK(blab_identity1_residual(conic, 1.0, 2.0, 0.0, 1e-2, &residual) ==
          BLAB_INVALID_ARGUMENT);

    PolyHandle one("1");
    REQUIRE(one.h != nullptr);
    std::vector<double> samples(2 * 64);
    for (int i = 0; i < 64; ++i) {
        double t = 2.0 * kPi * i / 64.0;
        samples[2 * i] = std::cos(t) / 2.0;
        samples[2 * i + 1] = std::sin(t);
    }
    double mean = 0.0, spread = 0.0;
    REQUIRE(blab_identity2_constancy(conic, one, 1.0, samples.data(), 64, &mean, &spread) ==
            BLAB_OK);
    CHECK(mean == doctest::Approx(32.0).epsilon(1e-10));
    CHECK(spread < 1e-10);
}

TEST_CASE("magnetic orbit rows are self-consistent") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    double c0[2] = {2.0, 0.0};

    blab_collision hit;
    REQUIRE(blab_larmor_exit(circle, 2.0, c0, BLAB_CCW, &hit) == BLAB_OK);
    CHECK(std::abs(std::hypot(hit.point[0] - 2.0, hit.point[1]) - 2.0) < 1e-9);

    const int n = 100;
    std::vector<blab_collision> cols(n);
    std::vector<double> centers(2 * n);
    REQUIRE(blab_magnetic_orbit(circle, 2.0, c0, BLAB_CCW, n, cols.data(), centers.data()) ==
            BLAB_OK);
    for (int i = 0; i + 1 < n; ++i) {
        double c[2] = {centers[2 * i], centers[2 * i + 1]};
        // each row's collision is the exit of the previous row's center
        blab_collision again;
        REQUIRE(blab_larmor_exit(circle, 2.0, c, BLAB_CCW, &again) == BLAB_OK);
        CHECK(again.s == cols[i + 1].s);
        CHECK(again.point[0] == cols[i + 1].point[0]);
        CHECK(again.point[1] == cols[i + 1].point[1]);
        CHECK(std::abs(std::hypot(cols[i].point[0] - c[0], cols[i].point[1] - c[1]) - 2.0) <
              1e-9);
    }

    double far[2] = {9.0, 0.0};
    CHECK(blab_larmor_exit(circle, 2.0, far, BLAB_CCW, &hit) == BLAB_NO_INTERSECTION);
    CHECK(blab_larmor_exit(circle, 2.0, c0, 7, &hit) == BLAB_INVALID_ARGUMENT);
}

TEST_CASE("two-sided worked collision and orbit consistency") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    double c0[2] = {2.0, 0.0};

    double next[2];
    int next_side = 0;
    REQUIRE(blab_twosided_step(circle, 2.0, c0, 1, next, &next_side) == BLAB_OK);
    CHECK(next[0] == doctest::Approx(2.25).epsilon(1e-9));
    CHECK(next[1] == doctest::Approx(-std::sqrt(15.0) / 4.0).epsilon(1e-9));
    CHECK(next_side == 2);

    CHECK(blab_twosided_step(circle, 2.0, c0, 3, next, &next_side) == BLAB_INVALID_ARGUMENT);

    // orbit rows replay exactly as single steps
    const int n = 64;
    std::vector<double> rows(4 * n);
    std::vector<int> sides(n);
    REQUIRE(blab_twosided_orbit(circle, 2.0, c0, 1, n, rows.data(), sides.data()) == BLAB_OK);
    CHECK(rows[0] == 2.0);
    CHECK(rows[1] == 0.0);
    double c[2] = {2.0, 0.0};
    int side = 1;
    for (int i = 0; i < n; ++i) {
        CHECK(rows[4 * i] == c[0]);
        CHECK(rows[4 * i + 1] == c[1]);
        CHECK(sides[i] == side);
        blab_collision hit;
        REQUIRE(blab_larmor_exit(circle, 2.0, c, side == 1 ? BLAB_CCW : BLAB_CW, &hit) ==
                BLAB_OK);
        CHECK(rows[4 * i + 2] == hit.s);
        CHECK(rows[4 * i + 3] == hit.eps);
        REQUIRE(blab_twosided_step(circle, 2.0, c, side, c, &side) == BLAB_OK);
    }

    PolyHandle invariant("(x^2 + y^2 - 5)^2 - 16");
    REQUIRE(invariant.h != nullptr);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        REQUIRE(blab_poly_eval(invariant, rows[4 * i], rows[4 * i + 1], &v) == BLAB_OK);
        CHECK(std::abs(v - (-15.0)) < 1e-9);
    }

    double deviation = 1.0;
    REQUIRE(blab_twosided_orbit_deviation(circle, 2.0, invariant, c0, 1, 2000, &deviation) ==
            BLAB_OK);
    CHECK(deviation < 1e-9);

    double residual = 1.0;
    REQUIRE(blab_symplecticity_residual(circle, 2.0, c0, 1, 1e-5, &residual) == BLAB_OK);
    CHECK(residual < 1e-5);
}

TEST_CASE("pair checks and combination") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    PolyHandle f1("x^2 + y^2");
    PolyHandle f2("10 - x^2 - y^2");
    REQUIRE(f1.h != nullptr);
    REQUIRE(f2.h != nullptr);

    blab_pair_report report;
    REQUIRE(blab_pair_check(circle, 2.0, f1, f2, 20, 7u, &report) == BLAB_OK);
    CHECK(report.condition1 == 0.0);
    CHECK(report.condition2 < 1e-10);
    CHECK(report.degenerate == 0);

    blab_phase* phi1 = blab_phase_parse("x^2 + y^2 + 4*(v1*y - v2*x)");
    blab_phase* phi2 = blab_phase_parse("x^2 + y^2 - 4*(v1*y - v2*x)");
    REQUIRE(phi1 != nullptr);
    REQUIRE(phi2 != nullptr);
    REQUIRE(blab_phase_pair_check(circle, 2.0, phi1, phi2, 10, 7u, &report) == BLAB_OK);
    CHECK(report.condition1 < 1e-10);
    // the mirror mismatch of this pair is 4 r |cos eps| per collision; the
    // trial draw is reproducible through the sampler with the same seed and
    // the checker's margin of 1e-3 r
    std::vector<double> trials(2 * 10);
    REQUIRE(blab_annulus_samples(circle, 2.0, 10, 7u, 2e-3, trials.data()) == BLAB_OK);
    double expected = 0.0;
    for (int i = 0; i < 10; ++i) {
        double c[2] = {trials[2 * i], trials[2 * i + 1]};
        for (int o : {BLAB_CCW, BLAB_CW}) {
            blab_collision hit;
            REQUIRE(blab_larmor_exit(circle, 2.0, c, o, &hit) == BLAB_OK);
            expected = std::max(expected, 8.0 * std::abs(std::cos(hit.eps)));
        }
    }
    CHECK(report.condition2 == doctest::Approx(expected).epsilon(1e-9));
    blab_phase_free(phi1);
    blab_phase_free(phi2);

    PolyHandle combined(blab_combine_pair(circle, 2.0, f1, f2));
    REQUIRE(combined.h != nullptr);
    double c0[2] = {2.0, 0.0};
    double deviation = 1.0;
    REQUIRE(blab_twosided_orbit_deviation(circle, 2.0, combined, c0, 1, 500, &deviation) ==
            BLAB_OK);
    CHECK(deviation < 1e-9);

    PolyHandle c5("5");
    REQUIRE(c5.h != nullptr);
    CHECK(blab_combine_pair(circle, 2.0, c5, c5) == nullptr);
    CHECK(blab_last_error() == BLAB_BOTH_DEGENERATE);
}

TEST_CASE("boundary functional checks") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    PolyHandle invariant("(x^2 + y^2 - 5)^2 - 16");
    REQUIRE(invariant.h != nullptr);

    blab_constancy bc;
    REQUIRE(blab_boundary_constancy(invariant, circle, 2.0, &bc) == BLAB_OK);
    CHECK(std::abs(bc.c) < 1e-12);
    CHECK(bc.spread_plus < 1e-12);
    CHECK(bc.spread_minus < 1e-12);
    CHECK(bc.gap < 1e-12);

    PolyHandle shifted("(x^2 + y^2 - 5)^2");
    REQUIRE(shifted.h != nullptr);
    PolyHandle normalized(blab_normalized_on_boundaries(shifted, circle, 2.0));
    REQUIRE(normalized.h != nullptr);
    double v = 1.0;
    REQUIRE(blab_poly_eval(normalized, 1.0, 0.0, &v) == BLAB_OK);
    CHECK(std::abs(v) < 1e-12);

    double residual = 1.0;
    REQUIRE(blab_remarkable_residual(invariant, circle, 2.0, 0.3, 0.7, &residual) == BLAB_OK);
    CHECK(residual < 1e-10);
}

TEST_CASE("factored integral operations") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    PolyHandle fp("x^2 + y^2 - 1");
    PolyHandle fm("x^2 + y^2 - 9");
    REQUIRE(fp.h != nullptr);
    REQUIRE(fm.h != nullptr);

    blab_factored* integral = blab_factored_new(circle, 2.0, fp, fm, 1, 1, nullptr);
    REQUIRE(integral != nullptr);

    PolyHandle reduced(blab_factored_reduced(integral));
    REQUIRE(reduced.h != nullptr);
    double v = 0.0;
    REQUIRE(blab_poly_eval(reduced, 2.0, 0.0, &v) == BLAB_OK);
    CHECK(v == doctest::Approx(3.0 * -5.0).epsilon(1e-15));

    double residual = 1.0;
    REQUIRE(blab_gradient_ratio_residual(integral, circle, 2.0, 0.4, &residual) == BLAB_OK);
    CHECK(residual < 1e-12);

    blab_ode packet;
    REQUIRE(blab_ode_packet(circle, 2.0, 1.1, integral, &packet) == BLAB_OK);
    CHECK(packet.A == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(packet.B) < 1e-14);
    CHECK(packet.mu == doctest::Approx(18.0).epsilon(1e-14));
    CHECK(packet.u == doctest::Approx(4096.0).epsilon(1e-9));
    REQUIRE(blab_ode_packet(circle, 2.0, 1.1, nullptr, &packet) == BLAB_OK);
    CHECK(packet.u == 0.0);

    double constant = 0.0, spread = 1.0;
    int skipped = -1;
    REQUIRE(blab_identity22_constancy(integral, circle, 2.0, 64, &constant, &spread, &skipped) ==
            BLAB_OK);
    CHECK(constant == doctest::Approx(-614400.0).epsilon(1e-9));
    CHECK(spread < 1e-10);
    CHECK(skipped == 0);

    blab_factored_free(integral);
}

TEST_CASE("offset polynomial and singularity search") {
    CurveHandle ellipse("ellipse:2,1");
    REQUIRE(ellipse.h != nullptr);

    PolyHandle offset(blab_offset_polynomial(ellipse, 1.0));
    REQUIRE(offset.h != nullptr);
    double residual = 1.0;
    REQUIRE(blab_offset_vanishing_residual(offset, ellipse, 1.0, 256, &residual) == BLAB_OK);
    CHECK(residual < 1e-6);

    double lo[2] = {0.5, 0.1}, hi[2] = {1.5, 0.5};
    double pts[8];
    int count = 0;
    REQUIRE(blab_find_singular_points(offset, lo, hi, pts, 4, &count) == BLAB_OK);
    REQUIRE(count == 1);
    CHECK(pts[0] == doctest::Approx(1.0817753426275478).epsilon(1e-8));
    CHECK(pts[1] == doctest::Approx(0.25992104989487319).epsilon(1e-8));

    blab_branch branches[4];
    int n_branches = 0, failed = -1;
    REQUIRE(blab_estimate_branch(offset, pts, offset, branches, 4, &n_branches, &failed) ==
            BLAB_OK);
    REQUIRE(n_branches >= 1);
    CHECK(failed == 0);
    for (int i = 0; i < n_branches; ++i) {
        CHECK(std::abs(branches[i].index - 1.5) < 0.05);
        CHECK(std::isfinite(branches[i].order_a));
        CHECK(std::isfinite(branches[i].order_b));
        CHECK(branches[i].samples_used > 0);
    }
    REQUIRE(blab_estimate_branch(offset, pts, nullptr, branches, 4, &n_branches, nullptr) ==
            BLAB_OK);
    REQUIRE(n_branches >= 1);
    CHECK(std::isnan(branches[0].order_a));

    blab_curve* trig = blab_curve_parse("trig:1;0.05,0");
    REQUIRE(trig != nullptr);
    CHECK(blab_offset_polynomial(trig, 2.0) == nullptr);
    CHECK(blab_last_error() == BLAB_NO_OFFSET_MODEL);
    blab_curve_free(trig);
}

TEST_CASE("annulus sampling feeds valid centers") {
    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    const int n = 40;
    std::vector<double> centers(2 * n);
    REQUIRE(blab_annulus_samples(circle, 2.0, n, 99u, 0.05, centers.data()) == BLAB_OK);
    for (int i = 0; i < n; ++i) {
        double c[2] = {centers[2 * i], centers[2 * i + 1]};
        blab_collision hit;
        CHECK(blab_larmor_exit(circle, 2.0, c, BLAB_CCW, &hit) == BLAB_OK);
    }
}

TEST_CASE("verdicts through the C surface") {
    CurveHandle ellipse("ellipse:2,1");
    REQUIRE(ellipse.h != nullptr);
    char verdict[128];
    int verdict_len = 0, count = 0;
    blab_branch evidence[16];
    REQUIRE(blab_verdict(ellipse, 1.0, verdict, sizeof(verdict), &verdict_len, evidence, 16,
                         &count) == BLAB_OK);
    CHECK(std::string(verdict).find("not algebraically integrable") == 0);
    REQUIRE(count >= 4);
    int subquadratic = 0;
    for (int i = 0; i < count && i < 16; ++i) {
        if (evidence[i].index < 1.9) ++subquadratic;
        CHECK(std::isnan(evidence[i].order_a));
    }
    CHECK(subquadratic >= 4);

    CurveHandle circle("circle:1");
    REQUIRE(circle.h != nullptr);
    REQUIRE(blab_verdict(circle, 2.0, verdict, sizeof(verdict), &verdict_len, evidence, 16,
                         &count) == BLAB_OK);
    CHECK(std::string(verdict) == "no obstruction found");
    CHECK(count == 0);
}
