#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blab/blab.h"
#include "params.hpp"
#include "svg.hpp"
#include "trace_io.hpp"

namespace {

const double kPi = 3.14159265358979323846;

int exit_code_for(int rc) { return rc == BLAB_INVALID_ARGUMENT ? 1 : 2; }

void check_rc(int rc) {
    if (rc != BLAB_OK) throw CliError(exit_code_for(rc), blab_last_error_message());
}

template <typename T>
T* checked(T* handle) {
    if (!handle) throw CliError(exit_code_for(blab_last_error()), blab_last_error_message());
    return handle;
}

using CurvePtr = std::unique_ptr<blab_curve, void (*)(blab_curve*)>;
using PolyPtr = std::unique_ptr<blab_poly, void (*)(blab_poly*)>;
using PhasePtr = std::unique_ptr<blab_phase, void (*)(blab_phase*)>;
using FactoredPtr = std::unique_ptr<blab_factored, void (*)(blab_factored*)>;

CurvePtr make_curve(const Params& p) {
    return {checked(blab_curve_parse(p.text("curve").c_str())), blab_curve_free};
}

PolyPtr make_poly(const std::string& text) {
    return {checked(blab_poly_parse(text.c_str())), blab_poly_free};
}

PhasePtr make_phase(const std::string& text) {
    return {checked(blab_phase_parse(text.c_str())), blab_phase_free};
}

double curve_length(const blab_curve* curve) {
    double length = 0.0;
    check_rc(blab_curve_length(curve, &length));
    return length;
}

// The identity checkers accept two named curve families besides raw
// polynomial text: `conic a=<a> b=<b>` for a^2 x^2 + b^2 y^2 - 1 and
// `quartic` for x^4 + y^4 - 1. The families carry their half-degree m and
// a parametric sampler.
struct CurveFamily {
    std::string poly_text;
    double default_m = 0.0;  // 0 = the caller must pass m
    bool conic = false, quartic = false;
    double a = 0.0, b = 0.0;
};

CurveFamily resolve_family(const std::string& f) {
    if (f.rfind("conic", 0) == 0) {
        double a = 0.0, b = 0.0;
        if (std::sscanf(f.c_str(), "conic a=%lf b=%lf", &a, &b) != 2 || a <= 0.0 || b <= 0.0)
            fail_usage("conic family spelling is 'conic a=<a> b=<b>' with positive axes");
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.17g*x^2 + %.17g*y^2 - 1", a * a, b * b);
        return {buf, 1.0, true, false, a, b};
    }
    if (f == "quartic") return {"x^4 + y^4 - 1", 2.0, false, true, 0.0, 0.0};
    return {f, 0.0, false, false, 0.0, 0.0};
}

double family_m(const Params& p, const CurveFamily& family) {
    if (p.has("m")) return p.number("m");
    if (family.default_m > 0.0) return family.default_m;
    fail_usage("'m' is required for a custom polynomial");
}

std::vector<double> family_samples(const CurveFamily& family, int n) {
    if (n <= 0) fail_usage("'samples' must be positive");
    std::vector<double> xy(2 * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        double c = std::cos(t), s = std::sin(t);
        if (family.conic) {
            xy[2 * i] = c / family.a;
            xy[2 * i + 1] = s / family.b;
        } else if (family.quartic) {
            double scale = std::pow(c * c * c * c + s * s * s * s, -0.25);
            xy[2 * i] = scale * c;
            xy[2 * i + 1] = scale * s;
        } else {
            fail_usage("sampling needs the conic or quartic family");
        }
    }
    return xy;
}

FactoredPtr make_factored(const Params& p, const blab_curve* curve, double r) {
    PolyPtr fp = make_poly(p.text("fplus"));
    PolyPtr fm = make_poly(p.text("fminus"));
    PolyPtr g{nullptr, blab_poly_free};
    if (p.has("g")) g = make_poly(p.text("g"));
    int k = p.integer_or("k", 1), l = p.integer_or("l", 1);
    return {checked(blab_factored_new(curve, r, fp.get(), fm.get(), k, l, g.get())),
            blab_factored_free};
}

int positive_steps(const Params& p) {
    int n = p.integer_or("n", 1000);
    if (n <= 0) fail_usage("'n' must be positive");
    return n;
}

// ---- simulate ----

void simulate_birkhoff(const Params& p, const blab_curve* curve, int n, const std::string& out) {
    double s0 = p.number_or("s0", 0.0);
    double eps0 = p.number("eps0");
    double dir[2];
    check_rc(blab_direction_from_angle(curve, s0, eps0, dir));
    std::vector<blab_collision> cols(static_cast<size_t>(n));
    check_rc(blab_birkhoff_orbit(curve, s0, dir, n, cols.data()));

    PhasePtr F{nullptr, blab_phase_free};
    if (p.has("integral")) F = make_phase(p.text("integral"));
    CsvWriter csv(out, {"step", "s", "x", "y", "vx", "vy", "eps", "F"});
    auto write = [&](int step, double s, const double* z, const double* v, double eps) {
        std::string f_cell;
        if (F) {
            double fv = 0.0;
            check_rc(blab_phase_eval(F.get(), z[0], z[1], v[0], v[1], &fv));
            f_cell = csv_number(fv);
        }
        csv.row({std::to_string(step), csv_number(s), csv_number(z[0]), csv_number(z[1]),
                 csv_number(v[0]), csv_number(v[1]), csv_number(eps), f_cell});
    };
    double start[2];
    check_rc(blab_curve_point(curve, s0, start));
    write(0, s0, start, dir, eps0);
    for (int i = 0; i < n; ++i)
        write(i + 1, cols[i].s, cols[i].point, cols[i].outgoing, cols[i].eps);
    csv.close();
}

void simulate_angular(const Params& p, const blab_curve* curve, int n, const std::string& out) {
    std::array<double, 2> pole = p.point2_or("pole", {0.0, 0.0});
    std::array<double, 2> a0 = p.point2("a0");
    std::vector<double> pts(2 * static_cast<size_t>(n));
    check_rc(blab_angular_orbit(curve, pole.data(), a0.data(), n, pts.data()));

    PolyPtr F{nullptr, blab_poly_free};
    int power = p.integer_or("p", 1);
    if (power < 1) fail_usage("'p' must be at least 1");
    if (p.has("integral")) F = make_poly(p.text("integral"));
    std::vector<std::string> header = {"step", "x", "y"};
    if (F) header.push_back("G");
    CsvWriter csv(out, header);
    auto write = [&](int step, double x, double y) {
        std::vector<std::string> fields = {std::to_string(step), csv_number(x), csv_number(y)};
        if (F) {
            double rx = x - pole[0], ry = y - pole[1];
            double numerator = 0.0;
            check_rc(blab_poly_eval(F.get(), rx, ry, &numerator));
            fields.push_back(csv_number(numerator / std::pow(rx * rx + ry * ry, power)));
        }
        csv.row(fields);
    };
    write(0, a0[0], a0[1]);
    for (int i = 0; i < n; ++i) write(i + 1, pts[2 * i], pts[2 * i + 1]);
    csv.close();
}

void simulate_magnetic(const Params& p, const blab_curve* curve, int n, const std::string& out) {
    double r = p.radius();
    std::array<double, 2> c0 = p.point2("c0");
    int orientation = p.side_or("orientation", 1) == 1 ? BLAB_CCW : BLAB_CW;
    std::vector<blab_collision> cols(static_cast<size_t>(n));
    std::vector<double> centers(2 * static_cast<size_t>(n));
    check_rc(blab_magnetic_orbit(curve, r, c0.data(), orientation, n, cols.data(),
                                 centers.data()));
    CsvWriter csv(out, {"step", "s", "x", "y", "vx", "vy", "cx", "cy", "eps"});
    for (int i = 0; i < n; ++i)
        csv.row({std::to_string(i + 1), csv_number(cols[i].s), csv_number(cols[i].point[0]),
                 csv_number(cols[i].point[1]), csv_number(cols[i].outgoing[0]),
                 csv_number(cols[i].outgoing[1]), csv_number(centers[2 * i]),
                 csv_number(centers[2 * i + 1]), csv_number(cols[i].eps)});
    csv.close();
}

void simulate_twosided(const Params& p, const blab_curve* curve, int n, const std::string& out) {
    double r = p.radius();
    std::array<double, 2> c0 = p.point2("c0");
    int side = p.side_or("side", 1);
    std::vector<double> rows(4 * static_cast<size_t>(n));
    std::vector<int> sides(static_cast<size_t>(n));
    check_rc(blab_twosided_orbit(curve, r, c0.data(), side, n, rows.data(), sides.data()));

    PolyPtr F{nullptr, blab_poly_free};
    if (p.has("integral")) F = make_poly(p.text("integral"));
    CsvWriter csv(out, {"step", "side", "cx", "cy", "z_s", "eps", "F"});
    for (int i = 0; i < n; ++i) {
        std::string f_cell;
        if (F) {
            double fv = 0.0;
            check_rc(blab_poly_eval(F.get(), rows[4 * i], rows[4 * i + 1], &fv));
            f_cell = csv_number(fv);
        }
        csv.row({std::to_string(i), std::to_string(sides[i]), csv_number(rows[4 * i]),
                 csv_number(rows[4 * i + 1]), csv_number(rows[4 * i + 2]),
                 csv_number(rows[4 * i + 3]), f_cell});
    }
    csv.close();
}

int run_simulate(const Params& p) {
    std::string model = p.text("model");
    std::string out = p.text("out");
    int n = positive_steps(p);
    CurvePtr curve = make_curve(p);
    if (model == "birkhoff")
        simulate_birkhoff(p, curve.get(), n, out);
    else if (model == "angular")
        simulate_angular(p, curve.get(), n, out);
    else if (model == "magnetic")
        simulate_magnetic(p, curve.get(), n, out);
    else if (model == "twosided")
        simulate_twosided(p, curve.get(), n, out);
    else
        fail_usage("unknown model '" + model + "' (birkhoff|angular|magnetic|twosided)");
    return 0;
}

// ---- check ----

struct CheckOutcome {
    double residual = 0.0;
    double default_tol = 0.0;
    std::vector<std::string> detail;
};

CheckOutcome check_integral(const Params& p) {
    std::string model = p.text("model");
    int n = positive_steps(p);
    CurvePtr curve = make_curve(p);
    if (model == "birkhoff") {
        double s0 = p.number_or("s0", 0.0);
        double dir[2];
        check_rc(blab_direction_from_angle(curve.get(), s0, p.number("eps0"), dir));
        PhasePtr F = make_phase(p.text("integral"));
        double start[2], f0 = 0.0;
        check_rc(blab_curve_point(curve.get(), s0, start));
        check_rc(blab_phase_eval(F.get(), start[0], start[1], dir[0], dir[1], &f0));
        std::vector<blab_collision> cols(static_cast<size_t>(n));
        check_rc(blab_birkhoff_orbit(curve.get(), s0, dir, n, cols.data()));
        double worst = 0.0;
        for (const blab_collision& c : cols) {
            double fi = 0.0;
            check_rc(blab_phase_eval(F.get(), c.point[0], c.point[1], c.outgoing[0],
                                     c.outgoing[1], &fi));
            worst = std::max(worst, std::abs(fi - f0));
        }
        return {worst / std::max(1.0, std::abs(f0)), 1e-9, {}};
    }
    if (model == "angular") {
        std::array<double, 2> pole = p.point2_or("pole", {0.0, 0.0});
        std::array<double, 2> a = p.point2("a0");
        PolyPtr F = make_poly(p.text("integral"));
        int power = p.integer_or("p", 1);
        auto gauge = [&](double x, double y) {
            double rx = x - pole[0], ry = y - pole[1], numerator = 0.0;
            check_rc(blab_poly_eval(F.get(), rx, ry, &numerator));
            return numerator / std::pow(rx * rx + ry * ry, power);
        };
        double g0 = gauge(a[0], a[1]), worst = 0.0;
        std::vector<double> pts(2 * static_cast<size_t>(n));
        check_rc(blab_angular_orbit(curve.get(), pole.data(), a.data(), n, pts.data()));
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(gauge(pts[2 * i], pts[2 * i + 1]) - g0));
        return {worst / std::max(1.0, std::abs(g0)), 1e-8, {}};
    }
    if (model == "twosided") {
        std::array<double, 2> c0 = p.point2("c0");
        PolyPtr F = make_poly(p.text("integral"));
        double deviation = 0.0;
        check_rc(blab_twosided_orbit_deviation(curve.get(), p.radius(), F.get(), c0.data(),
                                               p.side_or("side", 1), n, &deviation));
        return {deviation, 1e-9, {}};
    }
    fail_usage("check integral supports models birkhoff, angular, twosided");
}

CheckOutcome check_identity1(const Params& p) {
    CurveFamily family = resolve_family(p.text("f"));
    PolyPtr f = make_poly(family.poly_text);
    std::array<double, 2> z = p.point2("point");
    double residual = 0.0;
    check_rc(blab_identity1_residual(f.get(), family_m(p, family), z[0], z[1],
                                     p.number_or("eps", 1e-2), &residual));
    return {residual, 1e-9, {}};
}

CheckOutcome check_identity2(const Params& p) {
    CurveFamily family = resolve_family(p.text("f"));
    PolyPtr f = make_poly(family.poly_text);
    PolyPtr g = make_poly(p.text_or("g", "1"));
    int n = p.integer_or("samples", 64);
    std::vector<double> samples = family_samples(family, n);
    double mean = 0.0, spread = 0.0;
    check_rc(blab_identity2_constancy(f.get(), g.get(), family_m(p, family), samples.data(), n,
                                      &mean, &spread));
    return {spread, 1e-10, {"c1 = " + csv_number(mean)}};
}

CheckOutcome check_identity22(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    FactoredPtr integral = make_factored(p, curve.get(), r);
    double constant = 0.0, spread = 0.0;
    int skipped = 0;
    check_rc(blab_identity22_constancy(integral.get(), curve.get(), r,
                                       p.integer_or("samples", 64), &constant, &spread,
                                       &skipped));
    return {spread, 1e-10,
            {"C = " + csv_number(constant), "skipped = " + std::to_string(skipped)}};
}

CheckOutcome check_pair(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    int trials = p.integer_or("trials", 20);
    unsigned seed = static_cast<unsigned>(p.integer_or("seed", 1));
    blab_pair_report report;
    if (p.has("phase")) {
        PhasePtr f1 = make_phase(p.text("f1")), f2 = make_phase(p.text("f2"));
        check_rc(blab_phase_pair_check(curve.get(), r, f1.get(), f2.get(), trials, seed,
                                       &report));
    } else {
        PolyPtr f1 = make_poly(p.text("f1")), f2 = make_poly(p.text("f2"));
        check_rc(blab_pair_check(curve.get(), r, f1.get(), f2.get(), trials, seed, &report));
    }
    return {std::max(report.condition1, report.condition2), 1e-8,
            {"condition1 = " + csv_number(report.condition1),
             "condition2 = " + csv_number(report.condition2),
             std::string("degenerate = ") + (report.degenerate ? "yes" : "no")}};
}

CheckOutcome check_boundary(const Params& p) {
    CurvePtr curve = make_curve(p);
    PolyPtr F = make_poly(p.text("integral"));
    blab_constancy bc;
    check_rc(blab_boundary_constancy(F.get(), curve.get(), p.radius(), &bc));
    return {std::max({bc.spread_plus, bc.spread_minus, bc.gap}), 1e-12,
            {"c = " + csv_number(bc.c)}};
}

CheckOutcome check_remarkable(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    PolyPtr F = make_poly(p.text("integral"));
    int grid = p.integer_or("grid", 64);
    if (grid < 2) fail_usage("'grid' must be at least 2");
    double length = curve_length(curve.get());
    double worst = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double residual = 0.0;
            check_rc(blab_remarkable_residual(F.get(), curve.get(), r, length * i / grid,
                                              0.5 * kPi * j / (grid - 1), &residual));
            worst = std::max(worst, residual);
        }
    return {worst, 1e-10, {}};
}

CheckOutcome check_gradient_ratio(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    FactoredPtr integral = make_factored(p, curve.get(), r);
    int n = p.integer_or("samples", 16);
    if (n <= 0) fail_usage("'samples' must be positive");
    double length = curve_length(curve.get());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double residual = 0.0;
        check_rc(blab_gradient_ratio_residual(integral.get(), curve.get(), r, length * i / n,
                                              &residual));
        worst = std::max(worst, residual);
    }
    return {worst, 1e-12, {}};
}

CheckOutcome check_offset_poly(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    PolyPtr poly = p.has("poly")
                       ? make_poly(p.text("poly"))
                       : PolyPtr{checked(blab_offset_polynomial(curve.get(), r)), blab_poly_free};
    double residual = 0.0;
    check_rc(blab_offset_vanishing_residual(poly.get(), curve.get(), r,
                                            p.integer_or("samples", 512), &residual));
    return {residual, 1e-6, {}};
}

CheckOutcome check_symplectic(const Params& p) {
    CurvePtr curve = make_curve(p);
    double r = p.radius();
    int trials = p.integer_or("trials", 100);
    if (trials <= 0) fail_usage("'trials' must be positive");
    double h = p.number_or("h", 1e-5);
    std::vector<double> centers(2 * static_cast<size_t>(trials));
    check_rc(blab_annulus_samples(curve.get(), r, trials,
                                  static_cast<unsigned>(p.integer_or("seed", 1)), 0.05,
                                  centers.data()));
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        double residual = 0.0;
        check_rc(blab_symplecticity_residual(curve.get(), r, &centers[2 * i], 1, h, &residual));
        worst = std::max(worst, residual);
    }
    return {worst, 1e-4, {}};
}

int run_check(const Params& p, const std::string& name, bool verbose) {
    CheckOutcome outcome;
    if (name == "integral")
        outcome = check_integral(p);
    else if (name == "identity1")
        outcome = check_identity1(p);
    else if (name == "identity2")
        outcome = check_identity2(p);
    else if (name == "identity22")
        outcome = check_identity22(p);
    else if (name == "pair")
        outcome = check_pair(p);
    else if (name == "boundary")
        outcome = check_boundary(p);
    else if (name == "remarkable")
        outcome = check_remarkable(p);
    else if (name == "gradient-ratio")
        outcome = check_gradient_ratio(p);
    else if (name == "offset-poly")
        outcome = check_offset_poly(p);
    else if (name == "symplectic")
        outcome = check_symplectic(p);
    else
        fail_usage("unknown check '" + name +
                   "' (integral|identity1|identity2|identity22|pair|boundary|remarkable|"
                   "gradient-ratio|offset-poly|symplectic)");
    double tol = p.number_or("tol", outcome.default_tol);
    bool pass = outcome.residual < tol;
    std::printf("CHECK %s residual=%.17g tol=%.17g %s\n", name.c_str(), outcome.residual, tol,
                pass ? "PASS" : "FAIL");
    if (verbose)
        for (const std::string& line : outcome.detail) std::printf("# %s\n", line.c_str());
    return pass ? 0 : 3;
}

// ---- singular / cusps / verdict ----

void curve_bounding_box(const blab_curve* curve, double pad, double lo[2], double hi[2]) {
    double length = curve_length(curve);
    lo[0] = lo[1] = 1e300;
    hi[0] = hi[1] = -1e300;
    for (int i = 0; i < 256; ++i) {
        double z[2];
        check_rc(blab_curve_point(curve, length * i / 256, z));
        lo[0] = std::min(lo[0], z[0]);
        lo[1] = std::min(lo[1], z[1]);
        hi[0] = std::max(hi[0], z[0]);
        hi[1] = std::max(hi[1], z[1]);
    }
    lo[0] -= pad;
    lo[1] -= pad;
    hi[0] += pad;
    hi[1] += pad;
}

int run_singular(const Params& p) {
    CurvePtr curve{nullptr, blab_curve_free};
    if (p.has("curve")) curve = make_curve(p);
    PolyPtr poly{nullptr, blab_poly_free};
    if (p.has("poly")) {
        poly = make_poly(p.text("poly"));
    } else {
        if (!curve) fail_usage("'poly' or 'curve' with beta/r is required");
        poly = PolyPtr{checked(blab_offset_polynomial(curve.get(), p.radius())), blab_poly_free};
    }
    double lo[2], hi[2];
    if (p.has("box")) {
        std::array<double, 4> box = p.box4("box");
        lo[0] = box[0];
        lo[1] = box[1];
        hi[0] = box[2];
        hi[1] = box[3];
    } else if (curve) {
        curve_bounding_box(curve.get(), p.radius() + 0.5, lo, hi);
    } else {
        fail_usage("'box' is required with a bare polynomial");
    }
    double pts[128];
    int count = 0;
    check_rc(blab_find_singular_points(poly.get(), lo, hi, pts, 64, &count));
    for (int i = 0; i < std::min(count, 64); ++i) {
        std::printf("SINGULAR x=%.17g y=%.17g\n", pts[2 * i], pts[2 * i + 1]);
        blab_branch branches[16];
        int n_branches = 0, failed = 0;
        check_rc(blab_estimate_branch(poly.get(), &pts[2 * i], nullptr, branches, 16,
                                      &n_branches, &failed));
        for (int j = 0; j < std::min(n_branches, 16); ++j)
            std::printf("BRANCH x=%.17g y=%.17g index=%.17g ci=%.17g\n", branches[j].point[0],
                        branches[j].point[1], branches[j].index, branches[j].index_ci);
        if (failed > 0) std::printf("# %d branch trace(s) failed\n", failed);
    }
    return 0;
}

int run_cusps(const Params& p) {
    CurvePtr curve = make_curve(p);
    blab_cusp cusps[64];
    double degenerate[16];
    int count = 0, degenerate_count = 0;
    check_rc(blab_curve_cusps(curve.get(), p.radius(), cusps, 64, &count, degenerate, 16,
                              &degenerate_count));
    for (int i = 0; i < std::min(count, 64); ++i)
        std::printf("CUSP s=%.17g x=%.17g y=%.17g\n", cusps[i].s, cusps[i].point[0],
                    cusps[i].point[1]);
    for (int i = 0; i < std::min(degenerate_count, 16); ++i)
        std::printf("DEGENERATE s=%.17g\n", degenerate[i]);
    return 0;
}

int run_verdict(const Params& p) {
    CurvePtr curve = make_curve(p);
    char verdict[256];
    blab_branch evidence[64];
    int verdict_len = 0, count = 0;
    check_rc(blab_verdict(curve.get(), p.radius(), verdict, sizeof(verdict), &verdict_len,
                          evidence, 64, &count));
    for (int i = 0; i < std::min(count, 64); ++i)
        std::printf("BRANCH x=%.17g y=%.17g index=%.17g ci=%.17g\n", evidence[i].point[0],
                    evidence[i].point[1], evidence[i].index, evidence[i].index_ci);
    std::printf("VERDICT %s\n", verdict);
    return 0;
}

// ---- export ----

std::vector<std::array<double, 2>> sampled_offset(const blab_curve* curve, double d,
                                                  int segments) {
    double length = curve_length(curve);
    std::vector<std::array<double, 2>> pts(static_cast<size_t>(segments) + 1);
    for (int i = 0; i <= segments; ++i) {
        double z[2];
        check_rc(blab_curve_offset_point(curve, length * i / segments, d, z));
        pts[static_cast<size_t>(i)] = {z[0], z[1]};
    }
    return pts;
}

std::vector<std::array<double, 2>> arc_points(std::array<double, 2> center,
                                              std::array<double, 2> from,
                                              std::array<double, 2> to, bool ccw) {
    double radius = std::hypot(from[0] - center[0], from[1] - center[1]);
    double a0 = std::atan2(from[1] - center[1], from[0] - center[0]);
    double a1 = std::atan2(to[1] - center[1], to[0] - center[0]);
    if (ccw)
        while (a1 <= a0) a1 += 2.0 * kPi;
    else
        while (a1 >= a0) a1 -= 2.0 * kPi;
    std::vector<std::array<double, 2>> pts(65);
    for (int k = 0; k <= 64; ++k) {
        double t = a0 + (a1 - a0) * k / 64.0;
        pts[static_cast<size_t>(k)] = {center[0] + radius * std::cos(t),
                                       center[1] + radius * std::sin(t)};
    }
    return pts;
}

const std::string kTraceColor = "#1f6fb4";

void export_point_trace(SvgDocument& svg, const CsvTable& t) {
    size_t cx = t.column("x"), cy = t.column("y");
    std::vector<std::array<double, 2>> pts;
    pts.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i)
        pts.push_back({t.value(i, cx), t.value(i, cy)});
    svg.polyline(std::move(pts), kTraceColor, 0.75);
}

void export_magnetic_trace(SvgDocument& svg, const CsvTable& t, bool ccw) {
    size_t x = t.column("x"), y = t.column("y");
    size_t cx = t.column("cx"), cy = t.column("cy");
    for (size_t i = 0; i + 1 < t.rows.size(); ++i)
        svg.polyline(arc_points({t.value(i, cx), t.value(i, cy)},
                                {t.value(i, x), t.value(i, y)},
                                {t.value(i + 1, x), t.value(i + 1, y)}, ccw),
                     kTraceColor, 0.75);
}

void export_twosided_trace(SvgDocument& svg, const CsvTable& t, const blab_curve* curve) {
    size_t side = t.column("side"), cx = t.column("cx"), cy = t.column("cy");
    size_t zs = t.column("z_s");
    for (size_t i = 1; i < t.rows.size(); ++i) {
        double from[2], to[2];
        check_rc(blab_curve_point(curve, t.value(i - 1, zs), from));
        check_rc(blab_curve_point(curve, t.value(i, zs), to));
        svg.polyline(arc_points({t.value(i, cx), t.value(i, cy)}, {from[0], from[1]},
                                {to[0], to[1]}, t.value(i, side) == 1.0),
                     kTraceColor, 0.75);
    }
}

int run_export(const Params& p, const std::string& format) {
    if (format != "svg") fail_usage("unknown export format '" + format + "' (svg)");
    CurvePtr curve = make_curve(p);
    SvgDocument svg;
    svg.polyline(sampled_offset(curve.get(), 0.0, 512), "#202020", 1.5);
    if (p.has("offsets")) {
        double d = p.number("offsets");
        if (d <= 0.0) fail_usage("'offsets' must be positive");
        svg.polyline(sampled_offset(curve.get(), d, 512), "#8a8a8a", 0.75);
        svg.polyline(sampled_offset(curve.get(), -d, 512), "#8a8a8a", 0.75);
    }
    if (p.has("trace")) {
        CsvTable t = read_csv(p.text("trace"));
        std::string model = p.text("model");
        if (model == "birkhoff" || model == "angular")
            export_point_trace(svg, t);
        else if (model == "magnetic")
            export_magnetic_trace(svg, t, p.side_or("orientation", 1) == 1);
        else if (model == "twosided")
            export_twosided_trace(svg, t, curve.get());
        else
            fail_usage("unknown model '" + model + "' for the trace");
    }
    svg.write(p.text("out"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"laboratory for billiards in convex tables: chord, angular, magnetic, and "
                 "two-sided magnetic models"};
    app.require_subcommand(1);

    Params params;
    std::string config_path, check_name, export_format;
    bool verbose = false;

    auto key_option = [&params](CLI::App* cmd, const std::string& flag, const std::string& key,
                                const std::string& desc) {
        cmd->add_option_function<std::string>(
            flag, [&params, key](const std::string& v) { params.set_flag(key, v); }, desc);
    };

    CLI::App* simulate = app.add_subcommand("simulate", "write an orbit trace CSV");
    key_option(simulate, "model", "model", "birkhoff|angular|magnetic|twosided");
    for (const char* key : {"curve", "beta", "r", "s0", "eps0", "c0", "side", "orientation",
                            "pole", "a0", "integral", "p", "out"})
        key_option(simulate, std::string("--") + key, key, "");
    key_option(simulate, "-n,--n", "n", "step count (default 1000)");
    simulate->add_option("--config", config_path, "key = value file; flags win");

    CLI::App* check = app.add_subcommand(
        "check", "run one identity or invariance check and print a report line");
    check->add_option("name", check_name,
                      "integral|identity1|identity2|identity22|pair|boundary|remarkable|"
                      "gradient-ratio|offset-poly|symplectic")
        ->required();
    for (const char* key :
         {"curve", "beta", "r", "model", "s0", "eps0", "c0", "side", "pole", "a0", "integral",
          "p", "f", "g", "m", "point", "eps", "fplus", "fminus", "k", "l", "f1", "f2", "trials",
          "seed", "samples", "grid", "poly", "tol"})
        key_option(check, std::string("--") + key, key, "");
    key_option(check, "-n,--n", "n", "step count (default 1000)");
    key_option(check, "--stencil", "h", "finite-difference step for symplectic (default 1e-5)");
    check->add_flag_callback("--phase", [&params] { params.set_flag("phase", "1"); },
                             "pair given in phase coordinates");
    check->add_flag("--verbose", verbose, "print detail lines after the report");
    check->add_option("--config", config_path, "key = value file; flags win");

    CLI::App* singular =
        app.add_subcommand("singular", "locate singular points and estimate branch indices");
    for (const char* key : {"curve", "beta", "r", "poly", "box"})
        key_option(singular, std::string("--") + key, key, "");
    singular->add_option("--config", config_path, "key = value file; flags win");

    CLI::App* cusps = app.add_subcommand("cusps", "cusps of the inner offset curve");
    for (const char* key : {"curve", "beta", "r"})
        key_option(cusps, std::string("--") + key, key, "");
    cusps->add_option("--config", config_path, "key = value file; flags win");

    CLI::App* verdict =
        app.add_subcommand("verdict", "polynomial integrability verdict for a curve and radius");
    for (const char* key : {"curve", "beta", "r"})
        key_option(verdict, std::string("--") + key, key, "");
    verdict->add_option("--config", config_path, "key = value file; flags win");

    CLI::App* exporter = app.add_subcommand("export", "render curves and traces");
    exporter->add_option("format", export_format, "svg")->required();
    for (const char* key : {"curve", "beta", "r", "offsets", "trace", "model", "orientation",
                            "out"})
        key_option(exporter, std::string("--") + key, key, "");
    exporter->add_option("--config", config_path, "key = value file; flags win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (!config_path.empty()) params.load_config(config_path);
        if (simulate->parsed()) return run_simulate(params);
        if (check->parsed()) return run_check(params, check_name, verbose);
        if (singular->parsed()) return run_singular(params);
        if (cusps->parsed()) return run_cusps(params);
        if (verdict->parsed()) return run_verdict(params);
        if (exporter->parsed()) return run_export(params, export_format);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
