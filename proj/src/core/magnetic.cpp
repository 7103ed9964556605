#include "magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rootfind.hpp"

namespace blab {

namespace {

// Extremum of |gamma(s) - c| over the curve: coarse scan plus golden polish
// around the best cell.
double boundary_distance_extremum(const ConvexCurve& curve, Vec2 c, bool farthest) {
    const int N = 512;
    double L = curve.length();
    int best = 0;
    double best_val = farthest ? -1.0 : HUGE_VAL;
    for (int i = 0; i < N; ++i) {
        double d = dist(curve.point(L * i / N), c);
        if (farthest ? d > best_val : d < best_val) {
            best_val = d;
            best = i;
        }
    }
    double lo = L * (best - 1) / N, hi = L * (best + 1) / N;
    auto f = [&](double s) {
        double d = dist(curve.point(s), c);
        return farthest ? -d : d;
    };
    double s = golden_min(f, lo, hi, 1e-12 * L);
    return dist(curve.point(s), c);
}

// Parameter of the nearest point on the parallel curve at signed depth d:
// coarse scan plus golden polish. Offsets share the base parametrization.
double nearest_offset_param(const ConvexCurve& curve, double d, Vec2 p) {
    const int N = 512;
    double L = curve.length();
    int best = 0;
    double best_val = HUGE_VAL;
    for (int i = 0; i < N; ++i) {
        double v = dist(curve.offset_point(L * i / N, d), p);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    auto f = [&](double s) { return dist(curve.offset_point(s, d), p); };
    return golden_min(f, L * (best - 1) / N, L * (best + 1) / N, 1e-12 * L);
}

Vec2 traversal_velocity(Vec2 z, Vec2 center, double r, Orientation orientation) {
    Vec2 v = J(z - center) / r;
    return orientation == Orientation::ccw ? v : -v;
}

}  // namespace

CenterAnnulus::CenterAnnulus(const ConvexCurve& curve, double r) : curve_(&curve), r_(r) {
    WeakFieldReport report = curve.validate_weak_field(1.0 / r);
    if (!report.admissible)
        fail(Errc::invalid_argument, "center annulus needs the weak-field regime");
}

Vec2 CenterAnnulus::inner_boundary(double s) const { return curve_->offset_point(s, r_); }

Vec2 CenterAnnulus::outer_boundary(double s) const { return curve_->offset_point(s, -r_); }

double CenterAnnulus::nearest_boundary_distance(Vec2 center) const {
    return boundary_distance_extremum(*curve_, center, false);
}

double CenterAnnulus::farthest_boundary_distance(Vec2 center) const {
    return boundary_distance_extremum(*curve_, center, true);
}

bool CenterAnnulus::contains(Vec2 center) const {
    // The circle around the center misses the closed domain in exactly two
    // ways: it is too far to reach it, or it strictly encloses it.
    if (farthest_boundary_distance(center) < r_) return false;
    if (curve_->inside_indicator(center) > 0.0) return true;
    return nearest_boundary_distance(center) <= r_;
}

bool CenterAnnulus::contains_by_offsets(Vec2 center) const {
    // Independent membership test against the two offset loops. A convex loop
    // has p on its interior side exactly when p - q points along the interior
    // normal at the nearest loop point q. The outer offset keeps the base
    // orientation, so its interior normal is the base inward normal; the inner
    // offset is traversed reversed in the weak-field regime (1 - kr < 0), so
    // its interior normal is the opposite one.
    double s_out = nearest_offset_param(*curve_, -r_, center);
    if (dot(center - outer_boundary(s_out), curve_->frame(s_out).inward_normal) < 0.0)
        return false;
    double s_in = nearest_offset_param(*curve_, r_, center);
    return dot(center - inner_boundary(s_in), curve_->frame(s_in).inward_normal) >= 0.0;
}

BoundaryCollision larmor_exit(const ConvexCurve& curve, double r, Vec2 center,
                              Orientation orientation) {
    WeakFieldReport report = curve.validate_weak_field(1.0 / r);
    if (!report.admissible)
        fail(Errc::invalid_argument, "larmor_exit needs the weak-field regime");

    const int N = 2048;
    double L = curve.length();
    auto h = [&](double s) { return dist(curve.point(s), center) - r; };

    std::vector<double> roots;
    double prev = h(0.0);
    double prev_s = 0.0;
    for (int i = 1; i <= N; ++i) {
        double s = L * i / N;
        double val = h(s);
        if (prev == 0.0) {
            roots.push_back(prev_s);
        } else if ((prev < 0.0) != (val < 0.0)) {
            roots.push_back(refine_root(h, prev_s, s, prev, val, 1e-12 * L));
        }
        prev = val;
        prev_s = s;
    }
    // A root at s = 0 was recorded once; drop a duplicate near L.
    if (roots.size() >= 2 && roots.front() < 1e-9 * L && roots.back() > L - 1e-9 * L)
        roots.pop_back();

    if (roots.empty())
        fail(Errc::no_intersection, "Larmor circle does not reach the boundary");
    if (roots.size() == 1 || roots.size() > 2)
        fail(Errc::tangent_circle, "Larmor circle meets the boundary tangentially");
    double gap = roots[1] - roots[0];
    if (std::min(gap, L - gap) <= 1e-10)
        fail(Errc::tangent_circle, "Larmor circle intersections coincide");

    // Exit point: traversal velocity leaves the domain. The other root must
    // enter it, otherwise the circle only grazes.
    int exit_index = -1;
    for (int i = 0; i < 2; ++i) {
        FramePacket f = curve.frame(roots[i]);
        Vec2 v = traversal_velocity(f.point, center, r, orientation);
        double outward = -dot(v, f.inward_normal);
        if (std::abs(outward) <= 1e-10)
            fail(Errc::tangent_circle, "Larmor circle tangent to the boundary at a crossing");
        if (outward > 0.0) {
            if (exit_index >= 0)
                fail(Errc::tangent_circle, "both Larmor crossings leave the domain");
            exit_index = i;
        }
    }
    if (exit_index < 0) fail(Errc::tangent_circle, "no outgoing Larmor crossing");

    BoundaryCollision c;
    c.s = roots[exit_index];
    FramePacket f = curve.frame(c.s);
    c.point = f.point;
    c.incoming = traversal_velocity(f.point, center, r, orientation);
    Vec2 n = f.inward_normal;
    c.outgoing = normalized(c.incoming - n * (2.0 * dot(n, c.incoming)));
    c.eps = std::atan2(dot(c.outgoing, n), dot(c.outgoing, f.tangent));
    return c;
}

LarmorArcState magnetic_step(const ConvexCurve& curve, double r, Vec2 center,
                             Orientation orientation) {
    BoundaryCollision hit = larmor_exit(curve, r, center, orientation);
    LarmorArcState next;
    next.position = hit.point;
    next.velocity = hit.outgoing;
    next.orientation = orientation;
    Vec2 offset = J(hit.outgoing) * r;
    next.center = orientation == Orientation::ccw ? hit.point + offset : hit.point - offset;
    return next;
}

BivariatePolynomial ellipse_offset_polynomial(double a, double b, double r) {
    if (!(a >= b && b > 0.0 && r > 0.0))
        fail(Errc::invalid_argument, "offset polynomial needs a >= b > 0 and r > 0");
    using P = BivariatePolynomial;
    auto C = [](double v) { return P::constant(v); };
    P x2 = P::x() * P::x(), y2 = P::y() * P::y();
    P x4 = x2 * x2, y4 = y2 * y2, x6 = x4 * x2, y6 = y4 * y2;
    double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;
    double b2 = b * b, b4 = b2 * b2, b6 = b4 * b2, b8 = b4 * b4;
    double r2 = r * r, r4 = r2 * r2, r6 = r4 * r2;

    P ry = C(r2) - y2;       // r^2 - y^2
    P rx = C(r2) - x2;       // r^2 - x^2
    P q = x2 + y2 - C(r2);   // x^2 + y^2 - r^2

    P t_a8 = (C(b4) + ry.pow(2) - (C(r2) + y2).scaled(2.0 * b2)).scaled(a8);

    P t_b4 = (rx.pow(2) * (C(b4) - (C(r2) - x2 + y2).scaled(2.0 * b2) + q.pow(2))).scaled(b4);

    P t_a6 = (C(b6) + ry.pow(2) * (C(r2) + x2 - y2)
              - (C(r2) - x2.scaled(2.0) + y2.scaled(3.0)).scaled(b4)
              - (C(r4) + (x2 - y2) * y2.scaled(3.0) + (x2.scaled(3.0) + y2.scaled(2.0)).scaled(r2))
                    .scaled(b2))
                 .scaled(-2.0 * a6);

    P t_a2b2 = ((C(r2) + x2).scaled(-b6)
                - q.pow(2) * (C(r4) - x2 * y2 - (x2 + y2).scaled(r2))
                + (C(r4) - x4.scaled(3.0) + (x2 * y2).scaled(3.0)
                   + (x2.scaled(2.0) + y2.scaled(3.0)).scaled(r2))
                      .scaled(b4)
                + (C(r6) - x6.scaled(2.0) + x4 * y2 - (x2 * y4).scaled(3.0)
                   + (x2.scaled(-4.0) + y2.scaled(2.0)).scaled(r4)
                   + (x4.scaled(5.0) - (x2 * y2).scaled(3.0) - y4.scaled(3.0)).scaled(r2))
                      .scaled(b2))
                   .scaled(2.0 * a2 * b2);

    P t_a4 = (C(b8) + (C(r2) + x2.scaled(3.0) - y2.scaled(2.0)).scaled(2.0 * b6)
              + ry.pow(2) * q.pow(2)
              - (C(3.0 * r4) - x4.scaled(3.0) + (x2 * y2).scaled(5.0) - y4.scaled(3.0)
                 + (x2 + y2).scaled(4.0 * r2))
                    .scaled(2.0 * b4)
              + (C(r6) - (x4 * y2).scaled(3.0) + x2 * y4 - y6.scaled(2.0)
                 + (x2 - y2.scaled(2.0)).scaled(2.0 * r4)
                 + (x4.scaled(-3.0) - (x2 * y2).scaled(3.0) + y4.scaled(5.0)).scaled(r2))
                    .scaled(2.0 * b2))
                 .scaled(a4);

    return t_a8 + t_b4 + t_a6 + t_a2b2 + t_a4;
}

BivariatePolynomial offset_polynomial(const ConvexCurve& curve, double r) {
    std::string spec = curve.spec_string();
    if (spec.rfind("circle:", 0) == 0) {
        double radius = std::stod(spec.substr(7));
        return ellipse_offset_polynomial(radius, radius, r);
    }
    if (spec.rfind("ellipse:", 0) == 0) {
        size_t comma = spec.find(',');
        double a = std::stod(spec.substr(8, comma - 8));
        double b = std::stod(spec.substr(comma + 1));
        return ellipse_offset_polynomial(a, b, r);
    }
    fail(Errc::no_offset_model, "no closed-form offset polynomial for " + spec);
}

Vec2 ellipse_offset_singular_point(double r) {
    if (!(r > 0.0)) fail(Errc::invalid_argument, "offset distance must be positive");
    double c2 = std::cbrt(2.0);            // 2^{1/3}
    double c4 = c2 * c2;                   // 2^{2/3}
    double r23 = std::cbrt(r * r);         // r^{2/3}
    double r43 = r23 * r23;                // r^{4/3}
    double r2 = r * r;
    double x2 = 16.0 / 3.0 - 4.0 * c4 * r23 + 2.0 * c2 * r43 - r2 / 3.0;
    double y2 = c4 * r23 - 1.0 / 3.0 - 2.0 * c2 * r43 + 4.0 * r2 / 3.0;
    if (!(x2 > 0.0 && y2 > 0.0))
        fail(Errc::invalid_argument, "no real first-quadrant singular point at this radius");
    return {std::sqrt(x2), std::sqrt(y2)};
}

double offset_vanishing_residual(const BivariatePolynomial& poly, const ConvexCurve& curve,
                                 double r, int n_samples) {
    if (n_samples < 1) fail(Errc::invalid_argument, "need at least one sample");
    double L = curve.length();
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double s = L * i / n_samples;
        for (double d : {r, -r}) {
            Vec2 p = curve.offset_point(s, d);
            // The sample coordinates carry absolute error of order eps*(1+r)
            // from the offset construction. The comparison scale is the
            // largest monomial within that uncertainty box; a bare monomial
            // magnitude would vanish at singular locus points (offset cusps
            // and self-crossings) and turn roundoff into a unit residual.
            double u = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(d) + norm(p));
            double ax = std::abs(p.x) + u, ay = std::abs(p.y) + u;
            double scale = 0.0;
            for (const auto& [exps, c] : poly.raw().terms())
                scale = std::max(scale,
                                 std::abs(c) * std::pow(ax, exps[0]) * std::pow(ay, exps[1]));
            if (!(scale > 0.0)) continue;
            worst = std::max(worst, std::abs(poly.eval(p)) / scale);
        }
    }
    return worst;
}

Vec2 sample_annulus_center(const CenterAnnulus& annulus, std::mt19937& rng, double margin) {
    const ConvexCurve& curve = annulus.curve();
    double r = annulus.r();
    double xm = 0.0, ym = 0.0;
    for (int i = 0; i < 256; ++i) {
        Vec2 p = curve.point(curve.length() * i / 256);
        xm = std::max(xm, std::abs(p.x));
        ym = std::max(ym, std::abs(p.y));
    }
    std::uniform_real_distribution<double> ux(-(xm + r), xm + r), uy(-(ym + r), ym + r);
    for (int tries = 0; tries < 200000; ++tries) {
        Vec2 c{ux(rng), uy(rng)};
        if (annulus.nearest_boundary_distance(c) <= r - margin &&
            annulus.farthest_boundary_distance(c) >= r + margin)
            return c;
    }
    fail(Errc::numerical_failure, "annulus rejection sampling exhausted its tries");
}

}  // namespace blab
