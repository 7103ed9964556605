#include "dual.hpp"

#include <algorithm>
#include <cmath>

#include "algebra.hpp"
#include "rootfind.hpp"

namespace blab {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// x^e for possibly negative x when e is (numerically) an integer.
double signed_pow(double x, double e) {
    double r = std::round(e);
    if (std::abs(e - r) < 1e-12 && std::abs(r) < 1e9) {
        double mag = std::pow(std::abs(x), r);
        return (x < 0.0 && (long long)r % 2 != 0) ? -mag : mag;
    }
    if (x < 0.0) fail(Errc::numerical_failure, "negative base under a fractional exponent");
    return std::pow(x, e);
}

}  // namespace

double AngularIntegralModel::eval(Vec2 rel) const {
    double r2 = norm2(rel);
    if (!(r2 > 0.0)) fail(Errc::at_pole, "angular integral is undefined at the pole");
    return F.eval(rel) / ipow(r2, p);
}

LineRecord dualize(const DualityFrame& frame, Vec2 point) {
    Vec2 rel = point - frame.pole;
    if (norm(rel) <= 1e-12) fail(Errc::at_pole, "dual of the pole is undefined");
    return {rel.x, rel.y};
}

Vec2 dualize(const DualityFrame& frame, const LineRecord& line) {
    if (std::hypot(line.u, line.v) <= 1e-12)
        fail(Errc::at_pole, "degenerate line record dualizes to the pole");
    return frame.pole + Vec2{line.u, line.v};
}

LineRecord line_through(const DualityFrame& frame, Vec2 P, Vec2 Q) {
    if (norm(P - Q) <= 1e-12 * (1.0 + norm(P)))
        fail(Errc::invalid_argument, "a line needs two distinct points");
    Vec2 p = P - frame.pole, q = Q - frame.pole;
    double det = cross(p, q);
    if (std::abs(det) <= 1e-12 * (norm(p) * norm(q) + 1e-300))
        fail(Errc::through_pole, "line through the pole has no dual point");
    return {(q.y - p.y) / det, (p.x - q.x) / det};
}

LineRecord line_along(const DualityFrame& frame, Vec2 P, Vec2 direction) {
    if (!(norm(direction) > 0.0)) fail(Errc::invalid_argument, "zero direction");
    return line_through(frame, P, P + direction);
}

double line_residual(const DualityFrame& frame, const LineRecord& line, Vec2 P) {
    Vec2 rel = P - frame.pole;
    return line.u * rel.x + line.v * rel.y - 1.0;
}

CurveView dual_curve(const ConvexCurve& gamma, const DualityFrame& frame) {
    Vec2 O = frame.pole;
    CurveView view;
    view.period = gamma.length();
    view.point = [gamma, O](double s) {
        FramePacket f = gamma.frame(s);
        Vec2 p = f.point - O;
        double c = dot(f.inward_normal, p);
        if (std::abs(c) <= 1e-12 * (1.0 + norm(p)))
            fail(Errc::through_pole, "a tangent line of the curve passes through the pole");
        return O + f.inward_normal / c;
    };
    view.velocity = [gamma, O](double s) {
        FramePacket f = gamma.frame(s);
        Vec2 p = f.point - O;
        double c = dot(f.inward_normal, p);
        double k = f.curvature;
        // d/ds of N/c with N' = -k T and c' = -k <T, p>
        return f.tangent * (-k / c) + f.inward_normal * (k * dot(f.tangent, p) / (c * c));
    };
    return view;
}

Vec2 angular_reflect(const DualityFrame& frame, Vec2 A, Vec2 T) {
    Vec2 a = A - frame.pole, t = T - frame.pole;
    if (norm(a) <= 1e-12 || norm(t) <= 1e-12)
        fail(Errc::at_pole, "angular reflection needs rays away from the pole");
    Vec2 ea = normalized(a), et = normalized(t);
    Vec2 eb = et * (2.0 * dot(ea, et)) - ea;
    LineRecord l = line_through(frame, A, T);
    Vec2 n{l.u, l.v};
    // B is where the reflected line through the pole meets the tangent line.
    // Obtuse configurations land on the opposite ray; only the parallel case
    // (the genuine exclusion set) has no image.
    double along = dot(n, eb);
    if (std::abs(along) <= 1e-10 * norm(n))
        fail(Errc::on_exclusion_set, "reflected ray parallel to the tangent line");
    return frame.pole + eb * (1.0 / along);
}

Vec2 angular_step(const CurveView& Gamma, const DualityFrame& frame, Vec2 A) {
    const int N = 1024;
    double period = Gamma.period;

    // winding of Gamma around A: zero outside, full turn inside
    double winding = 0.0;
    Vec2 prev = Gamma.point(0.0) - A;
    for (int i = 1; i <= N; ++i) {
        Vec2 cur = Gamma.point(period * i / N) - A;
        winding += std::atan2(cross(prev, cur), dot(prev, cur));
        prev = cur;
    }
    if (std::abs(winding) > 3.14159)
        fail(Errc::inside_curve, "angular step needs an exterior point");

    // tangencies from A: zeros of cross(velocity, A - point)
    auto h = [&](double t) { return cross(Gamma.velocity(t), A - Gamma.point(t)); };
    std::vector<double> roots;
    double hp = h(0.0);
    for (int i = 1; i <= N; ++i) {
        double t = period * i / N;
        double hc = h(t);
        if (hp == 0.0)
            roots.push_back(period * (i - 1) / N);
        else if (hp * hc < 0.0)
            roots.push_back(refine_root(h, period * (i - 1) / N, t, hp, hc, 1e-12));
        hp = hc;
    }
    std::vector<double> merged;
    for (double r : roots) {
        bool dup = false;
        for (double m : merged)
            if (std::abs(r - m) < 1e-9 * period || period - std::abs(r - m) < 1e-9 * period)
                dup = true;
        if (!dup) merged.push_back(r);
    }
    if (merged.size() != 2)
        fail(Errc::numerical_failure, "expected two tangent lines from an exterior point");

    Vec2 O = frame.pole;
    for (double t : merged) {
        Vec2 T = Gamma.point(t);
        if (cross(T - A, O - A) > 0.0) return angular_reflect(frame, A, T);
    }
    fail(Errc::numerical_failure, "no tangency satisfied the right-turn rule");
}

Vec2 angular_step(const ConvexCurve& Gamma, const DualityFrame& frame, Vec2 A) {
    return angular_step(Gamma.view(), frame, A);
}

double duality_equivalence_residual(const ConvexCurve& gamma, const DualityFrame& frame,
                                    const BoundaryCollision& collision) {
    LineRecord in = line_along(frame, collision.point, collision.incoming);
    LineRecord out = line_along(frame, collision.point, collision.outgoing);
    Vec2 A = dualize(frame, in);
    Vec2 B = dualize(frame, out);
    // The collision's tangent line dualizes to the tangency point T shared by
    // A and B; reflecting the ray to A about the ray to T must land on B.
    // The full map reflects about the right tangent seen from A, which is this
    // T exactly when the pole lies left of the traversal, so the tangency is
    // taken from the collision rather than searched for.
    Vec2 tangent = gamma.frame(collision.s).tangent;
    Vec2 T = dualize(frame, line_along(frame, collision.point, tangent));
    return norm(angular_reflect(frame, A, T) - B);
}

AngularIntegralModel transport_integral(const SigmaPolynomial& Phi, int p) {
    if (p < 1) fail(Errc::invalid_argument, "half-degree p must be positive");
    int deg = 0;
    if (!Phi.is_homogeneous(&deg))
        fail(Errc::not_homogeneous, "transport needs a homogeneous polynomial");
    if (deg != 2 * p)
        fail(Errc::not_homogeneous, "transport needs degree 2p, got degree " +
                                        std::to_string(deg));

    // F(x, y) = Phi(1, y, -x): sigma^i v1^j v2^k -> (-1)^k x^k y^j
    Multinomial F(2);
    for (const auto& [exps, c] : Phi.raw().terms()) {
        double sign = exps[2] % 2 == 0 ? 1.0 : -1.0;
        F.add({exps[2], exps[1]}, sign * c);
    }

    AngularIntegralModel model;
    model.F = BivariatePolynomial(F);
    model.p = p;

    BivariatePolynomial r2 =
        BivariatePolynomial::x() * BivariatePolynomial::x() +
        BivariatePolynomial::y() * BivariatePolynomial::y();
    double lead = model.F.coeff(2 * p, 0);
    BivariatePolynomial diff = model.F - r2.pow(p).scaled(lead);
    model.trivial_constant =
        !model.F.is_zero() &&
        diff.max_abs_coeff() <= 1e-12 * std::max(1.0, model.F.max_abs_coeff());
    return model;
}

double identity1_residual(const BivariatePolynomial& Ft, double m, Vec2 point, double eps) {
    if (std::abs(Ft.eval(point)) >= 1e-9)
        fail(Errc::invalid_argument, "point does not lie on the curve");
    if (eps == 0.0) return 0.0;

    double x = point.x, y = point.y;
    Vec2 g = Ft.gradient(point);
    double r2 = x * x + y * y;
    double den = r2 + 2.0 * eps * (x * g.y - y * g.x);
    if (std::abs(den) <= 1e-6)
        fail(Errc::mu_singular, "mu denominator vanishes at this epsilon");
    double mu = -r2 * eps / den;

    double lhs = signed_pow(-mu / eps, 2.0 * m) *
                 Ft.eval(x + eps * g.y, y - eps * g.x);
    double rhs = Ft.eval(x + mu * g.y, y - mu * g.x);
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

ConstancyStats identity2_residual(const BivariatePolynomial& f, const BivariatePolynomial& g,
                                  double m, const std::vector<Vec2>& samples) {
    if (samples.empty()) fail(Errc::invalid_argument, "no samples");
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (Vec2 z : samples) {
        if (std::abs(f.eval(z)) >= 1e-9)
            fail(Errc::invalid_argument, "sample does not lie on the curve");
        double q = ipow(g.eval(z), 3) * affine_hessian(f, z) /
                   signed_pow(norm2(z), 3.0 * m - 3.0);
        sum += q;
        lo = first ? q : std::min(lo, q);
        hi = first ? q : std::max(hi, q);
        first = false;
    }
    double mean = sum / double(samples.size());
    return {mean, (hi - lo) / std::max(std::abs(mean), 1e-300)};
}

}  // namespace blab
