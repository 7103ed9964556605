#include "twosided.hpp"

#include <algorithm>
#include <cmath>

#include "algebra.hpp"

namespace blab {

namespace {

const double kPi = 3.14159265358979323846;

Orientation side_orientation(int side) {
    if (side != 1 && side != 2) fail(Errc::invalid_argument, "side must be 1 or 2");
    return side == 1 ? Orientation::ccw : Orientation::cw;
}

bool constant_multinomial(const Multinomial& m) {
    for (const auto& [exps, c] : m.terms())
        for (int e : exps)
            if (e != 0) return false;
    return true;
}

// Sign pattern of g over 512 samples of one offset curve. A zero crossing
// shows up as opposite signs; an identically vanishing stretch as a long run
// of samples inside the dead band.
void require_fixed_sign(const BivariatePolynomial& g, const ConvexCurve& curve, double d) {
    const int N = 512;
    double L = curve.length();
    int positive = 0, negative = 0;
    for (int i = 0; i < N; ++i) {
        double v = g.eval(curve.offset_point(L * i / N, d));
        if (v > 1e-9)
            ++positive;
        else if (v < -1e-9)
            ++negative;
    }
    if (positive && negative)
        fail(Errc::invalid_argument, "cofactor changes sign on an offset curve");
    if (positive + negative < N - 32)
        fail(Errc::invalid_argument, "cofactor vanishes along an offset curve");
}

}  // namespace

FactoredIntegral::FactoredIntegral(const ConvexCurve& curve, double r, BivariatePolynomial f_plus,
                                   BivariatePolynomial f_minus, int k, int l,
                                   BivariatePolynomial g)
    : fp_(std::move(f_plus)), fm_(std::move(f_minus)), g_(std::move(g)), k_(k), l_(l) {
    if (k_ < 1 || l_ < 1) fail(Errc::invalid_argument, "multiplicities must be positive");
    if (fp_.is_zero() || fm_.is_zero() || g_.is_zero())
        fail(Errc::invalid_argument, "factors must not vanish identically");
    split_ = (fp_ - fm_).max_abs_coeff() > 0.0;
    if (split_ && k_ != l_)
        fail(Errc::invalid_argument, "distinct boundary factors require equal multiplicities");
    require_fixed_sign(g_, curve, r);
    require_fixed_sign(g_, curve, -r);
    tilde_ = split_ ? fp_ * fm_ * g_ : fp_ * g_;
}

SidedCenter twosided_step(const ConvexCurve& curve, double r, SidedCenter c) {
    Orientation o = side_orientation(c.side);
    BoundaryCollision hit = larmor_exit(curve, r, c.point, o);
    double sgn = c.side == 1 ? 1.0 : -1.0;
    Vec2 next = hit.point - sgn * r * J(hit.outgoing);
#ifndef NDEBUG
    // The incoming and outgoing centers in the collision frame are
    // z + r R_{-eps} n and z - r R_{eps} n, with the orientation of the
    // rotations tied to the side being left.
    Vec2 n = curve.frame(hit.s).inward_normal;
    Vec2 prev_closed = hit.point + sgn * r * rotate(n, -hit.eps);
    Vec2 next_closed = hit.point - sgn * r * rotate(n, hit.eps);
    if (dist(prev_closed, c.point) > 1e-10 || dist(next_closed, next) > 1e-10)
        fail(Errc::numerical_failure, "collision-frame center formulas disagree with the step");
#endif
    return {next, 3 - c.side};
}

double symplecticity_residual(const ConvexCurve& curve, double r, SidedCenter c, double h) {
    if (!(h > 0.0)) fail(Errc::invalid_argument, "step size must be positive");
    auto image = [&](Vec2 p) { return twosided_step(curve, r, {p, c.side}).point; };
    Vec2 dx = (image({c.point.x + h, c.point.y}) - image({c.point.x - h, c.point.y})) / (2.0 * h);
    Vec2 dy = (image({c.point.x, c.point.y + h}) - image({c.point.x, c.point.y - h})) / (2.0 * h);
    // The side flip reverses orientation, so the point part has determinant
    // -1 exactly when it preserves area.
    return std::abs(std::abs(cross(dx, dy)) - 1.0);
}

PairReport check_integral_pair(const ConvexCurve& curve, double r, const IntegralPair& pair,
                               const std::vector<SidedCenter>& trials) {
    if (pair.F1.is_zero() || pair.F2.is_zero())
        fail(Errc::invalid_argument, "pair functions must not vanish identically");
    PairReport report;
    report.degenerate =
        constant_multinomial(pair.F1.raw()) && constant_multinomial(pair.F2.raw());
    for (const SidedCenter& trial : trials) {
        // Two consecutive steps cover both collision relations: the image of
        // a center is evaluated with the other side's function, and re-tagging
        // the image point with the original side gives the swapped relation.
        SidedCenter a = trial;
        for (int leg = 0; leg < 2; ++leg) {
            SidedCenter b = twosided_step(curve, r, a);
            double va = (a.side == 1 ? pair.F1 : pair.F2).eval(a.point);
            double vb = (b.side == 1 ? pair.F1 : pair.F2).eval(b.point);
            report.condition2 = std::max(report.condition2, std::abs(va - vb));
            a = SidedCenter{b.point, trial.side};
        }
    }
    return report;
}

PairReport check_phase_pair(const ConvexCurve& curve, double r, const PhasePolynomial& phi1,
                            const PhasePolynomial& phi2, const std::vector<SidedCenter>& trials) {
    PairReport report;
    report.degenerate = constant_multinomial(phi1.raw()) && constant_multinomial(phi2.raw());
    const int K = 64;
    for (const SidedCenter& trial : trials) {
        // Condition 1: each function is constant along the unit tangent field
        // of its side's Larmor circle.
        double lo1 = HUGE_VAL, hi1 = -HUGE_VAL, lo2 = HUGE_VAL, hi2 = -HUGE_VAL;
        for (int i = 0; i < K; ++i) {
            double t = 2.0 * kPi * i / K;
            Vec2 radial{std::cos(t), std::sin(t)};
            Vec2 p = trial.point + r * radial;
            Vec2 ccw = J(radial);
            double v1 = phi1.eval(p, ccw);
            double v2 = phi2.eval(p, -ccw);
            lo1 = std::min(lo1, v1), hi1 = std::max(hi1, v1);
            lo2 = std::min(lo2, v2), hi2 = std::max(hi2, v2);
        }
        report.condition1 = std::max({report.condition1, hi1 - lo1, hi2 - lo2});
        // Condition 2: the functions agree across the mirror reflection at
        // the exit collision, in both traversal senses.
        for (Orientation o : {Orientation::ccw, Orientation::cw}) {
            BoundaryCollision hit = larmor_exit(curve, r, trial.point, o);
            double before = o == Orientation::ccw ? phi1.eval(hit.point, hit.incoming)
                                                  : phi2.eval(hit.point, hit.incoming);
            double after = o == Orientation::ccw ? phi2.eval(hit.point, hit.outgoing)
                                                 : phi1.eval(hit.point, hit.outgoing);
            report.condition2 = std::max(report.condition2, std::abs(before - after));
        }
    }
    return report;
}

BivariatePolynomial combine_pair(const ConvexCurve& curve, double r, const IntegralPair& pair) {
    CenterAnnulus annulus(curve, r);
    std::mt19937 rng(0x51dec3a7u);
    std::vector<SidedCenter> trials;
    for (int i = 0; i < 100; ++i)
        trials.push_back({sample_annulus_center(annulus, rng, 1e-3 * r), 1});

    PairReport report = check_integral_pair(curve, r, pair, trials);
    if (report.degenerate) fail(Errc::both_degenerate, "both pair functions are constant");
    double value_scale = 1.0;
    for (const SidedCenter& t : trials)
        value_scale = std::max({value_scale, std::abs(pair.F1.eval(t.point)),
                                std::abs(pair.F2.eval(t.point))});
    if (report.condition2 > 1e-8 * value_scale)
        fail(Errc::invalid_argument, "pair does not satisfy the collision relations");

    auto sampled_spread = [&](const BivariatePolynomial& f) {
        double lo = HUGE_VAL, hi = -HUGE_VAL;
        for (const SidedCenter& t : trials) {
            double v = f.eval(t.point);
            lo = std::min(lo, v), hi = std::max(hi, v);
        }
        return hi - lo;
    };
    BivariatePolynomial sum = pair.F1 + pair.F2;
    if (sampled_spread(sum) > 1e-8) return sum;
    BivariatePolynomial diff = pair.F1 - pair.F2;
    BivariatePolynomial squared = diff * diff;
    if (sampled_spread(squared) > 1e-8) return squared;
    fail(Errc::both_degenerate, "both combinations are constant on the annulus");
}

double orbit_invariance_deviation(const ConvexCurve& curve, double r,
                                  const BivariatePolynomial& F, SidedCenter c0, int n_steps) {
    if (n_steps < 1) fail(Errc::invalid_argument, "need at least one step");
    double f0 = F.eval(c0.point);
    double worst = 0.0;
    SidedCenter c = c0;
    for (int i = 0; i < n_steps; ++i) {
        c = twosided_step(curve, r, c);
        worst = std::max(worst, std::abs(F.eval(c.point) - f0));
    }
    return worst / std::max(1.0, std::abs(f0));
}

BoundaryConstancy boundary_constancy_residual(const BivariatePolynomial& F,
                                              const ConvexCurve& curve, double r) {
    const int N = 512;
    double L = curve.length();
    BoundaryConstancy out;
    double means[2] = {0.0, 0.0};
    double spreads[2] = {0.0, 0.0};
    for (int side = 0; side < 2; ++side) {
        double d = side == 0 ? r : -r;
        double lo = HUGE_VAL, hi = -HUGE_VAL, acc = 0.0;
        for (int i = 0; i < N; ++i) {
            double v = F.eval(curve.offset_point(L * i / N, d));
            lo = std::min(lo, v), hi = std::max(hi, v);
            acc += v;
        }
        means[side] = acc / N;
        spreads[side] = hi - lo;
    }
    out.c = 0.5 * (means[0] + means[1]);
    out.spread_plus = spreads[0];
    out.spread_minus = spreads[1];
    out.gap = std::abs(means[0] - means[1]);
    return out;
}

BivariatePolynomial normalized_on_boundaries(const BivariatePolynomial& F,
                                             const ConvexCurve& curve, double r) {
    return F - BivariatePolynomial::constant(boundary_constancy_residual(F, curve, r).c);
}

double remarkable_residual(const BivariatePolynomial& F, const ConvexCurve& curve, double r,
                           double s, double epsilon) {
    Vec2 n = curve.frame(s).inward_normal;
    Vec2 left = curve.offset_point(s, r) - r * (n - rotate(n, -epsilon));
    Vec2 right = curve.offset_point(s, -r) + r * (n - rotate(n, epsilon));
    return std::abs(F.eval(left) - F.eval(right));
}

double gradient_ratio_residual(const FactoredIntegral& integral, const ConvexCurve& curve,
                               double r, double s) {
    double np = norm(integral.reduced().gradient(curve.offset_point(s, r)));
    double nm = norm(integral.reduced().gradient(curve.offset_point(s, -r)));
    if (np < 1e-9 || nm < 1e-9)
        fail(Errc::singular_gradient, "reduced integral has a vanishing gradient on an offset");
    double rho = curve.frame(s).radius;
    return std::abs(np / nm - (r - rho) / (r + rho));
}

OdePacket ode_and_factor(const ConvexCurve& curve, double r, double s,
                         const FactoredIntegral* integral) {
    FramePacket frame = curve.frame(s);
    double rho = frame.radius;
    if (r <= rho) fail(Errc::invalid_argument, "the weak-field regime requires r > rho(s)");
    auto coeff_a = [&](double t) {
        double p = curve.frame(t).radius;
        return 2.0 * p / (r * r - p * p);
    };
    OdePacket out;
    out.A = coeff_a(s);
    double h = 1e-5 * curve.length();
    double a_rate = (coeff_a(s + h) - coeff_a(s - h)) / (2.0 * h);
    out.B = a_rate + 6.0 * rho * frame.radius_rate / ((r + rho) * (r + rho) * (r - rho));
    out.mu = 2.0 * rho * (r + rho) * (r + rho) / (r - rho);
    if (integral) {
        double g = norm(integral->reduced().gradient(curve.offset_point(s, r)));
        out.u = g * g * g;
    }
    return out;
}

ConstancyEstimate identity22_constancy(const FactoredIntegral& integral,
                                       const ConvexCurve& curve, double r, int n_samples) {
    if (n_samples < 2) fail(Errc::invalid_argument, "need at least two samples");
    double L = curve.length();
    ConstancyEstimate out;
    double lo = HUGE_VAL, hi = -HUGE_VAL, acc = 0.0;
    int used = 0;
    for (int i = 0; i < n_samples; ++i) {
        Jet2 jet = integral.reduced().jet_dd(curve.offset_point(L * i / n_samples, r));
        double hess = affine_hessian(jet);
        if (std::abs(hess) < 1e-9) {
            ++out.skipped;
            continue;
        }
        double gn = norm(jet.gradient());
        double cubed = gn * gn * gn;
        double t1 = 2.0 * r * hess - cubed;
        double t2 = r * hess - cubed;
        double q = 2.0 * t1 * t1 * t2 / (hess * hess);
        lo = std::min(lo, q), hi = std::max(hi, q);
        acc += q;
        ++used;
    }
    if (used == 0) fail(Errc::numerical_failure, "every sample sits at an inflection of the integral");
    out.C = acc / used;
    out.spread = (hi - lo) / std::max(std::abs(out.C), 1e-30);
    return out;
}

IntegrabilityVerdict subquadratic_verdict(const ConvexCurve& curve, double r) {
    BivariatePolynomial E = offset_polynomial(curve, r);
    double xm = 0.0, ym = 0.0;
    for (int i = 0; i < 256; ++i) {
        Vec2 p = curve.point(curve.length() * i / 256);
        xm = std::max(xm, std::abs(p.x));
        ym = std::max(ym, std::abs(p.y));
    }
    Box region{{-(xm + r + 0.5), -(ym + r + 0.5)}, {xm + r + 0.5, ym + r + 0.5}};

    IntegrabilityVerdict out;
    bool subquadratic = false;
    for (Vec2 p : find_singular_points(E, region)) {
        BranchAnalysis analysis = estimate_branch(E, p);
        for (const BranchEstimate& branch : analysis.branches) {
            out.evidence.push_back({p, branch.puiseux_index, branch.index_ci});
            if (branch.puiseux_index < 1.9) subquadratic = true;
        }
    }
    out.verdict =
        subquadratic ? "not algebraically integrable (sub-quadratic branch found)"
                     : "no obstruction found";
    return out;
}

}  // namespace blab
