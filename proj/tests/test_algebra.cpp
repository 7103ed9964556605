#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/algebra.hpp"
#include "core/error.hpp"

using namespace blab;
using BP = BivariatePolynomial;

namespace {

BP monomials(std::initializer_list<std::tuple<int, int, double>> ms) {
    Multinomial m(2);
    for (const auto& [i, j, c] : ms) m.add({i, j}, c);
    return BP(m);
}

}  // namespace

TEST_CASE("expression parsing and canonical printing") {
    BP f = BP::parse("x^2 + y^2 - 1");
    CHECK(f.to_string() == "1*x^2*y^0 + 1*x^0*y^2 + -1*x^0*y^0");
    CHECK(BP::parse(f.to_string()).to_string() == f.to_string());

    BP g = BP::parse("(x^2+y^2-5)^2-16");
    CHECK(g.eval(2.0, 0.0) == doctest::Approx(-15.0).epsilon(1e-14));
    CHECK(g.degree() == 4);

    BP h = BP::parse("0.5*x*y - 2e-3*y^3");
    CHECK(h.eval(2.0, 1.0) == doctest::Approx(1.0 - 0.002).epsilon(1e-14));
    CHECK(BP::parse(h.to_string()).to_string() == h.to_string());

    CHECK_THROWS_AS((void)BP::parse("2x"), Error);        // implicit product
    CHECK_THROWS_AS((void)BP::parse("x^-1"), Error);      // negative exponent
    CHECK_THROWS_AS((void)BP::parse("z + 1"), Error);     // unknown variable
    CHECK_THROWS_AS((void)BP::parse("x*(y"), Error);      // unbalanced paren
    CHECK_THROWS_AS((void)BP::parse("x/y"), Error);       // unsupported operator
    CHECK_THROWS_AS((void)BP::parse("x^1.5"), Error);     // fractional exponent
}

TEST_CASE("phase and sigma polynomials") {
    PhasePolynomial F = PhasePolynomial::parse("y*v1 - x*v2");
    CHECK(F.eval({2.0, 3.0}, {0.5, 0.25}) == doctest::Approx(1.0).epsilon(1e-14));

    SigmaPolynomial S = SigmaPolynomial::parse("sigma^2 + v1^2 + v2^2");
    int deg = 0;
    CHECK(S.is_homogeneous(&deg));
    CHECK(deg == 2);
    CHECK(S.eval(2.0, {1.0, 1.0}) == doctest::Approx(6.0).epsilon(1e-14));

    SigmaPolynomial ns = SigmaPolynomial::parse("sigma*v1 + v2");
    CHECK_FALSE(ns.is_homogeneous(nullptr));
}

TEST_CASE("shift and rotation agree with direct evaluation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> co(-2.0, 2.0);
    BP f = BP::parse("3*x^4 - 2*x*y^2 + 0.25*y^3 - x + 7");
    for (int k = 0; k < 20; ++k) {
        Vec2 o{co(rng), co(rng)};
        BP g = f.shifted(o);
        Vec2 p{co(rng), co(rng)};
        CHECK(g.eval(p) == doctest::Approx(f.eval(o + p)).epsilon(1e-12));

        double t = co(rng);
        BP r = f.rotated(t);
        Vec2 rp{p.x * std::cos(t) - p.y * std::sin(t), p.x * std::sin(t) + p.y * std::cos(t)};
        CHECK(r.eval(p) == doctest::Approx(f.eval(rp)).epsilon(1e-11));
    }
}

TEST_CASE("jets") {
    BP f = BP::parse("x^2 + y^2 - 1");
    Jet2 j = f.jet({1.0, 0.0});
    CHECK(j.value == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(j.fx == doctest::Approx(2.0));
    CHECK(j.fy == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(j.fxx == doctest::Approx(2.0));
    CHECK(j.fxy == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    CHECK(j.fyy == doctest::Approx(2.0));

    Jet2 lin = BP::parse("x").jet({3.7, -1.2});
    CHECK(lin.fx == doctest::Approx(1.0));
    CHECK(lin.fy == 0.0);
    CHECK(lin.fxx == 0.0);
    CHECK(lin.fxy == 0.0);
    CHECK(lin.fyy == 0.0);

    Jet2 c = BP::parse("x^3*y").jet({2.0, 1.0});
    CHECK(c.value == doctest::Approx(8.0));
    CHECK(c.fx == doctest::Approx(12.0));
    CHECK(c.fy == doctest::Approx(8.0));
    CHECK(c.fxx == doctest::Approx(12.0));
    CHECK(c.fxy == doctest::Approx(12.0));
    CHECK(c.fyy == 0.0);

    // compensated jet agrees with the plain one at benign points
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> co(-2.0, 2.0);
    BP g = BP::parse("x^5 - 3*x^2*y^3 + y - 4");
    for (int k = 0; k < 20; ++k) {
        Vec2 p{co(rng), co(rng)};
        Jet2 a = g.jet(p), b = g.jet_dd(p);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-13));
        CHECK(a.fx == doctest::Approx(b.fx).epsilon(1e-13));
        CHECK(a.fy == doctest::Approx(b.fy).epsilon(1e-13));
    }
}

TEST_CASE("affine hessian oracles") {
    BP circle = BP::parse("x^2 + y^2 - 4");  // R = 2
    for (double t : {0.0, 0.7, 2.2, 4.0})
        CHECK(affine_hessian(circle, {2.0 * std::cos(t), 2.0 * std::sin(t)}) ==
              doctest::Approx(8.0 * 4.0).epsilon(1e-12));

    // f = a^2 x^2 + b^2 y^2 - 1 on its conic: H = 8 a^2 b^2
    double a = 1.7, b = 0.6;
    Multinomial m(2);
    m.add({2, 0}, a * a);
    m.add({0, 2}, b * b);
    m.add({0, 0}, -1.0);
    BP conic(m);
    for (double t : {0.3, 1.4, 3.9})
        CHECK(affine_hessian(conic, {std::cos(t) / a, std::sin(t) / b}) ==
              doctest::Approx(8.0 * a * a * b * b).epsilon(1e-12));

    CHECK(affine_hessian(BP::parse("x"), {5.0, -3.0}) == 0.0);
}

TEST_CASE("implicit curvature oracles") {
    CHECK(implicit_curvature(BP::parse("x^2 + y^2 - 1"), {1.0, 0.0}) ==
          doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(implicit_curvature(BP::parse("x^2 + y^2 - 9"), {3.0, 0.0}) ==
          doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    // product of two circles: gradient points inward on the inner oval
    BP two = BP::parse("(x^2 + y^2 - 1)*(x^2 + y^2 - 9)");
    CHECK(implicit_curvature(two, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS((void)implicit_curvature(BP::parse("x^2 + y^2"), {0.0, 0.0}), Error);
    try {
        (void)implicit_curvature(BP::parse("x^2 + y^2"), {0.0, 0.0});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::singular_point);
    }
}

TEST_CASE("hessian is rotation invariant") {
    std::mt19937_64 rng(20240812);
    std::uniform_real_distribution<double> co(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Multinomial m(2);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j)
                if (co(rng) > 0.0) m.add({i, j}, co(rng));
        if (m.is_zero()) continue;
        BP f{m};
        double t = 3.0 * co(rng);
        BP g = f.rotated(t);
        for (int k = 0; k < 5; ++k) {
            Vec2 p{co(rng), co(rng)};
            Vec2 rp{p.x * std::cos(t) - p.y * std::sin(t),
                    p.x * std::sin(t) + p.y * std::cos(t)};
            double hg = affine_hessian(g, p);
            double hf = affine_hessian(f, rp);
            CHECK(std::abs(hg - hf) <= 1e-8 * std::max({1.0, std::abs(hg), std::abs(hf)}));
        }
    }
}

TEST_CASE("curvature of scaled polynomials") {
    BP f = BP::parse("x^2 + 2*y^2 - 3");
    Vec2 p{1.0, 1.0};
    double k = implicit_curvature(f, p);
    for (double c : {2.0, 0.03, 17.5}) {
        CHECK(implicit_curvature(f.scaled(c), p) == doctest::Approx(k).epsilon(1e-10));
        CHECK(implicit_curvature(f.scaled(-c), p) == doctest::Approx(-k).epsilon(1e-10));
    }
}

TEST_CASE("singular point search") {
    BP cusp = BP::parse("y^2 - x^3");
    auto pts = find_singular_points(cusp, {{-1.0, -1.0}, {1.0, 1.0}});
    REQUIRE(pts.size() == 1);
    CHECK(norm(pts[0]) < 1e-9);

    auto smooth = find_singular_points(BP::parse("x^2 + y^2 - 1"), {{-2.0, -2.0}, {2.0, 2.0}});
    CHECK(smooth.empty());

    auto node = find_singular_points(BP::parse("x*y"), {{-1.0, -1.0}, {1.0, 1.0}});
    REQUIRE(node.size() == 1);
    CHECK(norm(node[0]) < 1e-10);

    CHECK_THROWS_AS(
        (void)find_singular_points(cusp, {{1.0, 1.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("branch index of odd cusps") {
    struct Case {
        const char* text;
        double index;
        double tol;
    } cases[] = {
        {"y^2 - x^3", 1.5, 0.05},
        {"y^2 - x^5", 2.5, 0.1},
        {"y^2 - x^7", 3.5, 0.175},
    };
    for (const auto& c : cases) {
        CAPTURE(c.text);
        BranchAnalysis an = estimate_branch(BP::parse(c.text), {0.0, 0.0});
        CHECK(an.failed_traces == 0);
        REQUIRE(an.branches.size() == 1);
        const BranchEstimate& b = an.branches[0];
        CHECK(std::abs(b.puiseux_index - c.index) < c.tol);
        CHECK(b.puiseux_index > 1.0);
        CHECK(b.samples_used > 20);
        CHECK(std::isnan(b.order_a));
    }
}

TEST_CASE("vanishing orders along the cusp branch") {
    // f = y^2 - x^3 on (t^2, t^3): H(f) = -24 x y^2 + 18 x^4 = -6 t^8 and
    // |grad f|^3 = (9 t^8 + 4 t^6)^(3/2) ~ 8 t^9, so against xi = t^2 the
    // orders are 4 and 4.5.
    BP f = BP::parse("y^2 - x^3");
    BranchAnalysis an = estimate_branch(f, {0.0, 0.0}, &f);
    REQUIRE(an.branches.size() == 1);
    CHECK(an.branches[0].order_a == doctest::Approx(4.0).epsilon(0.02));
    CHECK(an.branches[0].order_b == doctest::Approx(4.5).epsilon(0.02));
}

TEST_CASE("smooth branches through a node") {
    // alpha curve: two smooth branches y = +-x sqrt(1+x), tangent cone y^2 = x^2
    BP f = BP::parse("y^2 - x^2*(1 + x)");
    BranchAnalysis an = estimate_branch(f, {0.0, 0.0});
    CHECK(an.failed_traces == 0);
    REQUIRE(an.branches.size() == 2);
    for (const auto& b : an.branches) {
        CHECK(b.puiseux_index == doctest::Approx(2.0).epsilon(0.03));
        CHECK(b.puiseux_index > 1.0);
    }
}

TEST_CASE("straight-line branches report the quadratic fallback") {
    BranchAnalysis an = estimate_branch(BP::parse("x*y"), {0.0, 0.0});
    REQUIRE(an.branches.size() == 2);
    for (const auto& b : an.branches) {
        CHECK(b.puiseux_index == doctest::Approx(2.0));
        CHECK(b.index_ci == 0.0);
    }
}

TEST_CASE("isolated singular points have no real branches") {
    BranchAnalysis an = estimate_branch(BP::parse("x^2 + y^2"), {0.0, 0.0});
    CHECK(an.branches.empty());
    CHECK(an.failed_traces == 0);
}

TEST_CASE("estimate_branch rejects regular points") {
    CHECK_THROWS_AS((void)estimate_branch(BP::parse("x^2 + y^2 - 1"), {1.0, 0.0}), Error);
    CHECK_THROWS_AS((void)estimate_branch(BP::parse("y^2 - x^3"), {0.3, 0.2}), Error);
}

TEST_CASE("two-oval quartic: no affine singularities, both ovals close") {
    // y^2 = -(x-1)(x-2)(x-3)(x-4) bounds ovals over (1,2) and (3,4)
    BP f = BP::parse("y^2 + (x-1)*(x-2)*(x-3)*(x-4)");
    auto sing = find_singular_points(f, {{0.0, -2.0}, {5.0, 2.0}});
    CHECK(sing.empty());

    for (double x0 : {1.5, 3.5}) {
        double y0 = std::sqrt(0.9375);
        auto oval = trace_closed_curve(f, {x0, y0}, 0.01);
        CHECK(oval.size() > 100);
        double xmin = 1e9, xmax = -1e9;
        for (const auto& p : oval) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            CHECK(std::abs(f.eval(p)) <= 1e-8 * std::max(1.0, f.eval_scale(p)));
        }
        // the oval stays inside its root interval
        double lo = (x0 < 3.0) ? 1.0 : 3.0;
        CHECK(xmin > lo - 0.05);
        CHECK(xmax < lo + 1.0 + 0.05);
    }
}
