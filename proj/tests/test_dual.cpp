#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/dual.hpp"

using namespace blab;

namespace {

const double kPi = 3.14159265358979323846;

// G of the angular billiard for the ellipse x^2/a^2 + y^2/b^2 = 1 with the
// pole at (x0, y0): (b^2 x^2 + a^2 y^2 - a^2 b^2) / ((x-x0)^2 + (y-y0)^2).
double ellipse_angular_integral(double a, double b, Vec2 pole, Vec2 P) {
    double num = b * b * P.x * P.x + a * a * P.y * P.y - a * a * b * b;
    return num / norm2(P - pole);
}

}  // namespace

TEST_CASE("point and line duals follow the 1/distance rule") {
    DualityFrame frame{{0.0, 0.0}};
    LineRecord l = line_through(frame, {2.0, 0.0}, {2.0, 5.0});  // the line x = 2
    CHECK(l.u == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(l.v) < 1e-14);
    Vec2 dual = dualize(frame, l);
    CHECK(norm(dual - Vec2{0.5, 0.0}) < 1e-14);
    LineRecord back = dualize(frame, dual);
    CHECK(back.u == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("dualizing twice is the identity") {
    DualityFrame frame{{0.3, -0.2}};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        Vec2 P{u(rng), u(rng)};
        if (norm(P - frame.pole) < 1e-3) continue;
        Vec2 Q = dualize(frame, dualize(frame, P));
        CHECK(norm(Q - P) < 1e-12);
    }
}

TEST_CASE("incidence survives duality") {
    DualityFrame frame{{0.1, 0.4}};
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        LineRecord l{u(rng), u(rng)};
        if (std::hypot(l.u, l.v) < 1e-2) continue;
        // a point on l, pole-centered z with <(u,v), z> = 1
        Vec2 n{l.u, l.v};
        Vec2 z = n / norm2(n) + J(n) * u(rng);
        Vec2 P = frame.pole + z;
        CHECK(std::abs(line_residual(frame, l, P)) < 1e-12);

        Vec2 dual_of_l = dualize(frame, l);
        LineRecord dual_of_P = dualize(frame, P);
        CHECK(std::abs(line_residual(frame, dual_of_P, dual_of_l)) < 1e-10);
    }
}

TEST_CASE("degenerate duals are rejected") {
    DualityFrame frame{{0.5, 0.5}};
    CHECK_THROWS_AS((void)dualize(frame, frame.pole), Error);
    try {
        (void)dualize(frame, frame.pole);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::at_pole);
    }
    try {
        (void)line_through(frame, {1.0, 1.0}, {0.0, 0.0});  // collinear with pole
    } catch (const Error& e) {
        CHECK(e.code() == Errc::through_pole);
    }
}

TEST_CASE("tangent lines of an ellipse dualize onto the reciprocal ellipse") {
    double a = 1.7, b = 0.9;
    ConvexCurve e = ConvexCurve::ellipse(a, b);
    DualityFrame frame{{0.0, 0.0}};
    for (int i = 0; i < 100; ++i) {
        double s = e.length() * i / 100.0;
        FramePacket f = e.frame(s);
        LineRecord l = line_along(frame, f.point, f.tangent);
        CHECK(std::abs(a * a * l.u * l.u + b * b * l.v * l.v - 1.0) < 1e-10);
    }
}

TEST_CASE("the dual curve view traces the reciprocal ellipse analytically") {
    ConvexCurve e = ConvexCurve::ellipse(2.0, 1.0);
    DualityFrame frame{{0.0, 0.0}};
    CurveView dual = dual_curve(e, frame);
    CHECK(dual.period == doctest::Approx(e.length()));
    for (int i = 0; i < 64; ++i) {
        double s = dual.period * i / 64.0;
        Vec2 p = dual.point(s) - frame.pole;
        CHECK(std::abs(4.0 * p.x * p.x + p.y * p.y - 1.0) < 1e-10);
        double h = 1e-6;
        Vec2 fd = (dual.point(s + h) - dual.point(s - h)) / (2.0 * h);
        Vec2 an = dual.velocity(s);
        CHECK(norm(fd - an) < 1e-6 * (1.0 + norm(an)));
    }
}

TEST_CASE("angular reflection is an involution about any tangency ray") {
    DualityFrame frame{{0.2, -0.1}};
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int done = 0;
    for (int i = 0; done < 100 && i < 1000; ++i) {
        Vec2 A{u(rng), u(rng)}, T{u(rng), u(rng)};
        if (norm(A - frame.pole) < 0.1 || norm(T - frame.pole) < 0.1) continue;
        if (norm(A - T) < 0.1) continue;
        Vec2 B;
        try {
            B = angular_reflect(frame, A, T);
        } catch (const Error&) {
            continue;  // exclusion configurations are legitimate skips
        }
        Vec2 back = angular_reflect(frame, B, T);
        CHECK(norm(back - A) < 1e-10 * (1.0 + norm(A)));
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("an exactly parallel reflection lands on the exclusion set") {
    DualityFrame frame{{0.0, 0.0}};
    // reflecting (2,0) about the ray through (1, sqrt 3) sends the ray
    // parallel to the line joining them
    try {
        (void)angular_reflect(frame, {2.0, 0.0}, {1.0, std::sqrt(3.0)});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::on_exclusion_set);
    }
}

TEST_CASE("angular step in a centered circle preserves the distance to the pole") {
    ConvexCurve c = ConvexCurve::circle(1.3);
    DualityFrame frame{{0.0, 0.0}};
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ur(1.4, 5.0);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
        double r = ur(rng), t = ut(rng);
        Vec2 A{r * std::cos(t), r * std::sin(t)};
        Vec2 B = angular_step(c, frame, A);
        CHECK(std::abs(norm(B) - r) < 1e-10);
    }
}

TEST_CASE("interior points are rejected by the angular step") {
    ConvexCurve e = ConvexCurve::ellipse(0.5, 1.0);
    DualityFrame frame{{0.0, 0.0}};
    try {
        (void)angular_step(e, frame, {0.1, 0.0});
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.code() == Errc::inside_curve);
    }
}

TEST_CASE("the angular billiard in an ellipse conserves its rational integral") {
    // the ellipse x^2/a^2 + y^2/b^2 = 1 with semi-axes a = 1/2, b = 1
    double a = 0.5, b = 1.0;
    ConvexCurve e = ConvexCurve::ellipse(a, b);

    SUBCASE("one step from (3, 0), pole at the center") {
        DualityFrame frame{{0.0, 0.0}};
        Vec2 A{3.0, 0.0};
        Vec2 B = angular_step(e, frame, A);
        double ga = ellipse_angular_integral(a, b, frame.pole, A);
        double gb = ellipse_angular_integral(a, b, frame.pole, B);
        CHECK(std::abs(ga - gb) < 1e-10);
    }

    SUBCASE("a thousand iterates with a displaced pole") {
        DualityFrame frame{{0.1, 0.05}};
        Vec2 A{3.0, 0.0};
        double g0 = ellipse_angular_integral(a, b, frame.pole, A);
        for (int i = 0; i < 1000; ++i) {
            A = angular_step(e, frame, A);
            CHECK(std::abs(ellipse_angular_integral(a, b, frame.pole, A) - g0) < 1e-8);
        }
    }
}

TEST_CASE("the chord billiard and the angular billiard are dual") {
    std::mt19937 rng(41);

    SUBCASE("ellipse, pole at the center") {
        ConvexCurve e = ConvexCurve::ellipse(2.0, 1.0);
        DualityFrame frame{{0.0, 0.0}};
        std::uniform_real_distribution<double> us(0.0, e.length());
        std::uniform_real_distribution<double> ue(0.3, kPi - 0.3);
        for (int i = 0; i < 100; ++i) {
            double s = us(rng);
            BoundaryCollision hit = reflect_step(e, s, direction_from_angle(e, s, ue(rng)));
            CHECK(duality_equivalence_residual(e, frame, hit) < 1e-8);
        }
    }

    SUBCASE("circle") {
        ConvexCurve c = ConvexCurve::circle(1.0);
        DualityFrame frame{{0.0, 0.0}};
        std::uniform_real_distribution<double> us(0.0, c.length());
        std::uniform_real_distribution<double> ue(0.3, kPi - 0.3);
        for (int i = 0; i < 100; ++i) {
            double s = us(rng);
            BoundaryCollision hit = reflect_step(c, s, direction_from_angle(c, s, ue(rng)));
            CHECK(duality_equivalence_residual(c, frame, hit) < 1e-10);
        }
    }

    SUBCASE("pole pushed toward the boundary still matches to 1e-6") {
        ConvexCurve e = ConvexCurve::ellipse(2.0, 1.0);
        DualityFrame frame{{1.9, 0.2}};
        std::uniform_real_distribution<double> us(0.0, e.length());
        std::uniform_real_distribution<double> ue(0.4, kPi - 0.4);
        for (int i = 0; i < 100; ++i) {
            double s = us(rng);
            BoundaryCollision hit = reflect_step(e, s, direction_from_angle(e, s, ue(rng)));
            CHECK(duality_equivalence_residual(e, frame, hit) < 1e-6);
        }
    }

    SUBCASE("the full map selects the collision tangency when the pole is left") {
        ConvexCurve e = ConvexCurve::ellipse(2.0, 1.0);
        DualityFrame frame{{0.0, 0.0}};
        CurveView dual = dual_curve(e, frame);
        std::uniform_real_distribution<double> us(0.0, e.length());
        std::uniform_real_distribution<double> ue(0.3, kPi - 0.3);
        int done = 0;
        for (int i = 0; done < 50 && i < 1000; ++i) {
            double s = us(rng);
            BoundaryCollision hit = reflect_step(e, s, direction_from_angle(e, s, ue(rng)));
            if (cross(hit.incoming, frame.pole - hit.point) < 0.1) continue;
            Vec2 A = dualize(frame, line_along(frame, hit.point, hit.incoming));
            Vec2 B = dualize(frame, line_along(frame, hit.point, hit.outgoing));
            CHECK(norm(angular_step(dual, frame, A) - B) < 1e-8);
            ++done;
        }
        CHECK(done == 50);
    }
}

TEST_CASE("transport carries chord integrals to angular models") {
    SUBCASE("the ellipse integral becomes the conic") {
        // b^2 v1^2 + a^2 v2^2 - sigma^2 with a = 2, b = 1
        SigmaPolynomial phi = SigmaPolynomial::parse("1*v1^2 + 4*v2^2 - 1*sigma^2");
        AngularIntegralModel model = transport_integral(phi, 1);
        CHECK(model.F.coeff(2, 0) == doctest::Approx(4.0));
        CHECK(model.F.coeff(0, 2) == doctest::Approx(1.0));
        CHECK(model.F.coeff(0, 0) == doctest::Approx(-1.0));
        CHECK(model.p == 1);
        CHECK_FALSE(model.trivial_constant);
    }

    SUBCASE("sigma squared transports to the constant 1") {
        AngularIntegralModel model = transport_integral(SigmaPolynomial::parse("sigma^2"), 1);
        CHECK(model.F.coeff(0, 0) == doctest::Approx(1.0));
        CHECK(model.F.degree() == 0);
    }

    SUBCASE("kinetic energy is flagged as a trivial constant") {
        AngularIntegralModel model =
            transport_integral(SigmaPolynomial::parse("v1^2 + v2^2"), 1);
        CHECK(model.F.coeff(2, 0) == doctest::Approx(1.0));
        CHECK(model.F.coeff(0, 2) == doctest::Approx(1.0));
        CHECK(model.trivial_constant);
        CHECK(model.eval({0.7, -0.3}) == doctest::Approx(1.0));
    }

    SUBCASE("inhomogeneous and mismatched degrees are rejected") {
        try {
            (void)transport_integral(SigmaPolynomial::parse("sigma^2 + v1"), 1);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::not_homogeneous);
        }
        try {
            (void)transport_integral(SigmaPolynomial::parse("sigma^2"), 2);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::not_homogeneous);
        }
    }
}

TEST_CASE("conics satisfy the reparametrization identity") {
    // a^2 x^2 + b^2 y^2 - 1 with a = 2, b = 1
    BivariatePolynomial conic = BivariatePolynomial::parse("4*x^2 + 1*y^2 - 1*x^0*y^0");
    Vec2 on{0.5, 0.0};
    CHECK(identity1_residual(conic, 1.0, on, 1e-2) < 1e-9);
    CHECK(identity1_residual(conic, 1.0, on, 1e-3) < 1e-9);
    CHECK(identity1_residual(conic, 1.0, on, 0.0) == 0.0);

    // generic points of the conic with either sign of eps
    for (double t : {0.3, 1.1, 2.8, 4.0}) {
        Vec2 z{0.5 * std::cos(t), std::sin(t)};
        CHECK(identity1_residual(conic, 1.0, z, 1e-2) < 1e-9);
        CHECK(identity1_residual(conic, 1.0, z, -1e-3) < 1e-9);
    }
}

TEST_CASE("a quartic oval violates the reparametrization identity") {
    BivariatePolynomial quartic = BivariatePolynomial::parse("x^4 + y^4 - 1*x^0*y^0");
    // a generic point of x^4 + y^4 = 1 (polar angle 35 degrees); the axes and
    // the diagonal are symmetry loci where both sides coincide for any curve
    Vec2 z{0.94756908909083559, 0.66349501915591103};
    CHECK(identity1_residual(quartic, 2.0, z, 1e-2) > 1e-4);
    CHECK_THROWS_AS((void)identity1_residual(quartic, 2.0, {1.1, 0.0}, 1e-2), Error);
}

TEST_CASE("the mu denominator singularity is reported") {
    BivariatePolynomial conic = BivariatePolynomial::parse("4*x^2 + 1*y^2 - 1*x^0*y^0");
    Vec2 z{0.3, 0.8};  // on the conic, with x g_y - y g_x = -1.44
    double eps = norm2(z) / 2.88;
    try {
        (void)identity1_residual(conic, 1.0, z, eps);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::mu_singular);
    }
}

TEST_CASE("the Hessian identity holds on conics and fails on a quartic") {
    SUBCASE("circle of radius R gives 8 R^2") {
        double R = 1.5;
        BivariatePolynomial f = BivariatePolynomial::parse("x^2 + y^2 - 2.25*x^0*y^0");
        std::vector<Vec2> samples;
        for (int i = 0; i < 64; ++i) {
            double t = 2.0 * kPi * i / 64.0;
            samples.push_back({R * std::cos(t), R * std::sin(t)});
        }
        ConstancyStats st = identity2_residual(f, BivariatePolynomial::constant(1.0), 1.0, samples);
        CHECK(st.mean == doctest::Approx(8.0 * R * R).epsilon(1e-12));
        CHECK(st.spread < 1e-10);
    }

    SUBCASE("ellipse conic gives 8 a^2 b^2") {
        double a = 1.7, b = 0.6;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g*x^2 + %.17g*y^2 - 1*x^0*y^0", a * a, b * b);
        BivariatePolynomial f = BivariatePolynomial::parse(buf);
        std::vector<Vec2> samples;
        for (int i = 0; i < 64; ++i) {
            double t = 2.0 * kPi * i / 64.0;
            samples.push_back({std::cos(t) / a, std::sin(t) / b});
        }
        ConstancyStats st = identity2_residual(f, BivariatePolynomial::constant(1.0), 1.0, samples);
        CHECK(st.mean == doctest::Approx(8.0 * a * a * b * b).epsilon(1e-12));
        CHECK(st.spread < 1e-10);
    }

    SUBCASE("quartic oval has no such constant") {
        BivariatePolynomial f = BivariatePolynomial::parse("x^4 + y^4 - 1*x^0*y^0");
        std::vector<Vec2> samples;
        for (int i = 0; i < 64; ++i) {
            double t = 2.0 * kPi * i / 64.0;
            double scale = std::pow(std::pow(std::cos(t), 4.0) + std::pow(std::sin(t), 4.0), -0.25);
            samples.push_back({scale * std::cos(t), scale * std::sin(t)});
        }
        ConstancyStats st = identity2_residual(f, BivariatePolynomial::constant(1.0), 2.0, samples);
        CHECK(st.spread > 1e-2);
    }

    SUBCASE("off-curve samples are rejected") {
        BivariatePolynomial f = BivariatePolynomial::parse("x^2 + y^2 - 1*x^0*y^0");
        CHECK_THROWS_AS((void)identity2_residual(f, BivariatePolynomial::constant(1.0), 1.0,
                                                 {{1.5, 0.0}}),
                        Error);
        CHECK_THROWS_AS(
            (void)identity2_residual(f, BivariatePolynomial::constant(1.0), 1.0, {}), Error);
    }
}
