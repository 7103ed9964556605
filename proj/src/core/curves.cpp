#include "curves.hpp"

#include <algorithm>
#include <cmath>

#include "numfmt.hpp"
#include "rootfind.hpp"

namespace blab {

namespace {

constexpr int kTableIntervals = 4096;
constexpr int kScanSamples = 8192;
constexpr double kTwoPi = 6.283185307179586476925286766559;
// |rho'(s)| at or below this marks a non-regular value of the radius function.
constexpr double kDegenerateRate = 1e-6;

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGx[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                           -0.9061798459386640, 0.9061798459386640};
constexpr double kGw[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                           0.2369268850561891, 0.2369268850561891};

double wrap(double x, double period) {
    x = std::fmod(x, period);
    if (x < 0.0) x += period;
    return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

}  // namespace

FieldConfig FieldConfig::from_beta(double beta) {
    if (!(beta > 0.0)) fail(Errc::invalid_argument, "field strength beta must be positive");
    return {beta, 1.0 / beta, true};
}

FieldConfig FieldConfig::from_radius(double r) {
    if (!(r > 0.0)) fail(Errc::invalid_argument, "Larmor radius must be positive");
    return {1.0 / r, r, false};
}

// === construction ===

ConvexCurve ConvexCurve::circle(double radius) {
    if (!(radius > 0.0)) fail(Errc::invalid_argument, "circle radius must be positive");
    ConvexCurve c;
    c.kind_ = Kind::Circle;
    c.a_ = c.b_ = radius;
    c.build_table();
    c.scan_curvature();
    return c;
}

ConvexCurve ConvexCurve::ellipse(double a, double b) {
    if (!(a > 0.0 && b > 0.0))
        fail(Errc::invalid_argument, "ellipse semi-axes must be positive");
    ConvexCurve c;
    c.kind_ = Kind::Ellipse;
    c.a_ = a;
    c.b_ = b;
    c.build_table();
    c.scan_curvature();
    return c;
}

ConvexCurve ConvexCurve::radial_trig(double c0,
                                     const std::vector<std::pair<double, double>>& harmonics,
                                     Vec2 center) {
    ConvexCurve c;
    c.kind_ = Kind::Trig;
    c.c0_ = c0;
    c.harm_ = harmonics;
    c.center_ = center;
    for (int i = 0; i <= kTableIntervals; ++i) {
        double phi = kTwoPi * i / kTableIntervals;
        double r, dr, ddr;
        c.trig_eval(phi, r, dr, ddr);
        if (!(r > 0.0))
            fail(Errc::invalid_argument, "radial profile must stay positive on [0, 2pi)");
        if (!(r * r + 2.0 * dr * dr - r * ddr > 0.0))
            fail(Errc::invalid_argument, "radial profile is not strictly convex");
    }
    c.build_table();
    c.scan_curvature();
    return c;
}

ConvexCurve ConvexCurve::parse(const std::string& spec) {
    size_t colon = spec.find(':');
    std::string head = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    size_t hb = head.find_first_not_of(" \t");
    size_t he = head.find_last_not_of(" \t");
    head = hb == std::string::npos ? "" : head.substr(hb, he - hb + 1);
    if (colon == std::string::npos)
        fail(Errc::invalid_argument, "curve spec '" + spec + "' is missing ':'");
    std::string tail = spec.substr(colon + 1);

    if (head == "circle") return circle(parse_double(tail));
    if (head == "ellipse") {
        auto parts = split(tail, ',');
        if (parts.size() != 2)
            fail(Errc::invalid_argument, "ellipse spec needs two semi-axes 'ellipse:a,b'");
        double a = parse_double(parts[0]), b = parse_double(parts[1]);
        if (!(a >= b))
            fail(Errc::invalid_argument, "ellipse spec requires a >= b");
        return ellipse(a, b);
    }
    if (head == "trig") {
        auto groups = split(tail, ';');
        if (groups.empty()) fail(Errc::invalid_argument, "trig spec needs at least 'trig:c0'");
        double c0 = parse_double(groups[0]);
        std::vector<std::pair<double, double>> harm;
        for (size_t i = 1; i < groups.size(); ++i) {
            auto ab = split(groups[i], ',');
            if (ab.size() != 2)
                fail(Errc::invalid_argument, "trig harmonic must be 'ak,bk', got '" + groups[i] + "'");
            harm.emplace_back(parse_double(ab[0]), parse_double(ab[1]));
        }
        return radial_trig(c0, harm);
    }
    fail(Errc::invalid_argument, "unknown curve kind '" + head + "'");
}

std::string ConvexCurve::spec_string() const {
    switch (kind_) {
        case Kind::Circle:
            return "circle:" + format_double(a_);
        case Kind::Ellipse:
            return "ellipse:" + format_double(a_) + "," + format_double(b_);
        case Kind::Trig: {
            std::string out = "trig:" + format_double(c0_);
            for (auto& [ak, bk] : harm_)
                out += ";" + format_double(ak) + "," + format_double(bk);
            return out;
        }
    }
    return {};
}

// === native-parameter evaluations ===

void ConvexCurve::trig_eval(double phi, double& r, double& dr, double& ddr) const {
    r = c0_;
    dr = 0.0;
    ddr = 0.0;
    for (size_t k = 1; k <= harm_.size(); ++k) {
        auto [ak, bk] = harm_[k - 1];
        double c = std::cos(k * phi), s = std::sin(k * phi);
        r += ak * c + bk * s;
        dr += k * (bk * c - ak * s);
        ddr -= k * k * (ak * c + bk * s);
    }
}

Vec2 ConvexCurve::point_phi(double phi) const {
    switch (kind_) {
        case Kind::Circle:
        case Kind::Ellipse:
            return {a_ * std::cos(phi), b_ * std::sin(phi)};
        case Kind::Trig: {
            double r, dr, ddr;
            trig_eval(phi, r, dr, ddr);
            return center_ + Vec2{r * std::cos(phi), r * std::sin(phi)};
        }
    }
    return {};
}

Vec2 ConvexCurve::d1_phi(double phi) const {
    switch (kind_) {
        case Kind::Circle:
        case Kind::Ellipse:
            return {-a_ * std::sin(phi), b_ * std::cos(phi)};
        case Kind::Trig: {
            double r, dr, ddr;
            trig_eval(phi, r, dr, ddr);
            double c = std::cos(phi), s = std::sin(phi);
            return {dr * c - r * s, dr * s + r * c};
        }
    }
    return {};
}

double ConvexCurve::speed(double phi) const {
    switch (kind_) {
        case Kind::Circle:
            return a_;
        case Kind::Ellipse: {
            double s = std::sin(phi), c = std::cos(phi);
            return std::sqrt(a_ * a_ * s * s + b_ * b_ * c * c);
        }
        case Kind::Trig: {
            double r, dr, ddr;
            trig_eval(phi, r, dr, ddr);
            return std::sqrt(r * r + dr * dr);
        }
    }
    return 0.0;
}

double ConvexCurve::curvature_phi(double phi) const {
    switch (kind_) {
        case Kind::Circle:
            return 1.0 / a_;
        case Kind::Ellipse: {
            double w = speed(phi);
            return a_ * b_ / (w * w * w);
        }
        case Kind::Trig: {
            double r, dr, ddr;
            trig_eval(phi, r, dr, ddr);
            double w = std::sqrt(r * r + dr * dr);
            return (r * r + 2.0 * dr * dr - r * ddr) / (w * w * w);
        }
    }
    return 0.0;
}

double ConvexCurve::radial_gauge(double theta) const {
    switch (kind_) {
        case Kind::Circle:
            return a_;
        case Kind::Ellipse: {
            double s = std::sin(theta), c = std::cos(theta);
            return a_ * b_ / std::sqrt(b_ * b_ * c * c + a_ * a_ * s * s);
        }
        case Kind::Trig: {
            double r, dr, ddr;
            trig_eval(theta, r, dr, ddr);
            return r;
        }
    }
    return 0.0;
}

// === arc-length table ===

double ConvexCurve::segment_length(double phi0, double phi1) const {
    double mid = 0.5 * (phi0 + phi1), half = 0.5 * (phi1 - phi0);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += kGw[i] * speed(mid + half * kGx[i]);
    return acc * half;
}

void ConvexCurve::build_table() {
    const int n = kTableIntervals;
    phi_nodes_.resize(n + 1);
    s_nodes_.resize(n + 1);
    w_nodes_.resize(n + 1);
    s_nodes_[0] = 0.0;
    for (int i = 0; i <= n; ++i) {
        phi_nodes_[i] = kTwoPi * i / n;
        w_nodes_[i] = speed(phi_nodes_[i]);
        if (i > 0)
            s_nodes_[i] = s_nodes_[i - 1] + segment_length(phi_nodes_[i - 1], phi_nodes_[i]);
    }
    length_ = s_nodes_[n];
}

double ConvexCurve::phi_of_s(double s) const {
    s = wrap(s, length_);
    size_t i = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s) - s_nodes_.begin();
    i = (i == 0) ? 0 : i - 1;
    if (i >= size_t(kTableIntervals)) i = kTableIntervals - 1;
    double s0 = s_nodes_[i], s1 = s_nodes_[i + 1];
    double h = s1 - s0, t = (s - s0) / h;
    double p0 = phi_nodes_[i], p1 = phi_nodes_[i + 1];
    double m0 = h / w_nodes_[i], m1 = h / w_nodes_[i + 1];
    double t2 = t * t, t3 = t2 * t;
    double phi = (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 +
                 (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
    // Interpolation seeds a Newton solve of s(phi) = s; two steps reach roundoff.
    for (int it = 0; it < 2; ++it) {
        double res = s0 + segment_length(p0, phi) - s;
        phi -= res / speed(phi);
    }
    return phi;
}

double ConvexCurve::s_of_phi(double phi) const {
    phi = wrap(phi, kTwoPi);
    size_t i = size_t(phi / kTwoPi * kTableIntervals);
    if (i >= size_t(kTableIntervals)) i = kTableIntervals - 1;
    if (phi < phi_nodes_[i]) i = (i == 0) ? 0 : i - 1;
    return s_nodes_[i] + segment_length(phi_nodes_[i], phi);
}

// === frames and offsets ===

FramePacket ConvexCurve::frame(double s) const {
    double phi = phi_of_s(s);
    Vec2 d1 = d1_phi(phi);
    double w = norm(d1);
    FramePacket f;
    f.point = point_phi(phi);
    f.tangent = d1 / w;
    f.inward_normal = J(f.tangent);
    f.curvature = curvature_phi(phi);
    f.radius = 1.0 / f.curvature;
    f.radius_rate = rho_rate(s, phi);
    return f;
}

Vec2 ConvexCurve::point(double s) const { return point_phi(phi_of_s(s)); }

Vec2 ConvexCurve::offset_point(double s, double d) const {
    double phi = phi_of_s(s);
    Vec2 d1 = d1_phi(phi);
    Vec2 n = J(d1 / norm(d1));
    return point_phi(phi) + d * n;
}

double ConvexCurve::offset_tangent_scale(double s, double d) const {
    return 1.0 - curvature_phi(phi_of_s(s)) * d;
}

double ConvexCurve::rho_of_s(double s) const { return 1.0 / curvature_phi(phi_of_s(s)); }

double ConvexCurve::rho_rate(double s, double phi) const {
    switch (kind_) {
        case Kind::Circle:
            return 0.0;
        case Kind::Ellipse:
            // rho = w^3/(ab) with w^2 = a^2 sin^2 + b^2 cos^2 gives
            // d rho/ds = 3 (a^2 - b^2) sin phi cos phi / (ab).
            return 3.0 * (a_ * a_ - b_ * b_) * std::sin(phi) * std::cos(phi) / (a_ * b_);
        case Kind::Trig: {
            double h = 1e-4 * length_;
            return (-rho_of_s(s + 2 * h) + 8.0 * rho_of_s(s + h) - 8.0 * rho_of_s(s - h) +
                    rho_of_s(s - 2 * h)) /
                   (12.0 * h);
        }
    }
    return 0.0;
}

// === curvature range, cusps, weak field ===

void ConvexCurve::scan_curvature() {
    int imin = 0, imax = 0;
    double kmin = curvature_phi(phi_nodes_[0]), kmax = kmin;
    for (int i = 1; i < kTableIntervals; ++i) {
        double k = curvature_phi(phi_nodes_[i]);
        if (k < kmin) { kmin = k; imin = i; }
        if (k > kmax) { kmax = k; imax = i; }
    }
    double h = kTwoPi / kTableIntervals;
    auto kf = [&](double phi) { return curvature_phi(phi); };
    auto nkf = [&](double phi) { return -curvature_phi(phi); };
    double pmin = golden_min(kf, phi_nodes_[imin] - h, phi_nodes_[imin] + h, 1e-10);
    double pmax = golden_min(nkf, phi_nodes_[imax] - h, phi_nodes_[imax] + h, 1e-10);
    k_min_ = std::min(kmin, curvature_phi(pmin));
    k_max_ = std::max(kmax, curvature_phi(pmax));
    if (!(k_min_ > 0.0)) fail(Errc::invalid_argument, "boundary is not strictly convex");
}

CuspScan ConvexCurve::find_cusps(double r) const {
    if (!(r > 0.0)) fail(Errc::invalid_argument, "offset distance must be positive");
    CuspScan out;
    const int m = kScanSamples;
    std::vector<double> sv(m), fv(m);
    for (int j = 0; j < m; ++j) {
        sv[j] = length_ * j / m;
        fv[j] = rho_of_s(sv[j]) - r;
    }
    auto f = [&](double s) { return rho_of_s(s) - r; };
    std::vector<double> roots;
    for (int j = 0; j < m; ++j) {
        int j2 = (j + 1) % m;
        double hi = sv[j] + length_ / m;
        if (fv[j] == 0.0) {
            roots.push_back(sv[j]);
        } else if ((fv[j] < 0.0) != (fv[j2] < 0.0)) {
            roots.push_back(refine_root(f, sv[j], hi, fv[j], fv[j2], 1e-12));
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double s : roots) {
        if (unique_roots.empty() ||
            (s - unique_roots.back() > 1e-9 * length_ &&
             wrap(unique_roots.front() - s, length_) > 1e-9 * length_))
            unique_roots.push_back(s);
    }
    for (double s : unique_roots) {
        double rate = frame(s).radius_rate;
        if (std::abs(rate) <= kDegenerateRate)
            out.degenerate.push_back(s);
        else
            out.cusps.push_back({wrap(s, length_), offset_point(s, r)});
    }
    // Near-tangencies: rho - r attains a tiny extremum without changing sign.
    for (int j = 0; j < m; ++j) {
        double fp = fv[(j + m - 1) % m], f0 = fv[j], fn = fv[(j + 1) % m];
        bool same_sign = (fp < 0.0) == (f0 < 0.0) && (f0 < 0.0) == (fn < 0.0);
        if (same_sign && f0 != 0.0 && std::abs(f0) <= std::abs(fp) &&
            std::abs(f0) <= std::abs(fn) && std::abs(f0) < 1e-9 * std::max(1.0, r)) {
            double s = golden_min([&](double t) { return std::abs(f(t)); },
                                  sv[j] - length_ / m, sv[j] + length_ / m, 1e-12);
            out.degenerate.push_back(wrap(s, length_));
        }
    }
    return out;
}

WeakFieldReport ConvexCurve::validate_weak_field(double beta) const {
    if (!(beta > 0.0)) fail(Errc::invalid_argument, "field strength beta must be positive");
    return {beta < k_min_, k_min_, k_min_ - beta};
}

// === interiority and projection ===

double ConvexCurve::inside_indicator(Vec2 p) const {
    Vec2 q = p - center_;
    double theta = (q.x == 0.0 && q.y == 0.0) ? 0.0 : std::atan2(q.y, q.x);
    return radial_gauge(theta) - norm(q);
}

double ConvexCurve::arc_of_point(Vec2 p) const {
    Vec2 q = p - center_;
    double phi;
    switch (kind_) {
        case Kind::Circle:
            phi = std::atan2(q.y, q.x);
            break;
        case Kind::Ellipse:
            phi = std::atan2(q.y / b_, q.x / a_);
            break;
        case Kind::Trig:
        default:
            phi = std::atan2(q.y, q.x);
            break;
    }
    return s_of_phi(phi);
}

CurveView ConvexCurve::view() const {
    return {[this](double s) { return point(s); },
            [this](double s) { return frame(s).tangent; }, length_};
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ok: return "ok";
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::singular_point: return "singular_point";
        case Errc::tangential_start: return "tangential_start";
        case Errc::at_pole: return "at_pole";
        case Errc::through_pole: return "through_pole";
        case Errc::on_exclusion_set: return "on_exclusion_set";
        case Errc::inside_curve: return "inside_curve";
        case Errc::not_homogeneous: return "not_homogeneous";
        case Errc::mu_singular: return "mu_singular";
        case Errc::no_intersection: return "no_intersection";
        case Errc::tangent_circle: return "tangent_circle";
        case Errc::both_degenerate: return "both_degenerate";
        case Errc::singular_gradient: return "singular_gradient";
        case Errc::branch_trace_failed: return "branch_trace_failed";
        case Errc::no_offset_model: return "no_offset_model";
        case Errc::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

}  // namespace blab
