#include "algebra.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rootfind.hpp"

namespace blab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double affine_hessian(const Jet2& j) {
    return j.fxx * j.fy * j.fy - 2.0 * j.fxy * j.fx * j.fy + j.fyy * j.fx * j.fx;
}

double affine_hessian(const BivariatePolynomial& f, Vec2 p) {
    return affine_hessian(f.jet(p));
}

double implicit_curvature(const BivariatePolynomial& f, Vec2 p) {
    Jet2 j = f.jet(p);
    double g = std::hypot(j.fx, j.fy);
    if (g < 1e-12)
        fail(Errc::singular_point, "gradient vanishes, curvature undefined");
    return -affine_hessian(j) / (g * g * g);
}

namespace {

struct Refined {
    Vec2 p;
    bool ok;
};

// Gauss-Newton on the overdetermined system (f, f_x, f_y) = 0. Jets come
// from compensated evaluation so degenerate (cuspidal) points converge past
// the plain-double merit noise floor instead of stalling ~1e-8 away.
Refined refine_singular(const BivariatePolynomial& f, Vec2 z0) {
    Vec2 z = z0;
    for (int it = 0; it < 50; ++it) {
        Jet2 j = f.jet_dd(z);
        double n11 = j.fx * j.fx + j.fxx * j.fxx + j.fxy * j.fxy;
        double n12 = j.fx * j.fy + j.fxx * j.fxy + j.fxy * j.fyy;
        double n22 = j.fy * j.fy + j.fxy * j.fxy + j.fyy * j.fyy;
        double g1 = j.fx * j.value + j.fxx * j.fx + j.fxy * j.fy;
        double g2 = j.fy * j.value + j.fxy * j.fx + j.fyy * j.fy;
        double tr = n11 + n22;
        if (!(tr > 0.0)) break;  // stationary: nothing left to move
        double det = n11 * n22 - n12 * n12;
        if (!std::isfinite(det)) return {z, false};
        // Rank-deficient limit (cuspidal points): stop rather than damp, a
        // damped step would stall orders of magnitude short of the point.
        if (det <= 1e-24 * tr * tr) break;
        Vec2 step{-(n22 * g1 - n12 * g2) / det, -(n11 * g2 - n12 * g1) / det};
        z = z + step;
        if (!std::isfinite(z.x) || !std::isfinite(z.y)) return {z, false};
        if (norm(step) < 1e-15 * (1.0 + norm(z))) break;
    }
    return {z, true};
}

// Scale-aware singularity test at p: |f| and |grad f| small relative to the
// magnitudes of the terms that produced them.
bool verify_singular(const BivariatePolynomial& f, const BivariatePolynomial& fdx,
                     const BivariatePolynomial& fdy, Vec2 p, double rel) {
    Jet2 j = f.jet_dd(p);
    double sf = std::max(1.0, f.eval_scale(p));
    double sg = std::max({1.0, fdx.eval_scale(p), fdy.eval_scale(p)});
    return std::abs(j.value) <= rel * sf && std::hypot(j.fx, j.fy) <= rel * sg;
}

}  // namespace

std::vector<Vec2> find_singular_points(const BivariatePolynomial& f, const Box& region) {
    double w = region.hi.x - region.lo.x, h = region.hi.y - region.lo.y;
    if (!(w > 0.0) || !(h > 0.0))
        fail(Errc::invalid_argument, "search region must have positive area");

    BivariatePolynomial fdx = f.dx(), fdy = f.dy();
    const int n = 200;
    std::vector<double> merit(n * n);
    double sf = 0.0, sg = 0.0;
    std::vector<Jet2> jets(n * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            Vec2 p{region.lo.x + w * ix / (n - 1), region.lo.y + h * iy / (n - 1)};
            Jet2 j = f.jet(p);
            jets[iy * n + ix] = j;
            sf = std::max(sf, std::abs(j.value));
            sg = std::max(sg, std::hypot(j.fx, j.fy));
        }
    if (sf == 0.0) sf = 1.0;
    if (sg == 0.0) sg = 1.0;
    for (int k = 0; k < n * n; ++k) {
        double a = jets[k].value / sf;
        double b = std::hypot(jets[k].fx, jets[k].fy) / sg;
        merit[k] = a * a + b * b;
    }

    std::vector<Vec2> found;
    auto already = [&](Vec2 p) {
        for (const auto& q : found)
            if (norm(p - q) < 1e-8) return true;
        return false;
    };

    double margin = 1e-7 * std::hypot(w, h);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            double m = merit[iy * n + ix];
            bool minimal = true;
            for (int dy = -1; dy <= 1 && minimal; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jy < 0 || jx >= n || jy >= n || (dx == 0 && dy == 0)) continue;
                    if (merit[jy * n + jx] < m) {
                        minimal = false;
                        break;
                    }
                }
            if (!minimal) continue;
            Vec2 seed{region.lo.x + w * ix / (n - 1), region.lo.y + h * iy / (n - 1)};
            Refined r = refine_singular(f, seed);
            if (!r.ok) continue;
            if (r.p.x < region.lo.x - margin || r.p.x > region.hi.x + margin ||
                r.p.y < region.lo.y - margin || r.p.y > region.hi.y + margin)
                continue;
            if (!verify_singular(f, fdx, fdy, r.p, 1e-9)) continue;
            if (!already(r.p)) found.push_back(r.p);
        }

    std::sort(found.begin(), found.end(), [](Vec2 a, Vec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    return found;
}

namespace {

// Real zero directions of a nonzero homogeneous form on [0, pi), counted
// without multiplicity. Sign changes catch odd zeros; near-zero local minima
// of |h| catch the even ones.
std::vector<double> tangent_lines(const BivariatePolynomial& L, int form_degree) {
    const int N = 4096;
    auto h = [&](double t) { return L.eval(std::cos(t), std::sin(t)); };
    std::vector<double> val(N + 1);
    double hmax = 0.0;
    for (int i = 0; i < N; ++i) {
        val[i] = h(kPi * i / N);
        hmax = std::max(hmax, std::abs(val[i]));
    }
    val[N] = (form_degree % 2 == 0) ? val[0] : -val[0];
    if (hmax == 0.0) return {};

    std::vector<double> zeros;
    for (int i = 0; i < N; ++i) {
        double a = kPi * i / N, b = kPi * (i + 1) / N;
        if (val[i] == 0.0) {
            zeros.push_back(a);
            continue;
        }
        if (val[i] * val[i + 1] < 0.0) {
            zeros.push_back(refine_root(h, a, b, val[i], val[i + 1], 1e-13));
            continue;
        }
        // interior even-multiplicity zero: |h| dips without a sign change
        int prev = (i + N - 1) % N;
        if (std::abs(val[i]) < 1e-4 * hmax && std::abs(val[i]) <= std::abs(val[prev]) &&
            std::abs(val[i]) <= std::abs(val[i + 1])) {
            double t = golden_min([&](double u) { return std::abs(h(u)); },
                                  a - kPi / N, a + kPi / N, 1e-13);
            if (std::abs(h(t)) < 1e-8 * hmax)
                zeros.push_back(t < 0.0 ? t + kPi : (t >= kPi ? t - kPi : t));
        }
    }

    std::sort(zeros.begin(), zeros.end());
    std::vector<double> merged;
    for (double z : zeros) {
        if (!merged.empty() && z - merged.back() < 1e-6) continue;
        if (!merged.empty() && kPi - z + merged.front() < 1e-6) continue;
        merged.push_back(z);
    }
    return merged;
}

struct TracedArc {
    std::vector<Vec2> pts;  // relative to the singular point
    bool reached_inner = false;
};

// Newton along the gradient back onto {g = 0}; true when it sticks.
bool correct_onto(const BivariatePolynomial& g, const BivariatePolynomial& gx,
                  const BivariatePolynomial& gy, Vec2& z) {
    // Newton projection along the gradient.  Acceptance is the distance
    // estimate |g|/|grad g| relative to |z|: a residual threshold relative to
    // |g|'s own term scale is unattainable for product-like germs, and a
    // step-size exit mistakes a tiny transverse coordinate for convergence.
    double prev = HUGE_VAL;
    for (int it = 0; it < 16; ++it) {
        double v = g.eval(z);
        if (!std::isfinite(v)) return false;
        double av = std::abs(v);
        Vec2 gr{gx.eval(z), gy.eval(z)};
        double n2 = norm2(gr);
        if (!(n2 > 0.0)) return av == 0.0;
        if (av == 0.0) return true;
        if (av >= 0.5 * prev)  // rounding floor, no further progress possible
            return av / std::sqrt(n2) <= 1e-10 * (norm(z) + 1e-300);
        prev = av;
        z = z + gr * (-v / n2);
    }
    double v = std::abs(g.eval(z));
    double gn = std::hypot(gx.eval(z), gy.eval(z));
    return gn > 0.0 && v / gn <= 1e-10 * (norm(z) + 1e-300);
}

TracedArc trace_arc(const BivariatePolynomial& g, const BivariatePolynomial& gx,
                    const BivariatePolynomial& gy, Vec2 start, double outer) {
    const double inner = 1e-7;
    TracedArc arc;
    Vec2 z = start;
    if (!correct_onto(g, gx, gy, z)) return arc;
    arc.pts.push_back(z);
    for (int step = 0; step < 6000; ++step) {
        double rho = norm(z);
        if (rho <= inner) {
            arc.reached_inner = true;
            break;
        }
        if (rho > 2.5 * outer) break;
        Vec2 gr{gx.eval(z), gy.eval(z)};
        double gn = norm(gr);
        if (!(gn > 0.0)) break;
        Vec2 tangent = J(gr) * (1.0 / gn);
        if (dot(tangent, z) > 0.0) tangent = tangent * -1.0;
        Vec2 zn = z + tangent * (0.05 * rho);
        if (!correct_onto(g, gx, gy, zn)) break;
        z = zn;
        arc.pts.push_back(z);
    }
    return arc;
}

double percentile(std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    double idx = q * (v.size() - 1);
    size_t lo = size_t(idx);
    size_t hi = std::min(lo + 1, v.size() - 1);
    double w = idx - lo;
    return v[lo] * (1.0 - w) + v[hi] * w;
}

// Median slope of (x, y) pairs over pairs separated by at least 0.25 in x;
// also reports the inter-quartile range. Pairs are formed within each
// series, never across series.
struct SlopeFit {
    double median = 0.0, iqr = 0.0;
    int pairs = 0;
};

SlopeFit fit_slopes(const std::vector<std::vector<std::pair<double, double>>>& series) {
    std::vector<double> slopes;
    for (const auto& s : series)
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j) {
                double dx = s[i].first - s[j].first;
                if (std::abs(dx) < 0.25) continue;
                slopes.push_back((s[i].second - s[j].second) / dx);
            }
    if (slopes.empty()) return {};
    SlopeFit fit;
    fit.pairs = int(slopes.size());
    std::vector<double> tmp = slopes;
    fit.median = percentile(tmp, 0.5);
    double q1 = percentile(tmp, 0.25), q3 = percentile(tmp, 0.75);
    fit.iqr = q3 - q1;
    return fit;
}

}  // namespace

BranchAnalysis estimate_branch(const BivariatePolynomial& f, Vec2 singular_point,
                               const BivariatePolynomial* aux) {
    BivariatePolynomial fdx = f.dx(), fdy = f.dy();
    Refined r = refine_singular(f, singular_point);
    if (!r.ok || norm(r.p - singular_point) > 1e-3 * (1.0 + norm(singular_point)) ||
        !verify_singular(f, fdx, fdy, r.p, 1e-9))
        fail(Errc::invalid_argument, "point is not singular for this polynomial");
    Vec2 base = r.p;

    BivariatePolynomial g = f.shifted(base);
    double gmax = g.max_abs_coeff();
    int m0 = g.lowest_degree(1e-7 * gmax);
    if (m0 <= 0) fail(Errc::invalid_argument, "point is not singular for this polynomial");
    if (m0 == 1) fail(Errc::invalid_argument, "point is regular for this polynomial");
    BivariatePolynomial lowest = g.homogeneous_part(m0);

    BranchAnalysis out;
    std::vector<double> lines = tangent_lines(lowest, m0);
    if (lines.empty()) return out;  // definite lowest form: isolated point

    // Crossings of the germ with the outer circle.
    const double outer = 1e-2;
    const int N = 4096;
    auto on_circle = [&](double t) {
        return g.eval(outer * std::cos(t), outer * std::sin(t));
    };
    std::vector<double> cross;
    double prev = on_circle(0.0);
    for (int i = 1; i <= N; ++i) {
        double t = 2.0 * kPi * i / N;
        double v = on_circle(t);
        if (prev * v < 0.0)
            cross.push_back(refine_root(on_circle, 2.0 * kPi * (i - 1) / N, t, prev, v, 1e-13));
        else if (prev == 0.0)
            cross.push_back(2.0 * kPi * (i - 1) / N);
        prev = v;
    }
    if (cross.empty()) return out;

    BivariatePolynomial gx = g.dx(), gy = g.dy();
    struct Keyed {
        TracedArc arc;
        int line = 0;
        int ray = 0;
    };
    std::vector<Keyed> arcs;
    for (double t : cross) {
        TracedArc arc = trace_arc(g, gx, gy, {outer * std::cos(t), outer * std::sin(t)}, outer);
        if (!arc.reached_inner) {
            ++out.failed_traces;
            continue;
        }
        Vec2 last = arc.pts.back();
        double theta = std::atan2(last.y, last.x);
        int best = 0;
        double bestd = 1e9;
        for (size_t li = 0; li < lines.size(); ++li) {
            double d = std::remainder(theta - lines[li], kPi);
            if (std::abs(d) < bestd) {
                bestd = std::abs(d);
                best = int(li);
            }
        }
        double along = std::cos(theta - lines[best]);
        arcs.push_back({std::move(arc), best, along >= 0.0 ? 1 : -1});
    }

    // Pair arcs into branches: two arcs on the same ray form a cuspidal
    // branch (even q); arcs on opposite rays of one line pair into a smooth
    // branch (odd q); stragglers stand alone.
    std::vector<std::vector<const TracedArc*>> groups;
    for (size_t li = 0; li < lines.size(); ++li) {
        std::vector<const TracedArc*> singles;
        for (int ray : {1, -1}) {
            std::vector<const TracedArc*> same;
            for (const auto& k : arcs)
                if (k.line == int(li) && k.ray == ray) same.push_back(&k.arc);
            while (same.size() >= 2) {
                groups.push_back({same[0], same[1]});
                same.erase(same.begin(), same.begin() + 2);
            }
            if (!same.empty()) singles.push_back(same[0]);
        }
        // a lone arc on each ray of the line runs straight through: one
        // smooth branch
        if (singles.size() == 2)
            groups.push_back({singles[0], singles[1]});
        else
            for (const TracedArc* s : singles) groups.push_back({s});
    }

    BivariatePolynomial auxx, auxy;
    if (aux) {
        auxx = aux->dx();
        auxy = aux->dy();
    }

    for (size_t gi = 0; gi < groups.size(); ++gi) {
        // adapted frame: first axis along the tangent line of the group
        const TracedArc* rep = groups[gi][0];
        Vec2 last = rep->pts.back();
        double theta = std::atan2(last.y, last.x);
        int li = 0;
        double bestd = 1e9;
        for (size_t k = 0; k < lines.size(); ++k) {
            double d = std::remainder(theta - lines[k], kPi);
            if (std::abs(d) < bestd) {
                bestd = std::abs(d);
                li = int(k);
            }
        }
        Vec2 e1{std::cos(lines[li]), std::sin(lines[li])};
        Vec2 e2 = J(e1);

        std::vector<std::vector<std::pair<double, double>>> xi_eta, xi_ha, xi_hb;
        int used = 0;
        for (const TracedArc* arc : groups[gi]) {
            std::vector<std::pair<double, double>> se, sa, sb;
            for (const Vec2& z : arc->pts) {
                double rho = norm(z);
                if (rho < 1e-7 || rho > 1e-5) continue;
                double xi = dot(z, e1), eta = dot(z, e2);
                if (std::abs(xi) <= 0.0) continue;
                ++used;
                double lx = std::log10(std::abs(xi));
                // Corrected points sit on the curve to ~1e-16 relative, so a
                // genuine eta, even at index 3.5, clears this floor with room;
                // rounding junk on a straight branch does not.
                if (std::abs(eta) > 1e-18 * std::abs(xi))
                    se.push_back({lx, std::log10(std::abs(eta))});
                if (aux) {
                    Vec2 p = base + z;
                    Jet2 j = aux->jet(p);
                    double H = affine_hessian(j);
                    double G = std::pow(std::hypot(j.fx, j.fy), 3.0);
                    if (std::abs(H) > 1e-300) sa.push_back({lx, std::log10(std::abs(H))});
                    if (G > 1e-300) sb.push_back({lx, std::log10(G)});
                }
            }
            xi_eta.push_back(std::move(se));
            xi_ha.push_back(std::move(sa));
            xi_hb.push_back(std::move(sb));
        }

        BranchEstimate est;
        est.base_point = base;
        est.samples_used = used;
        SlopeFit fit = fit_slopes(xi_eta);
        // A genuine branch has eta = o(xi) in its adapted frame, so its slope
        // exceeds 1 strictly.  A slope of ~1 means eta is dominated by the
        // rounding error of the frame angle: the branch is straight to
        // working precision, as is one with too few usable samples.
        if (fit.pairs < 8 || fit.median < 1.2) {
            est.puiseux_index = 2.0;
            est.index_ci = 0.0;
        } else {
            est.puiseux_index = fit.median;
            est.index_ci = fit.iqr;
        }
        if (aux) {
            SlopeFit fa = fit_slopes(xi_ha);
            SlopeFit fb = fit_slopes(xi_hb);
            if (fa.pairs >= 8) est.order_a = fa.median;
            if (fb.pairs >= 8) est.order_b = fb.median;
        }
        out.branches.push_back(est);
    }
    return out;
}

std::vector<Vec2> trace_closed_curve(const BivariatePolynomial& f, Vec2 seed, double step) {
    if (!(step > 0.0)) fail(Errc::invalid_argument, "trace step must be positive");
    BivariatePolynomial fx = f.dx(), fy = f.dy();
    Vec2 z = seed;
    if (!correct_onto(f, fx, fy, z))
        fail(Errc::invalid_argument, "seed is not near a regular curve point");

    std::vector<Vec2> pts{z};
    Vec2 prev_t{0.0, 0.0};
    for (int k = 0; k < 200000; ++k) {
        Vec2 gr{fx.eval(z), fy.eval(z)};
        double gn = norm(gr);
        if (!(gn > 0.0)) fail(Errc::numerical_failure, "gradient vanished while tracing");
        Vec2 t = J(gr) * (1.0 / gn);
        if (k > 0 && dot(t, prev_t) < 0.0) t = t * -1.0;
        prev_t = t;
        Vec2 zn = z + t * step;
        if (!correct_onto(f, fx, fy, zn))
            fail(Errc::numerical_failure, "corrector lost the curve while tracing");
        z = zn;
        if (k >= 10 && norm(z - pts.front()) < 0.75 * step) return pts;
        pts.push_back(z);
    }
    fail(Errc::numerical_failure, "curve did not close after 200000 steps");
}

}  // namespace blab
