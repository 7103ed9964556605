#pragma once

#include <cmath>
#include <functional>

#include "error.hpp"

namespace blab {

// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of opposite
// sign, refined to |hi - lo| <= xtol, followed by a few safeguarded secant
// steps to push the residual to roundoff. The bracket is maintained
// throughout, so the result never escapes [lo, hi].
template <class F>
double refine_root(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        fail(Errc::numerical_failure, "refine_root: interval does not bracket a sign change");
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // Secant polish inside the bracket.
    double a = lo, b = hi, fa = flo, fb = fhi;
    for (int i = 0; i < 8; ++i) {
        if (fb == fa) break;
        double c = b - fb * (b - a) / (fb - fa);
        if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
        double fc = f(c);
        if (fc == 0.0) return c;
        if ((fc < 0.0) == (flo < 0.0)) {
            lo = c;
            flo = fc;
        } else {
            hi = c;
            fhi = fc;
        }
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        if (hi - lo <= 4.0 * std::abs(b) * 1e-17 + 1e-300) break;
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

template <class F>
double refine_root(F&& f, double lo, double hi, double xtol) {
    return refine_root(f, lo, hi, f(lo), f(hi), xtol);
}

// Golden-section minimization of f on [lo, hi] to |hi - lo| <= xtol.
template <class F>
double golden_min(F&& f, double lo, double hi, double xtol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace blab
