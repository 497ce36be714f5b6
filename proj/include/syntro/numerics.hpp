#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

namespace syntro {

/// 2x2 real matrix, row-major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

/// Eigenvalues of a 2x2 real matrix in closed form from trace and
/// determinant. Triangular matrices return their diagonal entries exactly,
/// with no square-root round-off.
std::array<std::complex<double>, 2> eigenvalues(const Mat2& m);

/// Unit eigenvector for a real eigenvalue of m, taken from whichever row
/// equation is better conditioned. Falls back to (1, 0) for a multiple of
/// the identity.
std::array<double, 2> eigenvector(const Mat2& m, double lambda);

/// Closed interval [lo, hi]; empty when hi < lo.
struct Interval {
    double lo = 0.0;
    double hi = -1.0;

    bool empty() const { return hi < lo; }
    double length() const { return empty() ? 0.0 : hi - lo; }
    bool contains(double x) const { return !empty() && lo <= x && x <= hi; }
};

Interval intersect(const Interval& a, const Interval& b);

namespace detail {

/// Bisection solve of f(x) = target on [lo, hi] for strictly monotone f.
/// Returns nullopt when the target is not bracketed by f(lo) and f(hi).
/// The tolerance is absolute on x.
template <class F>
std::optional<double> solve_monotone(F&& f, double lo, double hi, double target,
                                     double xtol = 1e-12, int max_iter = 200) {
    double flo = f(lo) - target;
    if (flo == 0.0) return lo;
    double fhi = f(hi) - target;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
    const bool lo_negative = flo < 0.0;
    for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid) - target;
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace syntro
