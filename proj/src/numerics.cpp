#include "syntro/numerics.hpp"

#include <algorithm>

namespace syntro {

std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
    // Triangular: the diagonal entries are the eigenvalues, exactly.
    if (m.a12 == 0.0 || m.a21 == 0.0) {
        return {std::complex<double>(m.a11, 0.0), std::complex<double>(m.a22, 0.0)};
    }
    const double tr = m.trace();
    const double dt = m.det();
    const double disc = tr * tr - 4.0 * dt;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        return {std::complex<double>(0.5 * (tr - root), 0.0),
                std::complex<double>(0.5 * (tr + root), 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

std::array<double, 2> eigenvector(const Mat2& m, double lambda) {
    // Rows of (m - lambda I); the eigenvector is orthogonal to both.
    const double r1x = m.a11 - lambda, r1y = m.a12;
    const double r2x = m.a21, r2y = m.a22 - lambda;
    const double n1 = r1x * r1x + r1y * r1y;
    const double n2 = r2x * r2x + r2y * r2y;
    double vx, vy;
    if (n1 >= n2) {
        vx = r1y;
        vy = -r1x;
    } else {
        vx = r2y;
        vy = -r2x;
    }
    const double norm = std::hypot(vx, vy);
    if (norm == 0.0) return {1.0, 0.0};
    return {vx / norm, vy / norm};
}

Interval intersect(const Interval& a, const Interval& b) {
    if (a.empty() || b.empty()) return Interval{};
    Interval out{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (out.hi < out.lo) return Interval{};
    return out;
}

}  // namespace syntro
