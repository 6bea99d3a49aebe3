#include "dg0/quadrature.hpp"

#include <cmath>

#include "dg0/errors.hpp"

namespace dg0 {

namespace {

// Legendre P_n(x) and P_n'(x) on [-1, 1] by recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = p0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

Quad1D gauss_legendre_01(int n) {
    if (n < 1) {
        throw InvalidArgument("gauss_legendre_01: need at least one point");
    }
    Quad1D rule;
    rule.points.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            const double dx = -p / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; roots come out descending, store ascending
        rule.points[static_cast<size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        rule.weights[static_cast<size_t>(n - 1 - i)] = 0.5 * w;
    }
    return rule;
}

Quad1D segment_rule(int poly_degree) {
    if (poly_degree < 0) {
        throw InvalidArgument("segment_rule: negative degree");
    }
    return gauss_legendre_01(poly_degree / 2 + 1);
}

QuadTri triangle_rule(int poly_degree) {
    if (poly_degree < 0) {
        throw InvalidArgument("triangle_rule: negative degree");
    }
    // Collapse the unit square onto the triangle via (u,v) -> (u(1-v), uv);
    // the Jacobian u raises the u-degree by one.
    const int n = (poly_degree + 3) / 2;
    const Quad1D gu = gauss_legendre_01(n);
    const Quad1D gv = gauss_legendre_01(n);
    QuadTri rule;
    rule.points.reserve(static_cast<size_t>(n) * n);
    rule.weights.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = gu.points[static_cast<size_t>(i)];
            const double v = gv.points[static_cast<size_t>(j)];
            rule.points.push_back(Point{u * (1.0 - v), u * v});
            rule.weights.push_back(gu.weights[static_cast<size_t>(i)] *
                                   gv.weights[static_cast<size_t>(j)] * u);
        }
    }
    return rule;
}

} // namespace dg0
