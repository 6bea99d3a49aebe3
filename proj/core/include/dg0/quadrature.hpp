#pragma once

#include <vector>

#include "dg0/mesh.hpp"

namespace dg0 {

/// Gauss-Legendre rule mapped to [0, 1]; exact for polynomials of degree
/// 2n - 1.
struct Quad1D {
    std::vector<double> points;
    std::vector<double> weights;
    int size() const { return static_cast<int>(points.size()); }
};

Quad1D gauss_legendre_01(int n);

/// Rule on the reference triangle {(x,y): x,y >= 0, x + y <= 1}, exact for
/// bivariate polynomials up to the requested total degree (built from a
/// collapsed tensor Gauss rule).
struct QuadTri {
    std::vector<Point> points;
    std::vector<double> weights;
    int size() const { return static_cast<int>(points.size()); }
};

QuadTri triangle_rule(int poly_degree);

/// 1D reference-cell rule on [0,1] exact to poly_degree.
Quad1D segment_rule(int poly_degree);

} // namespace dg0
