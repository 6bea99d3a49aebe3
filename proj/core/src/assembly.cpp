#include "dg0/assembly.hpp"

#include <cstdio>
#include <ostream>
#include <vector>

#include "dg0/errors.hpp"
#include "dg0/quadrature.hpp"

namespace dg0 {

namespace {

using Triplet = Eigen::Triplet<double>;
using TimeAveragedCoef = std::function<CoefMatrix(const Point&)>;

struct CellQuadrature {
    std::vector<Point> points;
    std::vector<double> weights;  // reference weights; multiply by det_abs
};

CellQuadrature cell_rule(const FeSpace& space, int poly_degree) {
    CellQuadrature rule;
    if (space.dim() == 1) {
        const Quad1D q = segment_rule(poly_degree);
        for (int i = 0; i < q.size(); ++i) {
            rule.points.push_back(Point{q.points[static_cast<size_t>(i)], 0.0});
            rule.weights.push_back(q.weights[static_cast<size_t>(i)]);
        }
    } else {
        const QuadTri q = triangle_rule(poly_degree);
        rule.points = q.points;
        rule.weights = q.weights;
    }
    return rule;
}

int default_mass_degree(const FeSpace& space) { return 2 * space.degree() + 2; }

int default_stiffness_degree(const FeSpace& space) {
    // exact for degree 2r-2 gradient products, plus 2 for variable a
    return 2 * (space.degree() - 1) + 2;
}

int default_load_degree(const FeSpace& space) { return 2 * space.degree() + 2; }

// Shared scatter loop for mass/stiffness style bilinear forms.
template <typename LocalKernel>
SparseSpd assemble_matrix(const FeSpace& space, int quad_degree, bool interior_only,
                          LocalKernel&& kernel) {
    const int ndof = space.dofs_per_cell();
    const CellQuadrature rule = cell_rule(space, quad_degree);

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<size_t>(space.mesh().num_cells()) * ndof * ndof);
    std::vector<double> local(static_cast<size_t>(ndof) * ndof);

    for (int c = 0; c < space.mesh().num_cells(); ++c) {
        std::fill(local.begin(), local.end(), 0.0);
        const FeSpace::CellMap map = space.cell_map(c);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            kernel(c, map, rule.points[q], rule.weights[q] * map.det_abs, local.data());
        }
        for (int i = 0; i < ndof; ++i) {
            int row = space.cell_dof(c, i);
            for (int j = 0; j < ndof; ++j) {
                int col = space.cell_dof(c, j);
                if (interior_only) {
                    const int ri = space.interior_index(row);
                    const int ci = space.interior_index(col);
                    if (ri < 0 || ci < 0) continue;
                    triplets.emplace_back(ri, ci, local[static_cast<size_t>(i) * ndof + j]);
                } else {
                    triplets.emplace_back(row, col, local[static_cast<size_t>(i) * ndof + j]);
                }
            }
        }
    }

    const int n = interior_only ? space.num_interior() : space.num_dofs();
    SparseSpd out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

void mass_kernel(const FeSpace& space, const Point& ref, double weight, double* local) {
    const int ndof = space.dofs_per_cell();
    double values[6];
    space.shape_values(ref, values);
    for (int i = 0; i < ndof; ++i) {
        for (int j = 0; j < ndof; ++j) {
            local[i * ndof + j] += weight * values[i] * values[j];
        }
    }
}

SparseSpd assemble_stiffness_with(const FeSpace& space, const TimeAveragedCoef& coef,
                                  int quad_degree) {
    if (quad_degree == -1) quad_degree = default_stiffness_degree(space);
    if (quad_degree < 1) {
        throw InvalidArgument("assemble_stiffness: quadrature order must be >= 1");
    }
    const int ndof = space.dofs_per_cell();
    const int dim = space.dim();
    return assemble_matrix(
        space, quad_degree, /*interior_only=*/true,
        [&](int /*c*/, const FeSpace::CellMap& map, const Point& ref, double weight,
            double* local) {
            Point ref_grads[6];
            space.shape_ref_grads(ref, ref_grads);
            Point grads[6];
            for (int i = 0; i < ndof; ++i) {
                if (dim == 1) {
                    grads[i] = Point{ref_grads[i].x * map.inv_t[0][0], 0.0};
                } else {
                    grads[i] = Point{
                        map.inv_t[0][0] * ref_grads[i].x + map.inv_t[0][1] * ref_grads[i].y,
                        map.inv_t[1][0] * ref_grads[i].x + map.inv_t[1][1] * ref_grads[i].y};
                }
            }
            const Point x = space.map_to_global(map, ref);
            const CoefMatrix a = coef(x);
            for (int i = 0; i < ndof; ++i) {
                for (int j = 0; j < ndof; ++j) {
                    double v = a.a[0][0] * grads[j].x * grads[i].x;
                    if (dim == 2) {
                        v += a.a[0][1] * grads[j].x * grads[i].y +
                             a.a[1][0] * grads[j].y * grads[i].x +
                             a.a[1][1] * grads[j].y * grads[i].y;
                    }
                    local[i * ndof + j] += weight * v;
                }
            }
        });
}

TimeAveragedCoef averaged_coefficients(const CoefficientField& field, const TimeGrid& grid,
                                       int m, int time_points) {
    if (m < 1 || m > grid.intervals()) {
        throw InvalidArgument("averaged coefficients: interval index out of range");
    }
    if (time_points < 1) {
        throw InvalidArgument("averaged coefficients: need at least one time point");
    }
    const Quad1D rule = gauss_legendre_01(time_points);
    const double t0 = grid.node(m - 1);
    const double k = grid.step(m);
    return [&field, rule, t0, k](const Point& x) {
        CoefMatrix avg;
        for (int i = 0; i < rule.size(); ++i) {
            const CoefMatrix a = field(t0 + k * rule.points[static_cast<size_t>(i)], x);
            const double w = rule.weights[static_cast<size_t>(i)];
            for (int p = 0; p < 2; ++p) {
                for (int q = 0; q < 2; ++q) avg.a[p][q] += w * a.a[p][q];
            }
        }
        return avg;
    };
}

Eigen::VectorXd assemble_flux_load_with(const FeSpace& space, const TimeAveragedCoef& coef,
                                        const std::function<Point(const Point&)>& grad_v,
                                        int quad_degree) {
    if (!grad_v) {
        throw InvalidArgument("ritz projection: gradient evaluator required");
    }
    if (quad_degree == -1) quad_degree = default_stiffness_degree(space) + 2;
    const int ndof = space.dofs_per_cell();
    const int dim = space.dim();
    const CellQuadrature rule = cell_rule(space, quad_degree);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_interior());
    for (int c = 0; c < space.mesh().num_cells(); ++c) {
        const FeSpace::CellMap map = space.cell_map(c);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const Point& ref = rule.points[q];
            const double weight = rule.weights[q] * map.det_abs;
            Point ref_grads[6];
            space.shape_ref_grads(ref, ref_grads);
            const Point x = space.map_to_global(map, ref);
            const CoefMatrix a = coef(x);
            const Point gv = grad_v(x);
            // flux a * grad v
            Point flux{a.a[0][0] * gv.x, 0.0};
            if (dim == 2) {
                flux.x = a.a[0][0] * gv.x + a.a[0][1] * gv.y;
                flux.y = a.a[1][0] * gv.x + a.a[1][1] * gv.y;
            }
            for (int i = 0; i < ndof; ++i) {
                const int idx = space.interior_index(space.cell_dof(c, i));
                if (idx < 0) continue;
                Point gi;
                if (dim == 1) {
                    gi = Point{ref_grads[i].x * map.inv_t[0][0], 0.0};
                } else {
                    gi = Point{map.inv_t[0][0] * ref_grads[i].x + map.inv_t[0][1] * ref_grads[i].y,
                               map.inv_t[1][0] * ref_grads[i].x + map.inv_t[1][1] * ref_grads[i].y};
                }
                b[idx] += weight * (flux.x * gi.x + flux.y * gi.y);
            }
        }
    }
    return b;
}

} // namespace

SparseSpd assemble_mass(const FeSpace& space) {
    return assemble_matrix(space, default_mass_degree(space), /*interior_only=*/true,
                           [&](int, const FeSpace::CellMap&, const Point& ref, double w,
                               double* local) { mass_kernel(space, ref, w, local); });
}

SparseSpd assemble_mass_full(const FeSpace& space) {
    return assemble_matrix(space, default_mass_degree(space), /*interior_only=*/false,
                           [&](int, const FeSpace::CellMap&, const Point& ref, double w,
                               double* local) { mass_kernel(space, ref, w, local); });
}

SparseSpd assemble_stiffness(const FeSpace& space, const CoefficientField& field, double t,
                             int quad_degree) {
    return assemble_stiffness_with(
        space, [&field, t](const Point& x) { return field(t, x); }, quad_degree);
}

SparseSpd assemble_averaged_stiffness(const FeSpace& space, const CoefficientField& field,
                                      const TimeGrid& grid, int m, int time_points,
                                      int quad_degree) {
    return assemble_stiffness_with(space, averaged_coefficients(field, grid, m, time_points),
                                   quad_degree);
}

Eigen::VectorXd assemble_flux_load(const FeSpace& space, const CoefficientField& field, double t,
                                   const std::function<Point(const Point&)>& grad_v,
                                   int quad_degree) {
    return assemble_flux_load_with(
        space, [&field, t](const Point& x) { return field(t, x); }, grad_v, quad_degree);
}

Eigen::VectorXd assemble_load(const FeSpace& space, const std::function<double(const Point&)>& f,
                              int quad_degree) {
    if (!f) {
        throw InvalidArgument("assemble_load: evaluator required");
    }
    if (quad_degree == -1) quad_degree = default_load_degree(space);
    const int ndof = space.dofs_per_cell();
    const CellQuadrature rule = cell_rule(space, quad_degree);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_interior());
    for (int c = 0; c < space.mesh().num_cells(); ++c) {
        const FeSpace::CellMap map = space.cell_map(c);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            double values[6];
            space.shape_values(rule.points[q], values);
            const double fx = f(space.map_to_global(map, rule.points[q]));
            const double weight = rule.weights[q] * map.det_abs;
            for (int i = 0; i < ndof; ++i) {
                const int idx = space.interior_index(space.cell_dof(c, i));
                if (idx >= 0) b[idx] += weight * fx * values[i];
            }
        }
    }
    return b;
}

Eigen::VectorXd l2_project(const FeSpace& space, const std::function<double(const Point&)>& v,
                           int quad_degree) {
    const Eigen::VectorXd b = assemble_load(space, v, quad_degree);
    if (space.num_interior() == 0) return Eigen::VectorXd(0);
    SpdSolver solver(assemble_mass(space));
    return solver.solve(b);
}

Eigen::VectorXd ritz_project(const FeSpace& space, const CoefficientField& field, double t,
                             const std::function<Point(const Point&)>& grad_v, int quad_degree) {
    const auto coef = [&field, t](const Point& x) { return field(t, x); };
    const Eigen::VectorXd b = assemble_flux_load_with(space, coef, grad_v, quad_degree);
    if (space.num_interior() == 0) return Eigen::VectorXd(0);
    SpdSolver solver(assemble_stiffness(space, field, t));
    return solver.solve(b);
}

Eigen::VectorXd ritz_project_avg(const FeSpace& space, const CoefficientField& field,
                                 const TimeGrid& grid, int m,
                                 const std::function<Point(const Point&)>& grad_v,
                                 int time_points, int quad_degree) {
    const auto coef = averaged_coefficients(field, grid, m, time_points);
    const Eigen::VectorXd b = assemble_flux_load_with(space, coef, grad_v, quad_degree);
    if (space.num_interior() == 0) return Eigen::VectorXd(0);
    SpdSolver solver(assemble_averaged_stiffness(space, field, grid, m, time_points));
    return solver.solve(b);
}

void write_coo(const SparseSpd& a, std::ostream& out) {
    char buf[64];
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseSpd::InnerIterator it(a, k); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
            out << buf;
        }
    }
}

} // namespace dg0
