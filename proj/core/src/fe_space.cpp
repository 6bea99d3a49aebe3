#include "dg0/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "dg0/errors.hpp"

namespace dg0 {

FeSpace::FeSpace(Mesh mesh, int degree) : mesh_(std::move(mesh)), degree_(degree) {
    if (degree_ != 1 && degree_ != 2) {
        throw InvalidArgument("FeSpace: degree must be 1 or 2");
    }

    const int nv = mesh_.num_vertices();
    const int nc = mesh_.num_cells();
    dof_points_.resize(static_cast<size_t>(nv));
    for (int v = 0; v < nv; ++v) dof_points_[static_cast<size_t>(v)] = mesh_.vertex(v);

    std::set<int> boundary_dofs(mesh_.boundary_vertices().begin(),
                                mesh_.boundary_vertices().end());

    cell_dofs_.resize(static_cast<size_t>(nc) * dofs_per_cell());
    if (mesh_.dim() == 1) {
        for (int c = 0; c < nc; ++c) {
            const auto cv = mesh_.cell(c);
            cell_dofs_[static_cast<size_t>(c) * dofs_per_cell() + 0] = cv[0];
            cell_dofs_[static_cast<size_t>(c) * dofs_per_cell() + 1] = cv[1];
            if (degree_ == 2) {
                const int dof = static_cast<int>(dof_points_.size());
                const Point& a = mesh_.vertex(cv[0]);
                const Point& b = mesh_.vertex(cv[1]);
                dof_points_.push_back(Point{0.5 * (a.x + b.x), 0.0});
                cell_dofs_[static_cast<size_t>(c) * dofs_per_cell() + 2] = dof;
            }
        }
    } else {
        // shared edge dofs for P2
        std::map<std::pair<int, int>, int> edge_dof;
        std::map<std::pair<int, int>, int> edge_count;
        if (degree_ == 2) {
            for (int c = 0; c < nc; ++c) {
                const auto cv = mesh_.cell(c);
                for (int e = 0; e < 3; ++e) {
                    int a = cv[static_cast<size_t>(e)];
                    int b = cv[static_cast<size_t>((e + 1) % 3)];
                    if (a > b) std::swap(a, b);
                    ++edge_count[{a, b}];
                    if (!edge_dof.count({a, b})) {
                        const int dof = static_cast<int>(dof_points_.size());
                        const Point& pa = mesh_.vertex(a);
                        const Point& pb = mesh_.vertex(b);
                        dof_points_.push_back(Point{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
                        edge_dof[{a, b}] = dof;
                    }
                }
            }
            for (const auto& [edge, count] : edge_count) {
                if (count == 1) boundary_dofs.insert(edge_dof.at(edge));
            }
        }
        for (int c = 0; c < nc; ++c) {
            const auto cv = mesh_.cell(c);
            const size_t base = static_cast<size_t>(c) * dofs_per_cell();
            cell_dofs_[base + 0] = cv[0];
            cell_dofs_[base + 1] = cv[1];
            cell_dofs_[base + 2] = cv[2];
            if (degree_ == 2) {
                auto mid = [&](int i, int j) {
                    int a = cv[static_cast<size_t>(i)], b = cv[static_cast<size_t>(j)];
                    if (a > b) std::swap(a, b);
                    return edge_dof.at({a, b});
                };
                cell_dofs_[base + 3] = mid(0, 1);
                cell_dofs_[base + 4] = mid(1, 2);
                cell_dofs_[base + 5] = mid(2, 0);
            }
        }
    }

    interior_index_.assign(dof_points_.size(), -1);
    for (int dof = 0; dof < num_dofs(); ++dof) {
        if (!boundary_dofs.count(dof)) {
            interior_index_[static_cast<size_t>(dof)] = num_interior_++;
            interior_dofs_.push_back(dof);
        }
    }
}

int FeSpace::dofs_per_cell() const {
    if (mesh_.dim() == 1) return degree_ + 1;
    return degree_ == 1 ? 3 : 6;
}

void FeSpace::shape_values(const Point& ref, double* out) const {
    if (mesh_.dim() == 1) {
        const double s = ref.x;
        if (degree_ == 1) {
            out[0] = 1.0 - s;
            out[1] = s;
        } else {
            out[0] = (1.0 - s) * (1.0 - 2.0 * s);
            out[1] = s * (2.0 * s - 1.0);
            out[2] = 4.0 * s * (1.0 - s);
        }
        return;
    }
    const double l0 = 1.0 - ref.x - ref.y;
    const double l1 = ref.x;
    const double l2 = ref.y;
    if (degree_ == 1) {
        out[0] = l0;
        out[1] = l1;
        out[2] = l2;
        return;
    }
    out[0] = l0 * (2.0 * l0 - 1.0);
    out[1] = l1 * (2.0 * l1 - 1.0);
    out[2] = l2 * (2.0 * l2 - 1.0);
    out[3] = 4.0 * l0 * l1;
    out[4] = 4.0 * l1 * l2;
    out[5] = 4.0 * l2 * l0;
}

void FeSpace::shape_ref_grads(const Point& ref, Point* out) const {
    if (mesh_.dim() == 1) {
        const double s = ref.x;
        if (degree_ == 1) {
            out[0] = Point{-1.0, 0.0};
            out[1] = Point{1.0, 0.0};
        } else {
            out[0] = Point{4.0 * s - 3.0, 0.0};
            out[1] = Point{4.0 * s - 1.0, 0.0};
            out[2] = Point{4.0 - 8.0 * s, 0.0};
        }
        return;
    }
    const double l0 = 1.0 - ref.x - ref.y;
    const double l1 = ref.x;
    const double l2 = ref.y;
    if (degree_ == 1) {
        out[0] = Point{-1.0, -1.0};
        out[1] = Point{1.0, 0.0};
        out[2] = Point{0.0, 1.0};
        return;
    }
    out[0] = Point{-(4.0 * l0 - 1.0), -(4.0 * l0 - 1.0)};
    out[1] = Point{4.0 * l1 - 1.0, 0.0};
    out[2] = Point{0.0, 4.0 * l2 - 1.0};
    out[3] = Point{4.0 * (l0 - l1), -4.0 * l1};
    out[4] = Point{4.0 * l2, 4.0 * l1};
    out[5] = Point{-4.0 * l2, 4.0 * (l0 - l2)};
}

FeSpace::CellMap FeSpace::cell_map(int c) const {
    CellMap map;
    const auto cv = mesh_.cell(c);
    const Point& a = mesh_.vertex(cv[0]);
    map.origin = a;
    if (mesh_.dim() == 1) {
        const double len = mesh_.vertex(cv[1]).x - a.x;
        map.jac[0][0] = len;
        map.inv_t[0][0] = 1.0 / len;
        map.det_abs = std::abs(len);
        return map;
    }
    const Point& b = mesh_.vertex(cv[1]);
    const Point& d = mesh_.vertex(cv[2]);
    map.jac[0][0] = b.x - a.x;
    map.jac[0][1] = d.x - a.x;
    map.jac[1][0] = b.y - a.y;
    map.jac[1][1] = d.y - a.y;
    const double det = map.jac[0][0] * map.jac[1][1] - map.jac[0][1] * map.jac[1][0];
    map.det_abs = std::abs(det);
    // J^{-T}
    map.inv_t[0][0] = map.jac[1][1] / det;
    map.inv_t[0][1] = -map.jac[1][0] / det;
    map.inv_t[1][0] = -map.jac[0][1] / det;
    map.inv_t[1][1] = map.jac[0][0] / det;
    return map;
}

Point FeSpace::map_to_global(const CellMap& map, const Point& ref) const {
    if (mesh_.dim() == 1) {
        return Point{map.origin.x + map.jac[0][0] * ref.x, 0.0};
    }
    return Point{map.origin.x + map.jac[0][0] * ref.x + map.jac[0][1] * ref.y,
                 map.origin.y + map.jac[1][0] * ref.x + map.jac[1][1] * ref.y};
}

double FeSpace::value_in_cell(const Eigen::VectorXd& interior, int c, const Point& ref) const {
    double values[6];
    shape_values(ref, values);
    double out = 0.0;
    for (int j = 0; j < dofs_per_cell(); ++j) {
        const int idx = interior_index(cell_dof(c, j));
        if (idx >= 0) out += interior[idx] * values[j];
    }
    return out;
}

Point FeSpace::gradient_in_cell(const Eigen::VectorXd& interior, int c, const Point& ref) const {
    Point ref_grads[6];
    shape_ref_grads(ref, ref_grads);
    const CellMap map = cell_map(c);
    Point grad{0.0, 0.0};
    for (int j = 0; j < dofs_per_cell(); ++j) {
        const int idx = interior_index(cell_dof(c, j));
        if (idx < 0) continue;
        const double coeff = interior[idx];
        if (mesh_.dim() == 1) {
            grad.x += coeff * ref_grads[j].x * map.inv_t[0][0];
        } else {
            grad.x += coeff * (map.inv_t[0][0] * ref_grads[j].x + map.inv_t[0][1] * ref_grads[j].y);
            grad.y += coeff * (map.inv_t[1][0] * ref_grads[j].x + map.inv_t[1][1] * ref_grads[j].y);
        }
    }
    return grad;
}

Point FeSpace::ref_point_of(int c, const Point& x) const {
    const auto cv = mesh_.cell(c);
    const Point& a = mesh_.vertex(cv[0]);
    if (mesh_.dim() == 1) {
        const double len = mesh_.vertex(cv[1]).x - a.x;
        return Point{(x.x - a.x) / len, 0.0};
    }
    const CellMap map = cell_map(c);
    const double det = map.jac[0][0] * map.jac[1][1] - map.jac[0][1] * map.jac[1][0];
    const double rx = x.x - a.x, ry = x.y - a.y;
    return Point{(map.jac[1][1] * rx - map.jac[0][1] * ry) / det,
                 (-map.jac[1][0] * rx + map.jac[0][0] * ry) / det};
}

double FeSpace::value_at(const Eigen::VectorXd& interior, const Point& x) const {
    const int c = mesh_.locate(x);
    return value_in_cell(interior, c, ref_point_of(c, x));
}

Eigen::VectorXd FeSpace::interpolate(const std::function<double(const Point&)>& f) const {
    Eigen::VectorXd coeffs(num_interior());
    for (int i = 0; i < num_interior(); ++i) {
        coeffs[i] = f(dof_point(interior_to_dof(i)));
    }
    return coeffs;
}

} // namespace dg0
