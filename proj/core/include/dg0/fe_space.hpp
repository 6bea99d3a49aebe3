#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "dg0/mesh.hpp"

namespace dg0 {

/// Continuous Lagrange finite element space of degree r in {1, 2} on a
/// 1D/2D mesh, with homogeneous Dirichlet conditions imposed by dof
/// elimination. Coefficient vectors seen by assembly and solvers live on
/// the interior dofs only.
///
/// Dof layout: vertex dofs first (ids equal vertex ids), then for r = 2
/// one midpoint dof per cell (1D) or per edge (2D).
class FeSpace {
public:
    FeSpace(Mesh mesh, int degree);

    const Mesh& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int dim() const { return mesh_.dim(); }

    int num_dofs() const { return static_cast<int>(dof_points_.size()); }
    int num_interior() const { return num_interior_; }
    bool is_boundary_dof(int dof) const { return interior_index_[static_cast<size_t>(dof)] < 0; }
    /// Interior index of a dof, -1 for eliminated boundary dofs.
    int interior_index(int dof) const { return interior_index_[static_cast<size_t>(dof)]; }
    int interior_to_dof(int i) const { return interior_dofs_[static_cast<size_t>(i)]; }
    const Point& dof_point(int dof) const { return dof_points_[static_cast<size_t>(dof)]; }

    int dofs_per_cell() const;
    int cell_dof(int c, int local) const {
        return cell_dofs_[static_cast<size_t>(c) * dofs_per_cell() + local];
    }

    /// Reference-element shape functions and gradients, ordered to match
    /// cell_dof.
    void shape_values(const Point& ref, double* out) const;
    void shape_ref_grads(const Point& ref, Point* out) const;

    /// Affine cell geometry: x = origin + J ref.
    struct CellMap {
        Point origin;
        double jac[2][2] = {{0, 0}, {0, 0}};
        double inv_t[2][2] = {{0, 0}, {0, 0}};  // J^{-T}
        double det_abs = 0.0;                   // 1D: cell length
    };
    CellMap cell_map(int c) const;
    Point map_to_global(const CellMap& map, const Point& ref) const;

    /// Value of the FE function with the given interior coefficients at a
    /// reference point of cell c (boundary dofs contribute zero).
    double value_in_cell(const Eigen::VectorXd& interior, int c, const Point& ref) const;
    Point gradient_in_cell(const Eigen::VectorXd& interior, int c, const Point& ref) const;

    /// Global evaluation via point location.
    double value_at(const Eigen::VectorXd& interior, const Point& x) const;
    Point gradient_at(const Eigen::VectorXd& interior, const Point& x) const;

    /// Nodal interpolation into the interior dofs.
    Eigen::VectorXd interpolate(const std::function<double(const Point&)>& f) const;

private:
    Mesh mesh_;
    int degree_;
    std::vector<Point> dof_points_;
    std::vector<int> cell_dofs_;
    std::vector<int> interior_index_;
    std::vector<int> interior_dofs_;
    int num_interior_ = 0;

    Point ref_point_of(int c, const Point& x) const;
};

} // namespace dg0
