#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>

#include "dg0/coefficients.hpp"
#include "dg0/fe_space.hpp"
#include "dg0/linalg.hpp"
#include "dg0/time_grid.hpp"

namespace dg0 {

/// Mass matrix on the interior dofs, M_ij = (phi_j, phi_i).
SparseSpd assemble_mass(const FeSpace& space);

/// Mass matrix over all dofs including boundary ones (diagnostics only).
SparseSpd assemble_mass_full(const FeSpace& space);

/// Stiffness K(t)_ij = sum_pq (a_pq(t,.) d_p phi_j, d_q phi_i). The space
/// quadrature is exact for degree 2r-2 polynomial integrands plus two
/// extra orders for non-polynomial coefficients; quad_degree overrides.
SparseSpd assemble_stiffness(const FeSpace& space,
                             const CoefficientField& field,
                             double t,
                             int quad_degree = -1);

/// Interval average (1/k_m) int_{I_m} K(t) dt realized by averaging the
/// coefficients with a Gauss rule in time (time_points points; exact when
/// every a_ij is polynomial of degree <= 2 time_points - 1 in t).
SparseSpd assemble_averaged_stiffness(const FeSpace& space,
                                      const CoefficientField& field,
                                      const TimeGrid& grid,
                                      int m,
                                      int time_points = 4,
                                      int quad_degree = -1);

/// Load vector b_i = (f, phi_i) on interior dofs.
Eigen::VectorXd assemble_load(const FeSpace& space,
                              const std::function<double(const Point&)>& f,
                              int quad_degree = -1);

/// L2 projection: solves M p = b with b_i = (v, phi_i).
Eigen::VectorXd l2_project(const FeSpace& space,
                           const std::function<double(const Point&)>& v,
                           int quad_degree = -1);

/// Ritz projection with instantaneous coefficients: a(t; R_h v, chi) =
/// a(t; v, chi) for all chi. Needs the gradient of v.
Eigen::VectorXd ritz_project(const FeSpace& space,
                             const CoefficientField& field,
                             double t,
                             const std::function<Point(const Point&)>& grad_v,
                             int quad_degree = -1);

/// Weak elliptic action of a known gradient field: b_i = sum_pq
/// (a_pq(t,.) d_p v, d_q phi_i). This is the right-hand side of the Ritz
/// systems and the a-term of the space-time form for non-discrete
/// arguments.
Eigen::VectorXd assemble_flux_load(const FeSpace& space,
                                   const CoefficientField& field,
                                   double t,
                                   const std::function<Point(const Point&)>& grad_v,
                                   int quad_degree = -1);

/// Ritz projection with interval-averaged coefficients a_{k,m}.
Eigen::VectorXd ritz_project_avg(const FeSpace& space,
                                 const CoefficientField& field,
                                 const TimeGrid& grid,
                                 int m,
                                 const std::function<Point(const Point&)>& grad_v,
                                 int time_points = 4,
                                 int quad_degree = -1);

/// Coordinate (COO) text export: "row col value" per line, 17 significant
/// digits.
void write_coo(const SparseSpd& a, std::ostream& out);

} // namespace dg0
