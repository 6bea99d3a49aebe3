#pragma once

#include <functional>
#include <vector>

#include "dg0/assembly.hpp"
#include "dg0/coefficients.hpp"
#include "dg0/fe_space.hpp"
#include "dg0/linalg.hpp"
#include "dg0/time_grid.hpp"

namespace dg0 {

/// Assembled spatial side of a dG(0) run: mass matrix, the reference
/// (identity-coefficient) stiffness fixing the discrete H1 geometry, and
/// the interval-averaged stiffness matrices.
struct DiscreteSystem {
    TimeGrid grid;
    SparseSpd mass;
    SparseSpd stiff_ref;
    std::vector<SparseSpd> stiff_avg;  // K_m for m = 1..M at index m-1

    int dofs() const { return static_cast<int>(mass.rows()); }
    int intervals() const { return grid.intervals(); }
    const SparseSpd& k_avg(int m) const { return stiff_avg.at(static_cast<size_t>(m) - 1); }
};

DiscreteSystem assemble_system(const FeSpace& space,
                               const CoefficientField& field,
                               const TimeGrid& grid,
                               int time_points = 4,
                               int quad_degree = -1);

/// One-dof surrogate with spectral value lambda(t): mass = [1],
/// reference stiffness = [1], averaged stiffness = interval Gauss
/// averages of lambda.
DiscreteSystem scalar_surrogate(const TimeGrid& grid,
                                const std::function<double(double)>& lambda,
                                int time_points = 4);

} // namespace dg0
