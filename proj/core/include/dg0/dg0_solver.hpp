#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dg0/coefficients.hpp"
#include "dg0/fe_space.hpp"
#include "dg0/system.hpp"
#include "dg0/time_grid.hpp"

namespace dg0 {

/// Space-time evaluators of a manufactured or corpus problem. rhs may be
/// given pointwise (f) or directly in tested weak form (weak_rhs, used by
/// discrete-reproduction problems whose strong rhs is distributional).
struct ParabolicProblem {
    FeSpace space;
    TimeGrid grid;
    CoefficientField field;

    std::function<double(double, const Point&)> rhs;  // f(t, x)
    std::function<Eigen::VectorXd(const DiscreteSystem&, int)> weak_rhs;

    std::function<double(const Point&)> u0;
    std::optional<Eigen::VectorXd> u0_coeffs;  // takes precedence over u0

    // optional exact solution data for manufactured runs
    std::function<double(double, const Point&)> exact;
    std::function<double(double, const Point&)> exact_dt;
    std::function<Point(double, const Point&)> exact_grad;

    int time_points = 4;  // Gauss points per interval for averages
    std::string id;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Time evaluation convention is left-continuous: value at t in
/// (t_{m-1}, t_m] is the interval value u_m, value at t = 0 is the
/// projected initial datum.
struct DgSolution {
    Eigen::VectorXd initial;               // P_h u0
    std::vector<Eigen::VectorXd> values;   // u_m, m = 1..M
    std::vector<Eigen::VectorXd> loads;    // averaged load vectors b_m

    const Eigen::VectorXd& at_interval(int m) const {
        return m == 0 ? initial : values.at(static_cast<size_t>(m) - 1);
    }
    int intervals() const { return static_cast<int>(values.size()); }
};

/// How the elliptic part and the load enter each step: interval averages
/// (the weakly consistent scheme) or right-endpoint evaluation (classic
/// backward Euler, benchmark contrast only).
enum class TimeScheme { Dg0Average, BackwardEulerEndpoint };

/// Averaged load vector of interval m tested against the interior basis.
Eigen::VectorXd average_load(const ParabolicProblem& problem, const DiscreteSystem& system,
                             int m);

/// One step: solves (M + k_m K_m) u_m = M u_prev + k_m b_m.
Eigen::VectorXd dg0_step(const DiscreteSystem& system, int m, const Eigen::VectorXd& u_prev,
                         const Eigen::VectorXd& load);

/// Projected initial vector P_h u0 of the problem.
Eigen::VectorXd initial_vector(const ParabolicProblem& problem);

DgSolution dg0_solve(const ParabolicProblem& problem, const DiscreteSystem& system);

struct SolveResult {
    DiscreteSystem system;
    DgSolution solution;
};
/// Assembles the system (per the scheme) and runs all steps.
SolveResult dg0_solve(const ParabolicProblem& problem,
                      TimeScheme scheme = TimeScheme::Dg0Average);

/// Jump vectors [u]_{m-1} = u_m - u_{m-1} for m = 1..M ([u]_0 against
/// the projected initial datum).
std::vector<Eigen::VectorXd> jumps(const DgSolution& sol);

/// Max over m of the mass-weighted norm of
///   [u]_{m-1}/k_m + M^{-1} K_m u_m - M^{-1} b_m,
/// divided by a data scale (1 + max operator/load norms).
double residual_identity_check(const DiscreteSystem& system, const DgSolution& sol);

/// Max over intervals and interior test functions of |B(u - u_kh, phi)|
/// with the space-time form B evaluated by quadrature at the given order;
/// requires the exact solution with time derivative and gradient.
double galerkin_orthogonality_check(const ParabolicProblem& problem,
                                    const DiscreteSystem& system, const DgSolution& sol,
                                    int quad_points);

} // namespace dg0
