#include "dg0/dg0_solver.hpp"

#include <cmath>

#include "dg0/errors.hpp"
#include "dg0/quadrature.hpp"

namespace dg0 {

namespace {

double mass_norm(const DiscreteSystem& system, const Eigen::VectorXd& v) {
    return energy_norm(system.mass, v);
}

} // namespace

Eigen::VectorXd average_load(const ParabolicProblem& problem, const DiscreteSystem& system,
                             int m) {
    if (m < 1 || m > system.intervals()) {
        throw InvalidArgument("average_load: interval index out of range");
    }
    if (problem.weak_rhs) {
        return problem.weak_rhs(system, m);
    }
    if (!problem.rhs) {
        return Eigen::VectorXd::Zero(system.dofs());
    }
    const Quad1D rule = gauss_legendre_01(problem.time_points);
    const double t0 = problem.grid.node(m - 1);
    const double k = problem.grid.step(m);
    auto f_avg = [&](const Point& x) {
        double v = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
            v += rule.weights[static_cast<size_t>(i)] *
                 problem.rhs(t0 + k * rule.points[static_cast<size_t>(i)], x);
        }
        return v;
    };
    return assemble_load(problem.space, f_avg);
}

Eigen::VectorXd dg0_step(const DiscreteSystem& system, int m, const Eigen::VectorXd& u_prev,
                         const Eigen::VectorXd& load) {
    if (m < 1 || m > system.intervals()) {
        throw InvalidArgument("dg0_step: interval index out of range");
    }
    if (system.dofs() == 0) return Eigen::VectorXd(0);
    const double k = system.grid.step(m);
    const SparseSpd lhs = system.mass + k * system.k_avg(m);
    SpdSolver solver(lhs);
    return solver.solve(system.mass * u_prev + k * load);
}

Eigen::VectorXd initial_vector(const ParabolicProblem& problem) {
    if (problem.u0_coeffs) {
        if (problem.u0_coeffs->size() != problem.space.num_interior()) {
            throw InvalidArgument("initial_vector: coefficient size mismatch");
        }
        return *problem.u0_coeffs;
    }
    if (!problem.u0) {
        return Eigen::VectorXd::Zero(problem.space.num_interior());
    }
    return l2_project(problem.space, problem.u0);
}

DgSolution dg0_solve(const ParabolicProblem& problem, const DiscreteSystem& system) {
    DgSolution sol;
    sol.initial = initial_vector(problem);
    sol.values.reserve(static_cast<size_t>(system.intervals()));
    sol.loads.reserve(static_cast<size_t>(system.intervals()));
    Eigen::VectorXd u = sol.initial;
    for (int m = 1; m <= system.intervals(); ++m) {
        sol.loads.push_back(average_load(problem, system, m));
        u = dg0_step(system, m, u, sol.loads.back());
        sol.values.push_back(u);
    }
    return sol;
}

SolveResult dg0_solve(const ParabolicProblem& problem, TimeScheme scheme) {
    DiscreteSystem system =
        assemble_system(problem.space, problem.field, problem.grid, problem.time_points);
    if (scheme == TimeScheme::BackwardEulerEndpoint) {
        // endpoint evaluation of coefficients and loads instead of averages
        for (int m = 1; m <= problem.grid.intervals(); ++m) {
            system.stiff_avg[static_cast<size_t>(m) - 1] =
                assemble_stiffness(problem.space, problem.field, problem.grid.node(m));
        }
        ParabolicProblem endpoint = problem;
        if (problem.rhs) {
            endpoint.weak_rhs = [&problem](const DiscreteSystem& sys, int m) {
                const double t = sys.grid.node(m);
                return assemble_load(problem.space,
                                     [&](const Point& x) { return problem.rhs(t, x); });
            };
        }
        DgSolution sol = dg0_solve(endpoint, system);
        return {std::move(system), std::move(sol)};
    }
    DgSolution sol = dg0_solve(problem, system);
    return {std::move(system), std::move(sol)};
}

std::vector<Eigen::VectorXd> jumps(const DgSolution& sol) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(sol.intervals()));
    for (int m = 1; m <= sol.intervals(); ++m) {
        out.push_back(sol.at_interval(m) - sol.at_interval(m - 1));
    }
    return out;
}

double residual_identity_check(const DiscreteSystem& system, const DgSolution& sol) {
    if (system.dofs() == 0) return 0.0;
    SpdSolver mass(system.mass);
    double worst = 0.0;
    double scale = 1.0;
    for (int m = 1; m <= system.intervals(); ++m) {
        const double k = system.grid.step(m);
        const Eigen::VectorXd au = mass.solve(system.k_avg(m) * sol.at_interval(m));
        const Eigen::VectorXd f = mass.solve(sol.loads.at(static_cast<size_t>(m) - 1));
        const Eigen::VectorXd jump = (sol.at_interval(m) - sol.at_interval(m - 1)) / k;
        worst = std::max(worst, mass_norm(system, jump + au - f));
        scale = std::max(scale, 1.0 + mass_norm(system, au) + mass_norm(system, f));
    }
    return worst / scale;
}

double galerkin_orthogonality_check(const ParabolicProblem& problem,
                                    const DiscreteSystem& system, const DgSolution& sol,
                                    int quad_points) {
    if (!problem.exact || !problem.exact_dt || !problem.exact_grad) {
        throw InvalidArgument(
            "galerkin_orthogonality_check: exact solution with derivatives required");
    }
    if (quad_points < 1) {
        throw InvalidArgument("galerkin_orthogonality_check: need at least one point");
    }
    const Quad1D rule = gauss_legendre_01(quad_points);
    const FeSpace& space = problem.space;
    if (space.num_interior() == 0) return 0.0;
    // One space rule for both sides of the a-term so that discrete
    // arguments cancel exactly.
    const int space_degree = 2 * space.degree() + quad_points;
    double worst = 0.0;

    for (int m = 1; m <= system.intervals(); ++m) {
        const double t0 = problem.grid.node(m - 1);
        const double k = problem.grid.step(m);

        // B(u, phi) restricted to I_m: int (u_t, phi) + a(t; u, phi) dt,
        // plus the initial pairing on the first interval (u smooth: no
        // jump terms).
        Eigen::VectorXd lhs = Eigen::VectorXd::Zero(space.num_interior());
        for (int q = 0; q < rule.size(); ++q) {
            const double t = t0 + k * rule.points[static_cast<size_t>(q)];
            const double w = k * rule.weights[static_cast<size_t>(q)];
            lhs += w * assemble_load(
                           space, [&](const Point& x) { return problem.exact_dt(t, x); },
                           space_degree);
            lhs += w * assemble_flux_load(
                           space, problem.field, t,
                           [&](const Point& x) { return problem.exact_grad(t, x); },
                           space_degree);
        }
        if (m == 1) {
            lhs += assemble_load(
                space, [&](const Point& x) { return problem.exact(0.0, x); }, space_degree);
        }

        // B(u_kh, phi) restricted to I_m for piecewise-constant u_kh.
        const SparseSpd k_check = assemble_averaged_stiffness(space, problem.field, problem.grid,
                                                              m, quad_points, space_degree);
        Eigen::VectorXd rhs = k * (k_check * sol.at_interval(m));
        if (m == 1) {
            rhs += system.mass * sol.at_interval(1);
        } else {
            rhs += system.mass * (sol.at_interval(m) - sol.at_interval(m - 1));
        }

        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace dg0
