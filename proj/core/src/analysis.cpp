#include "dg0/analysis.hpp"

#include <cmath>

#include "dg0/errors.hpp"
#include "dg0/quadrature.hpp"

namespace dg0 {

namespace {

int space_degree_or_default(const FeSpace& space, int requested) {
    return requested == -1 ? 2 * space.degree() + 4 : requested;
}

// L2 norm of (f - optional FE part - optional second function) over the mesh
double spatial_l2(const FeSpace& space, int quad_degree,
                  const std::function<double(const Point&)>& f,
                  const Eigen::VectorXd* fe_coeffs,
                  const std::function<double(const Point&)>* g) {
    double acc = 0.0;
    const int dim = space.dim();
    std::vector<Point> points;
    std::vector<double> weights;
    if (dim == 1) {
        const Quad1D rule = segment_rule(quad_degree);
        for (int i = 0; i < rule.size(); ++i) {
            points.push_back(Point{rule.points[static_cast<size_t>(i)], 0.0});
            weights.push_back(rule.weights[static_cast<size_t>(i)]);
        }
    } else {
        const QuadTri rule = triangle_rule(quad_degree);
        points = rule.points;
        weights = rule.weights;
    }
    for (int c = 0; c < space.mesh().num_cells(); ++c) {
        const FeSpace::CellMap map = space.cell_map(c);
        for (size_t q = 0; q < points.size(); ++q) {
            const Point x = space.map_to_global(map, points[q]);
            double v = f ? f(x) : 0.0;
            if (fe_coeffs) v -= space.value_in_cell(*fe_coeffs, c, points[q]);
            if (g) v -= (*g)(x);
            acc += weights[q] * map.det_abs * v * v;
        }
    }
    return std::sqrt(std::max(0.0, acc));
}

// Temporal sample points for L^inf norms: endpoints plus interior samples.
std::vector<double> linf_samples(const TimeGrid& grid, int m, int interior) {
    std::vector<double> ts;
    const double t0 = grid.node(m - 1);
    const double k = grid.step(m);
    const int total = interior + 2;
    for (int i = 0; i < total; ++i) {
        ts.push_back(t0 + k * static_cast<double>(i) / (total - 1));
    }
    return ts;
}

struct PNorm {
    // accumulates int |e(t)|^p dt per interval for finite p, max otherwise
    double p;
    double acc = 0.0;

    void add_weighted(double weight, double value) {
        if (std::isinf(p)) {
            acc = std::max(acc, value);
        } else {
            acc += weight * std::pow(value, p);
        }
    }
    double finish() const { return std::isinf(p) ? acc : std::pow(acc, 1.0 / p); }
};

} // namespace

double l2_norm_of(const FeSpace& space, const std::function<double(const Point&)>& f,
                  int quad_degree) {
    return spatial_l2(space, space_degree_or_default(space, quad_degree), f, nullptr, nullptr);
}

RegularityReport regularity_functionals(const ParabolicProblem& problem,
                                        const DiscreteSystem& system, const DgSolution& sol,
                                        double p) {
    if (!(p >= 1.0)) {
        throw InvalidArgument("regularity_functionals: p must lie in [1, inf]");
    }
    RegularityReport report;
    report.p = p;
    const int M = system.intervals();
    report.log_factor = std::log(system.grid.final_time() / system.grid.max_step());
    if (system.dofs() == 0) return report;

    SpdSolver mass(system.mass);
    auto mnorm = [&](const Eigen::VectorXd& v) { return energy_norm(system.mass, v); };

    PNorm agg{p};
    const bool has_u0 = mnorm(sol.initial) > 0.0;
    report.u0_norm = mnorm(sol.initial);
    for (int m = 1; m <= M; ++m) {
        const double k = system.grid.step(m);
        const Eigen::VectorXd au = mass.solve(system.k_avg(m) * sol.at_interval(m));
        const double a_u = mnorm(au);
        const double jump = mnorm(sol.at_interval(m) - sol.at_interval(m - 1));
        report.a_u_norms.push_back(a_u);
        report.jump_norms.push_back(jump);
        report.max_a_u = std::max(report.max_a_u, a_u);
        report.agg_inf = std::max(report.agg_inf, a_u + jump / k);
        report.agg_1 += k * a_u + jump;
        if (std::isinf(p)) {
            agg.add_weighted(0.0, a_u + jump / k);
        } else {
            agg.acc += k * (std::pow(a_u, p) + std::pow(jump / k, p));
        }
        if (has_u0) {
            report.max_a_u0 =
                std::max(report.max_a_u0, mnorm(mass.solve(system.k_avg(m) * sol.initial)));
        }
    }
    report.agg_p = agg.finish();

    report.f_norm = rhs_bochner_norm(problem, system, sol, p);
    double data = report.f_norm;
    if (has_u0) data += std::isinf(p) ? report.max_a_u0 : report.u0_norm;
    report.ratio = data > 0.0 ? report.agg_p / (report.log_factor * data) : 0.0;
    return report;
}

double rhs_bochner_norm(const ParabolicProblem& problem, const DiscreteSystem& system,
                        const DgSolution& sol, double p, const ErrorNormOptions& opts) {
    const TimeGrid& grid = system.grid;
    const int sdeg = space_degree_or_default(problem.space, opts.space_degree);
    PNorm agg{p};
    if (!problem.rhs) {
        // weak rhs: use the piecewise-constant averaged data f_{k,m}
        if (system.dofs() == 0) return 0.0;
        SpdSolver mass(system.mass);
        for (int m = 1; m <= grid.intervals(); ++m) {
            const double fk = energy_norm(system.mass,
                                          mass.solve(sol.loads.at(static_cast<size_t>(m) - 1)));
            agg.add_weighted(grid.step(m), fk);
        }
        return agg.finish();
    }
    const Quad1D rule = gauss_legendre_01(opts.time_points);
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double t0 = grid.node(m - 1);
        const double k = grid.step(m);
        if (std::isinf(p)) {
            for (const double t : linf_samples(grid, m, opts.linf_samples)) {
                auto f_t = [&](const Point& x) { return problem.rhs(t, x); };
                agg.add_weighted(0.0, spatial_l2(problem.space, sdeg, f_t, nullptr, nullptr));
            }
        } else {
            for (int q = 0; q < rule.size(); ++q) {
                const double t = t0 + k * rule.points[static_cast<size_t>(q)];
                auto f_t = [&](const Point& x) { return problem.rhs(t, x); };
                agg.add_weighted(k * rule.weights[static_cast<size_t>(q)],
                                 spatial_l2(problem.space, sdeg, f_t, nullptr, nullptr));
            }
        }
    }
    return agg.finish();
}

NormPair error_norms(const ParabolicProblem& problem, const DgSolution& sol, double p,
                     const ErrorNormOptions& opts) {
    if (!problem.exact) {
        throw InvalidArgument("error_norms: exact solution required");
    }
    const TimeGrid& grid = problem.grid;
    const int sdeg = space_degree_or_default(problem.space, opts.space_degree);
    const Quad1D rule = gauss_legendre_01(opts.time_points);

    NormPair out;
    PNorm agg{p};
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double t0 = grid.node(m - 1);
        const double k = grid.step(m);
        const Eigen::VectorXd& um = sol.at_interval(m);
        if (!std::isinf(p)) {
            for (int q = 0; q < rule.size(); ++q) {
                const double t = t0 + k * rule.points[static_cast<size_t>(q)];
                auto u_t = [&](const Point& x) { return problem.exact(t, x); };
                agg.add_weighted(k * rule.weights[static_cast<size_t>(q)],
                                 spatial_l2(problem.space, sdeg, u_t, &um, nullptr));
            }
        }
        for (const double t : linf_samples(grid, m, opts.linf_samples)) {
            auto u_t = [&](const Point& x) { return problem.exact(t, x); };
            out.linf =
                std::max(out.linf, spatial_l2(problem.space, sdeg, u_t, &um, nullptr));
        }
    }
    out.lp = std::isinf(p) ? out.linf : agg.finish();
    return out;
}

PwcTrajectory pik_interpolant(const std::function<double(double, const Point&)>& u,
                              const TimeGrid& grid) {
    if (!u) {
        throw InvalidArgument("pik_interpolant: exact solution required");
    }
    PwcTrajectory traj{grid, {}};
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double tm = grid.node(m);
        traj.pieces.push_back([u, tm](const Point& x) { return u(tm, x); });
    }
    return traj;
}

double trajectory_deviation(const ParabolicProblem& problem, const PwcTrajectory& trajectory,
                            double p, const ErrorNormOptions& opts) {
    if (!problem.exact) {
        throw InvalidArgument("trajectory_deviation: exact solution required");
    }
    if (trajectory.pieces.size() != static_cast<size_t>(problem.grid.intervals())) {
        throw InvalidArgument("trajectory_deviation: trajectory does not match the grid");
    }
    const TimeGrid& grid = problem.grid;
    const int sdeg = space_degree_or_default(problem.space, opts.space_degree);
    const Quad1D rule = gauss_legendre_01(opts.time_points);
    PNorm agg{p};
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double t0 = grid.node(m - 1);
        const double k = grid.step(m);
        const auto& piece = trajectory.pieces[static_cast<size_t>(m) - 1];
        if (std::isinf(p)) {
            for (const double t : linf_samples(grid, m, opts.linf_samples)) {
                auto u_t = [&](const Point& x) { return problem.exact(t, x); };
                agg.add_weighted(0.0, spatial_l2(problem.space, sdeg, u_t, nullptr, &piece));
            }
        } else {
            for (int q = 0; q < rule.size(); ++q) {
                const double t = t0 + k * rule.points[static_cast<size_t>(q)];
                auto u_t = [&](const Point& x) { return problem.exact(t, x); };
                agg.add_weighted(k * rule.weights[static_cast<size_t>(q)],
                                 spatial_l2(problem.space, sdeg, u_t, nullptr, &piece));
            }
        }
    }
    return agg.finish();
}

BestApproxReport best_approx_ratio(const ParabolicProblem& problem, const DgSolution& sol,
                                   double p, const ErrorNormOptions& opts) {
    if (!problem.exact || !problem.exact_grad) {
        throw InvalidArgument("best_approx_ratio: exact solution with gradient required");
    }
    BestApproxReport report;
    const TimeGrid& grid = problem.grid;
    const int sdeg = space_degree_or_default(problem.space, opts.space_degree);
    const Quad1D rule = gauss_legendre_01(opts.time_points);

    const NormPair err = error_norms(problem, sol, p, opts);
    report.numerator = std::isinf(p) ? err.linf : err.lp;
    report.pik_term = trajectory_deviation(problem, pik_interpolant(problem.exact, grid), p, opts);

    // Ritz deviation ||u - R_h(t) u|| aggregated in time; one elliptic
    // solve per temporal evaluation point.
    PNorm agg{p};
    auto ritz_error_at = [&](double t) {
        const Eigen::VectorXd rh = ritz_project(
            problem.space, problem.field, t,
            [&](const Point& x) { return problem.exact_grad(t, x); });
        auto u_t = [&](const Point& x) { return problem.exact(t, x); };
        return spatial_l2(problem.space, sdeg, u_t, &rh, nullptr);
    };
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double t0 = grid.node(m - 1);
        const double k = grid.step(m);
        if (std::isinf(p)) {
            for (const double t : linf_samples(grid, m, opts.linf_samples)) {
                agg.add_weighted(0.0, ritz_error_at(t));
            }
        } else {
            for (int q = 0; q < rule.size(); ++q) {
                const double t = t0 + k * rule.points[static_cast<size_t>(q)];
                agg.add_weighted(k * rule.weights[static_cast<size_t>(q)], ritz_error_at(t));
            }
        }
    }
    report.ritz_term = agg.finish();

    report.log_factor = std::log(grid.final_time() / grid.max_step());
    const double den = report.log_factor * (report.pik_term + report.ritz_term);
    report.applicable = den > 1e-14 * (1.0 + report.numerator);
    report.ratio = report.applicable ? report.numerator / den : 0.0;
    return report;
}

StabilityAudit stability_lemma_audit(const FeSpace& space, const CoefficientField& field,
                                     const TimeGrid& grid, int t_samples_per_interval,
                                     int time_points) {
    if (t_samples_per_interval < 2) {
        throw InvalidArgument("stability_lemma_audit: need at least 2 samples per interval");
    }
    StabilityAudit audit;
    if (space.num_interior() == 0) return audit;
    const SparseSpd mass = assemble_mass(space);
    SpdSolver mass_solver(mass);

    for (int m = 1; m <= grid.intervals(); ++m) {
        const SparseSpd k_avg =
            assemble_averaged_stiffness(space, field, grid, m, time_points);
        SpdSolver avg_solver(k_avg);
        double sup = 0.0;
        for (int s = 0; s < t_samples_per_interval; ++s) {
            const double t = grid.node(m - 1) +
                             grid.step(m) * static_cast<double>(s) / (t_samples_per_interval - 1);
            const SparseSpd k_t = assemble_stiffness(space, field, t);
            auto apply_b = [&](const Eigen::VectorXd& v) {
                return mass_solver.solve(k_t * avg_solver.solve(mass * v)).eval();
            };
            auto apply_badj = [&](const Eigen::VectorXd& v) {
                return avg_solver.solve(k_t * v).eval();
            };
            auto apply_c = [&](const Eigen::VectorXd& v) { return apply_badj(apply_b(v)); };
            auto inner = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                return u.dot(mass * v);
            };
            const double lambda =
                power_iteration_max_eig(space.num_interior(), apply_c, inner, 1e-11, 3000);
            sup = std::max(sup, std::sqrt(lambda));
        }
        audit.per_interval.push_back(sup);
        audit.overall = std::max(audit.overall, sup);
    }
    return audit;
}

ConvergenceTable convergence_study(const ProblemFamily& family, const RefinementPlan& plan,
                                   double p, const ErrorNormOptions& opts) {
    if (!family) {
        throw InvalidArgument("convergence_study: problem family required");
    }
    ConvergenceTable table;
    table.p = p;
    table.fit_variable = plan.fit_variable;
    for (const auto& [cells, intervals] : plan.levels) {
        ParabolicProblem problem = family(cells, intervals);
        const SolveResult run = dg0_solve(problem);
        const NormPair err = error_norms(problem, run.solution, p, opts);
        ConvergenceRow row;
        row.cells = cells;
        row.intervals = intervals;
        row.h = problem.space.mesh().max_diameter();
        row.k = problem.grid.max_step();
        row.err_lp = err.lp;
        row.err_linf = err.linf;
        row.near_zero = err.lp <= 1e-12 && err.linf <= 1e-12;
        table.rows.push_back(row);
    }

    auto fit = [&](auto error_of) -> std::optional<double> {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const ConvergenceRow& row : table.rows) {
            const double err = error_of(row);
            if (row.near_zero || err <= 0.0) continue;
            const double x = std::log(plan.fit_variable == 'h' ? row.h : row.k);
            const double y = std::log(err);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        if (n < 3) return std::nullopt;
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    table.order_lp = fit([](const ConvergenceRow& r) { return r.err_lp; });
    table.order_linf = fit([](const ConvergenceRow& r) { return r.err_linf; });
    return table;
}

} // namespace dg0
