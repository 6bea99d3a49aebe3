#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dg0/dg0_solver.hpp"

namespace dg0 {

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

/// The maximal-regularity functionals of a solved run: per-interval
/// operator and jump norms, their p-aggregates, the data norms they are
/// tested against and the resulting regularity ratio
/// aggregate / (ln(T/k) * data).
struct RegularityReport {
    double p = 2.0;
    std::vector<double> a_u_norms;   // ||A_{kh,m} u_m||_{L2}, m = 1..M
    std::vector<double> jump_norms;  // ||[u]_{m-1}||_{L2}
    double agg_inf = 0.0;            // max_m (a_u + jump/k)
    double agg_1 = 0.0;              // sum_m (k a_u + jump)
    double agg_p = 0.0;              // requested p
    double max_a_u = 0.0;            // max_m ||A_{kh,m} u_m||
    double f_norm = 0.0;             // ||f||_{L^p(I;L2)}
    double u0_norm = 0.0;            // ||P_h u0||_{L2}
    double max_a_u0 = 0.0;           // max_m ||A_{kh,m} P_h u0||
    double log_factor = 0.0;         // ln(T/k)
    double ratio = 0.0;
};

RegularityReport regularity_functionals(const ParabolicProblem& problem,
                                        const DiscreteSystem& system, const DgSolution& sol,
                                        double p);

struct ErrorNormOptions {
    int time_points = 4;    // Gauss points per interval for L^p in time
    int linf_samples = 5;   // interior samples per interval (plus endpoints)
    int space_degree = -1;  // cell quadrature degree; -1 = 2r + 4
};

struct NormPair {
    double lp = 0.0;
    double linf = 0.0;
};

/// ||u - u_kh|| in L^p(I;L2) and L^inf(I;L2); requires the exact
/// solution.
NormPair error_norms(const ParabolicProblem& problem, const DgSolution& sol, double p,
                     const ErrorNormOptions& opts = {});

/// Piecewise-constant-in-time trajectory; pieces are spatial functions on
/// the intervals of the grid (left-continuous, like DgSolution).
struct PwcTrajectory {
    TimeGrid grid;
    std::vector<std::function<double(const Point&)>> pieces;
};

/// Right-endpoint interpolant pi_k u: piece m is x -> u(t_m, x).
PwcTrajectory pik_interpolant(const std::function<double(double, const Point&)>& u,
                              const TimeGrid& grid);

/// ||u - traj||_{L^p(I;L2)} for the problem's exact solution against an
/// arbitrary trajectory (pi_k u, pi_k R_h u, ...).
double trajectory_deviation(const ParabolicProblem& problem, const PwcTrajectory& trajectory,
                            double p, const ErrorNormOptions& opts = {});

/// ||u - u_kh|| / [ln(T/k) (||u - pi_k u|| + ||u - R_h(.) u||)] in
/// L^p(I;L2); not applicable on reproduction problems where the
/// denominator degenerates.
struct BestApproxReport {
    bool applicable = false;
    double ratio = 0.0;
    double numerator = 0.0;
    double pik_term = 0.0;
    double ritz_term = 0.0;
    double log_factor = 0.0;
};
BestApproxReport best_approx_ratio(const ParabolicProblem& problem, const DgSolution& sol,
                                   double p, const ErrorNormOptions& opts = {});

/// sup_{t in I_m} ||A_h(t) A_{kh,m}^{-1}||_{L2->L2} over a per-interval
/// sample set (endpoints included).
struct StabilityAudit {
    std::vector<double> per_interval;
    double overall = 0.0;
};
StabilityAudit stability_lemma_audit(const FeSpace& space, const CoefficientField& field,
                                     const TimeGrid& grid, int t_samples_per_interval = 5,
                                     int time_points = 4);

/// One refinement level of a convergence study.
struct ConvergenceRow {
    int cells = 0;
    int intervals = 0;
    double h = 0.0;
    double k = 0.0;
    double err_lp = 0.0;
    double err_linf = 0.0;
    bool near_zero = false;  // reproduction-level errors, excluded from fits
};
struct ConvergenceTable {
    double p = 2.0;
    char fit_variable = 'h';
    std::vector<ConvergenceRow> rows;
    std::optional<double> order_lp;    // slopes require >= 3 usable rows
    std::optional<double> order_linf;
};

using ProblemFamily = std::function<ParabolicProblem(int cells, int intervals)>;
struct RefinementPlan {
    std::vector<std::pair<int, int>> levels;  // (cells, intervals)
    char fit_variable = 'h';                  // 'h' or 'k'
};
ConvergenceTable convergence_study(const ProblemFamily& family, const RefinementPlan& plan,
                                   double p, const ErrorNormOptions& opts = {});

/// ||f||_{L^p(I;L2)} of the problem's rhs (quadrature in space and time);
/// falls back to the piecewise-constant averaged loads for weak-form rhs.
double rhs_bochner_norm(const ParabolicProblem& problem, const DiscreteSystem& system,
                        const DgSolution& sol, double p, const ErrorNormOptions& opts = {});

/// Spatial L2 norm of a plain function by cell quadrature.
double l2_norm_of(const FeSpace& space, const std::function<double(const Point&)>& f,
                  int quad_degree = -1);

} // namespace dg0
