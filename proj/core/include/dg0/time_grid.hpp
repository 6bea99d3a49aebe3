#pragma once

#include <span>
#include <string>
#include <vector>

namespace dg0 {

/// Temporal partition 0 = t_0 < t_1 < ... < t_M = T of (0, T].
///
/// Interval m = 1..M is I_m = (t_{m-1}, t_m] with step k_m = t_m - t_{m-1}.
/// Immutable after construction; extremal steps are recomputed from the
/// nodes, never cached through mutation.
class TimeGrid {
public:
    /// Uniform partition with M equal steps.
    static TimeGrid uniform(double final_time, int intervals);

    /// Graded partition t_m = T (m/M)^gamma, gamma >= 1 (gamma = 1 uniform).
    static TimeGrid graded(double final_time, int intervals, double gamma);

    /// Adopt explicit nodes; must start at 0 and increase strictly.
    static TimeGrid from_nodes(std::vector<double> nodes);

    int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
    double final_time() const { return nodes_.back(); }

    /// Node t_m, m = 0..M.
    double node(int m) const;
    /// Step k_m = t_m - t_{m-1}, m = 1..M.
    double step(int m) const;

    double max_step() const;
    double min_step() const;

    std::span<const double> nodes() const { return nodes_; }

    /// Index m with t in I_m = (t_{m-1}, t_m]; t = 0 maps to 0.
    int interval_of(double t) const;

private:
    explicit TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}

    std::vector<double> nodes_;
};

/// Outcome of checking the step-size conditions
///   (i)   k_min >= c k^beta
///   (ii)  kappa^{-1} <= k_m / k_{m+1} <= kappa for all m
///   (iii) k <= T/4
/// plus the measured quantities the checks (and downstream contraction
/// hypotheses) consume. Validation reports, it never throws.
struct ConditionReport {
    bool min_step_bound = false;
    bool neighbor_ratio_bound = false;
    bool max_step_bound = false;
    double min_ratio = 1.0;    ///< min over m of k_m / k_{m+1}
    double max_ratio = 1.0;    ///< max over m of k_m / k_{m+1}
    double step_spread = 0.0;  ///< k - k_min
    double max_step = 0.0;
    double min_step = 0.0;

    bool all() const { return min_step_bound && neighbor_ratio_bound && max_step_bound; }
};

ConditionReport validate_conditions(const TimeGrid& grid, double c, double beta, double kappa);

} // namespace dg0
