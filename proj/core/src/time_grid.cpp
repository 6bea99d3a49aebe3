#include "dg0/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "dg0/errors.hpp"

namespace dg0 {

namespace {
// Relative slack absorbing floating-point node construction in the
// condition comparisons.
constexpr double kRelSlack = 1e-12;
} // namespace

TimeGrid TimeGrid::uniform(double final_time, int intervals) {
    if (!(final_time > 0.0)) {
        throw InvalidArgument("TimeGrid::uniform: final time must be positive");
    }
    if (intervals < 1) {
        throw InvalidArgument("TimeGrid::uniform: need at least one interval");
    }
    std::vector<double> nodes(static_cast<size_t>(intervals) + 1);
    for (int m = 0; m <= intervals; ++m) {
        nodes[static_cast<size_t>(m)] =
            final_time * static_cast<double>(m) / static_cast<double>(intervals);
    }
    nodes.back() = final_time;
    return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::graded(double final_time, int intervals, double gamma) {
    if (!(final_time > 0.0)) {
        throw InvalidArgument("TimeGrid::graded: final time must be positive");
    }
    if (intervals < 1) {
        throw InvalidArgument("TimeGrid::graded: need at least one interval");
    }
    if (!(gamma >= 1.0)) {
        throw InvalidArgument("TimeGrid::graded: gamma must be >= 1");
    }
    std::vector<double> nodes(static_cast<size_t>(intervals) + 1);
    for (int m = 0; m <= intervals; ++m) {
        const double s = static_cast<double>(m) / static_cast<double>(intervals);
        nodes[static_cast<size_t>(m)] = final_time * std::pow(s, gamma);
    }
    nodes.front() = 0.0;
    nodes.back() = final_time;
    return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) {
        throw InvalidArgument("TimeGrid::from_nodes: need at least two nodes");
    }
    if (nodes.front() != 0.0) {
        throw InvalidArgument("TimeGrid::from_nodes: first node must be 0");
    }
    for (size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw InvalidArgument("TimeGrid::from_nodes: nodes must increase strictly");
        }
    }
    return TimeGrid(std::move(nodes));
}

double TimeGrid::node(int m) const {
    if (m < 0 || m > intervals()) {
        throw InvalidArgument("TimeGrid::node: index out of range");
    }
    return nodes_[static_cast<size_t>(m)];
}

double TimeGrid::step(int m) const {
    if (m < 1 || m > intervals()) {
        throw InvalidArgument("TimeGrid::step: index out of range");
    }
    return nodes_[static_cast<size_t>(m)] - nodes_[static_cast<size_t>(m) - 1];
}

double TimeGrid::max_step() const {
    double k = 0.0;
    for (int m = 1; m <= intervals(); ++m) k = std::max(k, step(m));
    return k;
}

double TimeGrid::min_step() const {
    double k = step(1);
    for (int m = 2; m <= intervals(); ++m) k = std::min(k, step(m));
    return k;
}

int TimeGrid::interval_of(double t) const {
    if (t < 0.0 || t > final_time() * (1.0 + kRelSlack)) {
        throw InvalidArgument("TimeGrid::interval_of: time outside [0, T]");
    }
    if (t <= 0.0) return 0;
    // I_m = (t_{m-1}, t_m]: first node >= t.
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
    const auto idx = static_cast<int>(it - nodes_.begin());
    return std::min(idx, intervals());
}

ConditionReport validate_conditions(const TimeGrid& grid, double c, double beta, double kappa) {
    ConditionReport report;
    const int M = grid.intervals();
    const double T = grid.final_time();
    report.max_step = grid.max_step();
    report.min_step = grid.min_step();
    report.step_spread = report.max_step - report.min_step;

    const double slack = kRelSlack * T;
    report.min_step_bound = report.min_step >= c * std::pow(report.max_step, beta) - slack;
    report.max_step_bound = report.max_step <= 0.25 * T + slack;

    report.min_ratio = 1.0;
    report.max_ratio = 1.0;
    for (int m = 1; m < M; ++m) {
        const double ratio = grid.step(m) / grid.step(m + 1);
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    report.neighbor_ratio_bound =
        report.min_ratio >= 1.0 / kappa - kRelSlack && report.max_ratio <= kappa + kRelSlack;
    return report;
}

} // namespace dg0
