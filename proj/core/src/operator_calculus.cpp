#include "dg0/operator_calculus.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "dg0/errors.hpp"

namespace dg0 {

namespace {

void check_budget(const OperatorCalculus& calc, long budget) {
    const long work = static_cast<long>(calc.intervals()) * calc.dofs();
    if (work > budget) {
        throw ResourceLimit("operator audit: M * dofs exceeds block budget");
    }
}

double fitted_omega(const ModulusReport* modulus, double separation) {
    if (!modulus || modulus->all_zero) return 0.0;
    return std::exp(modulus->fitted_log_c) * std::pow(separation, modulus->fitted_gamma);
}

} // namespace

OperatorCalculus::OperatorCalculus(const DiscreteSystem& system, double mu)
    : system_(&system), mu_(mu) {
    if (mu_ < 0.0) {
        throw InvalidArgument("OperatorCalculus: mu must be >= 0");
    }
    k_tilde_.reserve(static_cast<size_t>(system.intervals()));
    for (int m = 1; m <= system.intervals(); ++m) {
        const double k = system.grid.step(m);
        k_tilde_.push_back(((1.0 + k * mu_) * system.k_avg(m) + mu_ * system.mass).eval());
    }
    mass_solver_ = std::make_unique<SpdSolver>(system.mass);
}

OperatorCalculus::~OperatorCalculus() = default;
OperatorCalculus::OperatorCalculus(OperatorCalculus&&) noexcept = default;

const SpdSolver& OperatorCalculus::h1_solver() const {
    if (!h1_solver_) {
        h1_solver_ = std::make_unique<SpdSolver>((system_->stiff_ref + system_->mass).eval());
    }
    return *h1_solver_;
}

const SpdSolver& OperatorCalculus::a_inv_solver(int m) const {
    auto it = a_inv_solvers_.find(m);
    if (it == a_inv_solvers_.end()) {
        it = a_inv_solvers_.emplace(m, std::make_unique<SpdSolver>(k_tilde(m))).first;
    }
    return *it->second;
}

const SpdSolver& OperatorCalculus::resolvent_solver(int m, int j) const {
    const long key = static_cast<long>(m) * (intervals() + 1) + j;
    auto it = resolvent_solvers_.find(key);
    if (it == resolvent_solvers_.end()) {
        const double kj = system_->grid.step(j);
        it = resolvent_solvers_
                 .emplace(key, std::make_unique<SpdSolver>(
                                   (system_->mass + kj * k_tilde(m)).eval()))
                 .first;
    }
    return *it->second;
}

DiscreteOp OperatorCalculus::rational_propagator(int m, int l) const {
    if (l < 1 || l > m || m > intervals()) {
        throw InvalidArgument("rational_propagator: need 1 <= l <= m <= M");
    }
    DiscreteOp op;
    for (int j = m; j >= l; --j) {
        op.steps.push_back({DiscreteOp::Prim::ResolventFactor, m, j});
    }
    return op;
}

DiscreteOp OperatorCalculus::q_block(int m, int l) const {
    if (l < 1 || l >= m || m > intervals()) {
        throw InvalidArgument("q_block: need 1 <= l < m <= M");
    }
    DiscreteOp op;
    op.scale = system_->grid.step(l);
    op.steps.push_back({DiscreteOp::Prim::ApplyA, m, 0});
    for (int j = m; j >= l; --j) {
        op.steps.push_back({DiscreteOp::Prim::ResolventFactor, m, j});
    }
    op.steps.push_back({DiscreteOp::Prim::ApplyDiff, m, l});
    op.steps.push_back({DiscreteOp::Prim::ApplyAInv, l, 0});
    return op;
}

DiscreteOp OperatorCalculus::l_block(int m, int l) const {
    if (l < 1 || l > m || m > intervals()) {
        throw InvalidArgument("l_block: need 1 <= l <= m <= M");
    }
    DiscreteOp op;
    op.scale = system_->grid.step(l);
    op.steps.push_back({DiscreteOp::Prim::ApplyA, m, 0});
    for (int j = m; j >= l; --j) {
        op.steps.push_back({DiscreteOp::Prim::ResolventFactor, m, j});
    }
    return op;
}

DiscreteOp OperatorCalculus::d_block(int m) const {
    DiscreteOp op = l_block(m, 1);
    op.scale = 1.0;
    return op;
}

Eigen::VectorXd OperatorCalculus::apply_step(const DiscreteOp::Step& step,
                                             const Eigen::VectorXd& v) const {
    switch (step.kind) {
        case DiscreteOp::Prim::ApplyA:
            return mass_solver_->solve(k_tilde(step.m) * v);
        case DiscreteOp::Prim::ApplyAInv:
            return a_inv_solver(step.m).solve(system_->mass * v);
        case DiscreteOp::Prim::ResolventFactor:
            return resolvent_solver(step.m, step.j).solve(system_->mass * v);
        case DiscreteOp::Prim::ApplyDiff:
            return mass_solver_->solve(k_tilde(step.m) * v - k_tilde(step.j) * v);
    }
    throw InternalError("apply_step: unknown primitive");
}

Eigen::VectorXd OperatorCalculus::apply(const DiscreteOp& op, const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = v;
    for (auto it = op.steps.rbegin(); it != op.steps.rend(); ++it) {
        out = apply_step(*it, out);
    }
    return op.scale * out;
}

Eigen::VectorXd OperatorCalculus::apply_adjoint(const DiscreteOp& op,
                                                const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = v;
    for (const auto& step : op.steps) {
        out = apply_step(step, out);
    }
    return op.scale * out;
}

double OperatorCalculus::mass_norm(const Eigen::VectorXd& v) const {
    return energy_norm(system_->mass, v);
}

Eigen::VectorXd OperatorCalculus::mass_solve(const Eigen::VectorXd& b) const {
    return mass_solver_->solve(b);
}

double OperatorCalculus::block_norm(const DiscreteOp& op, NormKind kind, double tol,
                                    int max_iter) const {
    const int n = dofs();
    if (n == 0) return 0.0;
    const SparseSpd& mass = system_->mass;

    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_c;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> inner;

    switch (kind) {
        case NormKind::L2toL2:
            apply_c = [this, &op](const Eigen::VectorXd& v) {
                return apply_adjoint(op, apply(op, v));
            };
            inner = [&mass](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                return u.dot(mass * v);
            };
            break;
        case NormKind::L2toH1:
            apply_c = [this, &op](const Eigen::VectorXd& v) {
                const SparseSpd g = (system_->stiff_ref + system_->mass);
                return apply_adjoint(op, mass_solve(g * apply(op, v)));
            };
            inner = [&mass](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                return u.dot(mass * v);
            };
            break;
        case NormKind::H1toHm1:
            apply_c = [this, &op](const Eigen::VectorXd& v) {
                const Eigen::VectorXd w = apply(op, v);
                const Eigen::VectorXd z = apply_adjoint(op, h1_solver().solve(system_->mass * w));
                return h1_solver().solve(system_->mass * z).eval();
            };
            inner = [this](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                return u.dot((system_->stiff_ref + system_->mass) * v);
            };
            break;
        case NormKind::Hm1toL2:
            apply_c = [this, &op](const Eigen::VectorXd& v) {
                const SparseSpd g = (system_->stiff_ref + system_->mass);
                return mass_solve(g * apply_adjoint(op, apply(op, v)));
            };
            inner = [this, &mass](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
                return (mass * u).dot(h1_solver().solve(mass * v));
            };
            break;
    }
    const double lambda = power_iteration_max_eig(n, apply_c, inner, tol, max_iter);
    return std::sqrt(lambda);
}

ContractionAudit contraction_audit(const OperatorCalculus& calc, const ModulusReport* modulus,
                                   long budget) {
    check_budget(calc, budget);
    const TimeGrid& grid = calc.system().grid;
    const int M = calc.intervals();
    ContractionAudit audit;
    audit.mu = calc.mu();
    audit.row_sums.assign(static_cast<size_t>(M) + 1, 0.0);

    std::vector<double> col_sums(static_cast<size_t>(M) + 1, 0.0);
    for (int m = 1; m <= M; ++m) {
        for (int l = 1; l < m; ++l) {
            const double norm = calc.block_norm(calc.q_block(m, l));
            const double separation = grid.node(m) - grid.node(l - 1);
            const double kl = grid.step(l);
            const double km = grid.step(m);
            NormAuditRow row;
            row.m = m;
            row.l = l;
            row.norm = norm;
            if (calc.mu() > 0.0 && modulus) {
                row.predicted = kl *
                                (fitted_omega(modulus, separation) / std::sqrt(calc.mu()) +
                                 std::sqrt(calc.mu()) * std::abs(km - kl)) /
                                std::pow(separation, 1.5);
                row.ratio = row.predicted > 0.0 ? norm / row.predicted : 0.0;
            }
            audit.rows.push_back(row);
            audit.row_sums[static_cast<size_t>(m)] += norm;
            col_sums[static_cast<size_t>(l)] += (km / kl) * norm;
        }
    }
    for (int m = 1; m <= M; ++m) {
        audit.rowsum_inf = std::max(audit.rowsum_inf, audit.row_sums[static_cast<size_t>(m)]);
        audit.colsum_1 = std::max(audit.colsum_1, col_sums[static_cast<size_t>(m)]);
    }
    return audit;
}

SmoothingAudit smoothing_audit(const OperatorCalculus& calc, long budget) {
    check_budget(calc, budget);
    const TimeGrid& grid = calc.system().grid;
    const int M = calc.intervals();
    SmoothingAudit audit;
    audit.mu = calc.mu();

    for (int m = 1; m <= M; ++m) {
        for (int l = 1; l <= m; ++l) {
            SmoothingAuditRow row;
            row.m = m;
            row.l = l;
            const double separation = grid.node(m) - grid.node(l - 1);
            const double mu_factor = std::sqrt(1.0 + calc.mu() * grid.step(m));

            DiscreteOp ar = calc.l_block(m, l);
            ar.scale = 1.0;  // plain tilde A_m R_{m,l}
            row.norm_l2 = calc.block_norm(ar);
            row.scaled_l2 = row.norm_l2 * separation;
            audit.max_scaled_l2_all = std::max(audit.max_scaled_l2_all, row.scaled_l2);

            if (m - l >= 1) {
                audit.max_scaled_l2 = std::max(audit.max_scaled_l2, row.scaled_l2);

                DiscreteOp a2r = ar;
                a2r.steps.insert(a2r.steps.begin(), {DiscreteOp::Prim::ApplyA, m, 0});
                row.norm_a2 = calc.block_norm(a2r);
                row.scaled_a2 = row.norm_a2 * separation * separation;
                audit.max_scaled_a2 = std::max(audit.max_scaled_a2, row.scaled_a2);

                row.norm_l2h1 = calc.block_norm(ar, NormKind::L2toH1);
                row.scaled_l2h1 = row.norm_l2h1 * std::pow(separation, 1.5) * mu_factor;
                audit.max_scaled_l2h1 = std::max(audit.max_scaled_l2h1, row.scaled_l2h1);

                row.norm_hm1l2 = calc.block_norm(ar, NormKind::Hm1toL2);
                row.scaled_hm1l2 = row.norm_hm1l2 * std::pow(separation, 1.5) * mu_factor;
                audit.max_scaled_hm1l2 = std::max(audit.max_scaled_hm1l2, row.scaled_hm1l2);
            }
            audit.rows.push_back(row);
        }
    }
    return audit;
}

ResolventAudit resolvent_audit(const DiscreteSystem& system, int m, double mu, double gamma,
                               std::span<const std::complex<double>> z_samples,
                               int max_dense_dofs) {
    if (m < 1 || m > system.intervals()) {
        throw InvalidArgument("resolvent_audit: interval index out of range");
    }
    if (!(gamma > 0.0 && gamma < M_PI)) {
        throw InvalidArgument("resolvent_audit: gamma must lie in (0, pi)");
    }
    if (system.dofs() > max_dense_dofs) {
        throw ResourceLimit("resolvent_audit: space too large for the dense eigen-oracle");
    }

    ResolventAudit audit;
    audit.m = m;
    audit.mu = mu;
    audit.gamma = gamma;

    const double k = system.grid.step(m);
    const Eigen::MatrixXd k_tilde =
        ((1.0 + k * mu) * system.k_avg(m) + mu * system.mass).toDense();
    const Eigen::MatrixXd mass = system.mass.toDense();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(k_tilde, mass);
    if (eig.info() != Eigen::Success) {
        throw NumericFailure("resolvent_audit: generalized eigensolver failed");
    }
    const Eigen::VectorXd spectrum = eig.eigenvalues();
    audit.lambda_min = spectrum.minCoeff();

    for (const std::complex<double>& z : z_samples) {
        if (std::abs(std::arg(z)) <= gamma) {
            throw InvalidArgument("resolvent_audit: sample z inside the sector");
        }
        double dist = std::numeric_limits<double>::infinity();
        for (int i = 0; i < spectrum.size(); ++i) {
            dist = std::min(dist, std::abs(z - std::complex<double>(spectrum[i], 0.0)));
        }
        ResolventSample sample;
        sample.z = z;
        sample.norm = 1.0 / dist;
        sample.scaled = sample.norm * (std::abs(z) + mu);
        audit.max_scaled = std::max(audit.max_scaled, sample.scaled);
        audit.samples.push_back(sample);
    }

    audit.inv_norm_l2 = 1.0 / audit.lambda_min;
    audit.inv_norm_l2_bound = mu > 0.0 ? 1.0 / mu : std::numeric_limits<double>::infinity();
    OperatorCalculus calc(system, mu);
    DiscreteOp inv;
    inv.steps.push_back({DiscreteOp::Prim::ApplyAInv, m, 0});
    audit.inv_norm_h1 = calc.block_norm(inv, NormKind::L2toH1);
    audit.inv_norm_h1_scaled = audit.inv_norm_h1 * std::sqrt(mu * (1.0 + k * mu));
    return audit;
}

DifferenceAudit difference_audit(const OperatorCalculus& calc, const ModulusReport* modulus,
                                 long budget) {
    check_budget(calc, budget);
    const TimeGrid& grid = calc.system().grid;
    DifferenceAudit audit;
    audit.mu = calc.mu();
    for (int m = 2; m <= calc.intervals(); ++m) {
        for (int l = 1; l < m; ++l) {
            DiscreteOp diff;
            diff.steps.push_back({DiscreteOp::Prim::ApplyDiff, m, l});
            NormAuditRow row;
            row.m = m;
            row.l = l;
            row.norm = calc.block_norm(diff, NormKind::H1toHm1);
            const double separation = grid.node(m) - grid.node(l - 1);
            const double kl = grid.step(l);
            const double km = grid.step(m);
            row.predicted = (1.0 + calc.mu() * std::min(kl, km)) * fitted_omega(modulus, separation) +
                            calc.mu() * std::abs(km - kl);
            row.ratio = row.predicted > 1e-14 ? row.norm / row.predicted : 0.0;
            audit.max_ratio = std::max(audit.max_ratio, row.ratio);
            audit.rows.push_back(row);
        }
    }
    return audit;
}

double fixed_point_residual(const DiscreteSystem& system, const DgSolution& sol, double mu) {
    if (sol.intervals() != system.intervals()) {
        throw InvalidArgument("fixed_point_residual: solution does not match the system");
    }
    if (system.dofs() == 0) return 0.0;
    OperatorCalculus calc(system, mu);
    const TimeGrid& grid = system.grid;
    const int M = system.intervals();

    // transformed solution values w_l, data f~_l and v~_l = tilde A_l w_l
    std::vector<Eigen::VectorXd> v(static_cast<size_t>(M));
    std::vector<Eigen::VectorXd> f(static_cast<size_t>(M));
    double shrink = 1.0;  // prod_{j<=l} (1 + mu k_j)^{-1}
    for (int l = 1; l <= M; ++l) {
        const double f_scale = shrink;  // prod up to l-1
        shrink /= (1.0 + mu * grid.step(l));
        DiscreteOp a;
        a.steps.push_back({DiscreteOp::Prim::ApplyA, l, 0});
        v[static_cast<size_t>(l) - 1] = calc.apply(a, (shrink * sol.at_interval(l)).eval());
        f[static_cast<size_t>(l) - 1] =
            f_scale * calc.mass_solve(sol.loads.at(static_cast<size_t>(l) - 1));
    }

    double worst = 0.0;
    double scale = 1.0;
    for (int m = 1; m <= M; ++m) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.dofs());
        for (int l = 1; l < m; ++l) {
            rhs += calc.apply(calc.q_block(m, l), v[static_cast<size_t>(l) - 1]);
        }
        for (int l = 1; l <= m; ++l) {
            rhs += calc.apply(calc.l_block(m, l), f[static_cast<size_t>(l) - 1]);
        }
        rhs += calc.apply(calc.d_block(m), sol.initial);
        worst = std::max(worst, calc.mass_norm(v[static_cast<size_t>(m) - 1] - rhs));
        scale = std::max(scale, 1.0 + calc.mass_norm(v[static_cast<size_t>(m) - 1]));
    }
    return worst / scale;
}

double representation_residual(const DiscreteSystem& system, const DgSolution& sol) {
    if (sol.intervals() != system.intervals()) {
        throw InvalidArgument("representation_residual: solution does not match the system");
    }
    if (system.dofs() == 0) return 0.0;
    OperatorCalculus calc(system, 0.0);
    const TimeGrid& grid = system.grid;
    const int M = system.intervals();

    std::vector<Eigen::VectorXd> f(static_cast<size_t>(M));
    for (int l = 1; l <= M; ++l) {
        f[static_cast<size_t>(l) - 1] = calc.mass_solve(sol.loads.at(static_cast<size_t>(l) - 1));
    }

    double worst = 0.0;
    double scale = 1.0;
    for (int m = 1; m <= M; ++m) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.dofs());
        for (int l = 1; l < m; ++l) {
            DiscreteOp op = calc.rational_propagator(m, l);
            op.steps.push_back({DiscreteOp::Prim::ApplyDiff, m, l});
            op.scale = grid.step(l);
            rhs += calc.apply(op, sol.at_interval(l));
        }
        for (int l = 1; l <= m; ++l) {
            DiscreteOp op = calc.rational_propagator(m, l);
            op.scale = grid.step(l);
            rhs += calc.apply(op, f[static_cast<size_t>(l) - 1]);
        }
        rhs += calc.apply(calc.rational_propagator(m, 1), sol.initial);
        worst = std::max(worst, calc.mass_norm(sol.at_interval(m) - rhs));
        scale = std::max(scale, 1.0 + calc.mass_norm(sol.at_interval(m)));
    }
    return worst / scale;
}

double transform_consistency_check(const DiscreteSystem& system, const DgSolution& sol,
                                   double mu) {
    if (system.dofs() == 0) return 0.0;
    OperatorCalculus calc(system, mu);
    const TimeGrid& grid = system.grid;

    Eigen::VectorXd w = sol.initial;
    double grow = 1.0;  // prod_{l<=m} (1 + mu k_l)
    double worst = 0.0;
    for (int m = 1; m <= system.intervals(); ++m) {
        const double k = grid.step(m);
        const double f_scale = 1.0 / grow;  // prod up to m-1, inverted
        grow *= (1.0 + mu * k);
        const SparseSpd lhs = (system.mass + k * calc.k_tilde(m)).eval();
        SpdSolver solver(lhs);
        w = solver.solve(system.mass * w +
                         k * f_scale * sol.loads.at(static_cast<size_t>(m) - 1));
        const Eigen::VectorXd recovered = grow * w;
        const double err = calc.mass_norm(recovered - sol.at_interval(m)) /
                           (1.0 + calc.mass_norm(sol.at_interval(m)));
        worst = std::max(worst, err);
    }
    return worst;
}

} // namespace dg0
