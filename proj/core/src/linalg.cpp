#include "dg0/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "dg0/errors.hpp"

namespace dg0 {

bool is_symmetric(const SparseSpd& a, double rtol) {
    if (a.rows() != a.cols()) return false;
    SparseSpd diff = SparseSpd(a.transpose()) - a;
    double scale = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseSpd::InnerIterator it(a, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
        }
    }
    double max_diff = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseSpd::InnerIterator it(diff, k); it; ++it) {
            max_diff = std::max(max_diff, std::abs(it.value()));
        }
    }
    return max_diff <= rtol * std::max(scale, 1e-300);
}

double energy_norm(const SparseSpd& a, const Eigen::VectorXd& v) {
    if (v.size() == 0) return 0.0;
    return std::sqrt(std::max(0.0, v.dot(a * v)));
}

struct SpdSolver::Impl {
    Eigen::SimplicialLDLT<SparseSpd> ldlt;
    Eigen::ConjugateGradient<SparseSpd, Eigen::Lower | Eigen::Upper> cg;
};

SpdSolver::SpdSolver(SparseSpd a, double rtol, int direct_limit)
    : a_(std::move(a)), rtol_(rtol), impl_(std::make_unique<Impl>()) {
    if (a_.rows() != a_.cols()) {
        throw InvalidArgument("SpdSolver: matrix must be square");
    }
    direct_ = a_.rows() <= direct_limit;
    if (a_.rows() == 0) return;
    if (direct_) {
        impl_->ldlt.compute(a_);
        if (impl_->ldlt.info() != Eigen::Success) {
            throw NumericFailure("SpdSolver: sparse factorization failed");
        }
    } else {
        impl_->cg.setTolerance(rtol_);
        impl_->cg.setMaxIterations(10 * a_.rows());
        impl_->cg.compute(a_);
    }
}

SpdSolver::~SpdSolver() = default;

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& b) const {
    if (order() == 0) return Eigen::VectorXd(0);
    if (b.size() != order()) {
        throw InvalidArgument("SpdSolver::solve: size mismatch");
    }
    const double b_norm = b.norm();
    Eigen::VectorXd x = direct_ ? impl_->ldlt.solve(b).eval() : impl_->cg.solve(b).eval();
    if (b_norm == 0.0) return Eigen::VectorXd::Zero(order());

    // one or two rounds of iterative refinement if needed
    for (int pass = 0; pass < 3; ++pass) {
        const double res = (b - a_ * x).norm() / b_norm;
        if (res <= rtol_) return x;
        const Eigen::VectorXd r = b - a_ * x;
        x += direct_ ? impl_->ldlt.solve(r).eval() : impl_->cg.solve(r).eval();
    }
    const double res = (b - a_ * x).norm() / b_norm;
    if (res > rtol_) {
        throw NumericFailure("SpdSolver: residual tolerance not reached", res);
    }
    return x;
}

double power_iteration_max_eig(
    int n,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& inner,
    double tol,
    int max_iter) {
    if (n == 0) return 0.0;

    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.25 * std::cos(0.7 * i);
    }
    double v_norm2 = inner(v, v);
    if (!(v_norm2 > 0.0)) throw InternalError("power iteration: degenerate inner product");
    v /= std::sqrt(v_norm2);

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = apply(v);
        const double rayleigh = inner(v, w);
        const double w_norm2 = inner(w, w);
        if (w_norm2 <= 1e-120) return 0.0;
        const double change = std::abs(rayleigh - lambda);
        lambda = rayleigh;
        if (it > 0 && change <= tol * std::max(std::abs(lambda), 1e-30)) break;
        v = w / std::sqrt(w_norm2);
    }
    return std::max(lambda, 0.0);
}

} // namespace dg0
