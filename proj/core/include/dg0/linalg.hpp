#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>

namespace dg0 {

/// Symmetric positive definite sparse matrix in the interior-dof basis.
using SparseSpd = Eigen::SparseMatrix<double>;

bool is_symmetric(const SparseSpd& a, double rtol = 1e-14);

/// sqrt(v' A v), clamped at zero against round-off.
double energy_norm(const SparseSpd& a, const Eigen::VectorXd& v);

/// Residual-checked SPD solver: sparse Cholesky-type factorization up to
/// direct_limit unknowns, conjugate gradients above. Solves are refined
/// until the relative residual meets rtol; NumericFailure carries the
/// achieved residual otherwise.
class SpdSolver {
public:
    explicit SpdSolver(SparseSpd a, double rtol = 1e-12, int direct_limit = 50000);
    SpdSolver(SpdSolver&&) noexcept = default;
    SpdSolver& operator=(SpdSolver&&) noexcept = default;
    ~SpdSolver();

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    const SparseSpd& matrix() const { return a_; }
    int order() const { return static_cast<int>(a_.rows()); }

private:
    SparseSpd a_;
    double rtol_;
    bool direct_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Largest eigenvalue of a linear map that is self-adjoint and positive
/// semidefinite with respect to the given inner product, by power
/// iteration with a deterministic start vector. Returns 0 for the zero
/// map.
double power_iteration_max_eig(
    int n,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& inner,
    double tol = 1e-9,
    int max_iter = 2000);

} // namespace dg0
