#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dg0/mesh.hpp"

namespace dg0 {

/// Dense d x d coefficient matrix sample (d <= 2); for d = 1 only a[0][0]
/// is meaningful.
struct CoefMatrix {
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static CoefMatrix scalar(double s) {
        CoefMatrix m;
        m.a[0][0] = s;
        m.a[1][1] = s;
        return m;
    }
    static CoefMatrix diag(double a11, double a22) {
        CoefMatrix m;
        m.a[0][0] = a11;
        m.a[1][1] = a22;
        return m;
    }

    double min_eigenvalue(int dim) const;
    double max_abs_entry(int dim) const;
    bool is_symmetric(int dim, double tol) const;
};

/// Time-dependent diffusion coefficient a_ij(t, x) together with the
/// declared structural constants of the problem class: ellipticity alpha,
/// a temporal Hoelder exponent and (optionally) a W^{1,inf} space bound.
class CoefficientField {
public:
    using Evaluator = std::function<CoefMatrix(double t, const Point& x)>;

    CoefficientField(int dim,
                     Evaluator evaluator,
                     double alpha_declared,
                     double holder_exponent_declared,
                     std::optional<double> lipschitz_space_bound = std::nullopt,
                     bool autonomous = false,
                     std::string id = "");

    CoefMatrix operator()(double t, const Point& x) const { return evaluator_(t, x); }

    int dim() const { return dim_; }
    double alpha_declared() const { return alpha_declared_; }
    double holder_exponent_declared() const { return holder_exponent_declared_; }
    const std::optional<double>& lipschitz_space_bound() const { return lipschitz_space_bound_; }
    bool autonomous() const { return autonomous_; }
    const std::string& id() const { return id_; }

private:
    int dim_;
    Evaluator evaluator_;
    double alpha_declared_;
    double holder_exponent_declared_;
    std::optional<double> lipschitz_space_bound_;
    bool autonomous_;
    std::string id_;
};

/// Smallest eigenvalue of a(t,x) over the sample product set. Throws
/// InvalidField on a non-symmetric sample, InvalidArgument on empty
/// samples.
struct EllipticityReport {
    double alpha_measured = 0.0;
    bool violates_declared = false;
};

EllipticityReport ellipticity_audit(const CoefficientField& field,
                                    std::span<const double> t_samples,
                                    std::span<const Point> x_samples);

/// Sampling layout for the temporal modulus estimate.
struct ModulusSampling {
    double t_max = 1.0;
    int time_samples = 33;
    int x_per_axis = 9;
    Point box_lo{0.0, 0.0};
    Point box_hi{1.0, 1.0};
};

/// Dyadic estimate of the temporal modulus of continuity: for separations
/// s_j = t_max 2^{-j} the largest coefficient increment is measured and a
/// power law omega(s) ~ C s^gamma fitted in log-log; gamma > 1/2 makes
/// the integral condition on omega hold.
struct ModulusReport {
    std::vector<double> separations;
    std::vector<double> increments;
    double fitted_gamma = 0.0;
    double fitted_log_c = 0.0;
    bool all_zero = false;
    bool passes = false;
};

ModulusReport temporal_modulus_audit(const CoefficientField& field,
                                     int dyadic_levels,
                                     const ModulusSampling& sampling = {});

/// Built-in fields addressable by id from experiment configs.
CoefficientField corpus_field(const std::string& id, int dim);
std::vector<std::string> corpus_field_ids();

} // namespace dg0
