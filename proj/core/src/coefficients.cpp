#include "dg0/coefficients.hpp"

#include <cmath>

#include "dg0/errors.hpp"

namespace dg0 {

double CoefMatrix::min_eigenvalue(int dim) const {
    if (dim == 1) return a[0][0];
    const double offdiag = 0.5 * (a[0][1] + a[1][0]);
    const double tr = a[0][0] + a[1][1];
    const double gap = std::hypot(a[0][0] - a[1][1], 2.0 * offdiag);
    return 0.5 * (tr - gap);
}

double CoefMatrix::max_abs_entry(int dim) const {
    if (dim == 1) return std::abs(a[0][0]);
    double m = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j]));
    }
    return m;
}

bool CoefMatrix::is_symmetric(int dim, double tol) const {
    if (dim == 1) return true;
    return std::abs(a[0][1] - a[1][0]) <= tol * (1.0 + max_abs_entry(dim));
}

CoefficientField::CoefficientField(int dim,
                                   Evaluator evaluator,
                                   double alpha_declared,
                                   double holder_exponent_declared,
                                   std::optional<double> lipschitz_space_bound,
                                   bool autonomous,
                                   std::string id)
    : dim_(dim),
      evaluator_(std::move(evaluator)),
      alpha_declared_(alpha_declared),
      holder_exponent_declared_(holder_exponent_declared),
      lipschitz_space_bound_(lipschitz_space_bound),
      autonomous_(autonomous),
      id_(std::move(id)) {
    if (dim_ != 1 && dim_ != 2) {
        throw InvalidArgument("CoefficientField: dimension must be 1 or 2");
    }
    if (!evaluator_) {
        throw InvalidArgument("CoefficientField: evaluator required");
    }
    if (!(alpha_declared_ > 0.0)) {
        throw InvalidArgument("CoefficientField: alpha must be positive");
    }
    if (!(holder_exponent_declared_ > 0.0 && holder_exponent_declared_ <= 1.0)) {
        throw InvalidArgument("CoefficientField: Hoelder exponent must lie in (0, 1]");
    }
}

EllipticityReport ellipticity_audit(const CoefficientField& field,
                                    std::span<const double> t_samples,
                                    std::span<const Point> x_samples) {
    if (t_samples.empty() || x_samples.empty()) {
        throw InvalidArgument("ellipticity_audit: empty sample set");
    }
    EllipticityReport report;
    double alpha = std::numeric_limits<double>::infinity();
    for (const double t : t_samples) {
        for (const Point& x : x_samples) {
            const CoefMatrix m = field(t, x);
            if (!m.is_symmetric(field.dim(), 1e-12)) {
                throw InvalidField("ellipticity_audit: non-symmetric coefficient sample");
            }
            alpha = std::min(alpha, m.min_eigenvalue(field.dim()));
        }
    }
    report.alpha_measured = alpha;
    report.violates_declared = alpha < field.alpha_declared() - 1e-12;
    return report;
}

ModulusReport temporal_modulus_audit(const CoefficientField& field,
                                     int dyadic_levels,
                                     const ModulusSampling& sampling) {
    if (dyadic_levels < 3) {
        throw InsufficientData("temporal_modulus_audit: need at least 3 dyadic levels");
    }

    std::vector<Point> xs;
    const int nx = std::max(2, sampling.x_per_axis);
    if (field.dim() == 1) {
        for (int i = 0; i < nx; ++i) {
            const double s = static_cast<double>(i) / (nx - 1);
            xs.push_back(Point{sampling.box_lo.x + s * (sampling.box_hi.x - sampling.box_lo.x), 0.0});
        }
    } else {
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < nx; ++j) {
                const double sx = static_cast<double>(i) / (nx - 1);
                const double sy = static_cast<double>(j) / (nx - 1);
                xs.push_back(Point{sampling.box_lo.x + sx * (sampling.box_hi.x - sampling.box_lo.x),
                                   sampling.box_lo.y + sy * (sampling.box_hi.y - sampling.box_lo.y)});
            }
        }
    }

    ModulusReport report;
    double scale = 0.0;
    for (int j = 1; j <= dyadic_levels; ++j) {
        const double sep = sampling.t_max * std::pow(2.0, -j);
        double delta = 0.0;
        const int nt = std::max(2, sampling.time_samples);
        for (int i = 0; i < nt; ++i) {
            const double t1 = (sampling.t_max - sep) * static_cast<double>(i) / (nt - 1);
            for (const Point& x : xs) {
                const CoefMatrix m1 = field(t1, x);
                const CoefMatrix m2 = field(t1 + sep, x);
                scale = std::max(scale, m1.max_abs_entry(field.dim()));
                for (int p = 0; p < field.dim(); ++p) {
                    for (int q = 0; q < field.dim(); ++q) {
                        delta = std::max(delta, std::abs(m2.a[p][q] - m1.a[p][q]));
                    }
                }
            }
        }
        report.separations.push_back(sep);
        report.increments.push_back(delta);
    }

    const double zero_floor = 1e-14 * (1.0 + scale);
    int nonzero = 0;
    for (const double d : report.increments) {
        if (d > zero_floor) ++nonzero;
    }
    if (nonzero < 2) {
        report.all_zero = true;
        report.passes = true;
        return report;
    }

    // log-log least squares over the nonzero levels
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < report.increments.size(); ++i) {
        if (report.increments[i] <= zero_floor) continue;
        const double lx = std::log(report.separations[i]);
        const double ly = std::log(report.increments[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    report.fitted_gamma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report.fitted_log_c = (sy - report.fitted_gamma * sx) / n;
    report.passes = report.fitted_gamma > 0.5 + 1e-9;
    return report;
}

namespace {

CoefficientField make_corpus_field(const std::string& id, int dim) {
    using std::cos;
    using std::sin;
    using std::sqrt;

    if (id == "identity") {
        return CoefficientField(
            dim, [](double, const Point&) { return CoefMatrix::scalar(1.0); },
            1.0, 1.0, 1.0, /*autonomous=*/true, id);
    }
    if (id == "linear-time") {
        return CoefficientField(
            dim, [](double t, const Point&) { return CoefMatrix::scalar(1.0 + t); },
            1.0, 1.0, 2.0, false, id);
    }
    if (id == "sin-time") {
        return CoefficientField(
            dim,
            [](double t, const Point&) {
                return CoefMatrix::scalar(1.0 + 0.5 * sin(2.0 * M_PI * t));
            },
            0.5, 1.0, 1.5, false, id);
    }
    if (id == "sqrt-time") {
        // Hoelder exponent exactly 1/2: deliberate failure case for the
        // modulus condition.
        return CoefficientField(
            dim, [](double t, const Point&) { return CoefMatrix::scalar(1.0 + sqrt(std::abs(t))); },
            1.0, 0.5, 2.0, false, id);
    }
    if (id == "diag-anisotropic") {
        if (dim == 1) {
            return CoefficientField(
                dim, [](double t, const Point&) { return CoefMatrix::scalar(1.0 + t); },
                1.0, 1.0, 2.0, false, id);
        }
        return CoefficientField(
            dim,
            [](double t, const Point& x) {
                return CoefMatrix::diag(1.0 + t, 2.0 + cos(x.x));
            },
            1.0, 1.0, 3.0, false, id);
    }
    if (id == "separable") {
        // b(t) A0(x) with scalar b; exercises the product-form remark.
        return CoefficientField(
            dim,
            [](double t, const Point& x) {
                const double b = 1.0 + 0.5 * sin(2.0 * M_PI * t);
                return CoefMatrix::scalar(b * (1.0 + 0.5 * cos(M_PI * x.x)));
            },
            0.25, 1.0, 5.0, false, id);
    }
    if (id == "tx-coupled") {
        return CoefficientField(
            dim,
            [](double t, const Point& x) {
                return CoefMatrix::scalar(1.0 + 0.5 * t * cos(M_PI * x.x));
            },
            0.5, 1.0, 3.5, false, id);
    }
    throw ConfigError("unknown coefficient field id: " + id);
}

} // namespace

CoefficientField corpus_field(const std::string& id, int dim) {
    return make_corpus_field(id, dim);
}

std::vector<std::string> corpus_field_ids() {
    return {"identity",  "linear-time", "sin-time", "sqrt-time",
            "diag-anisotropic", "separable", "tx-coupled"};
}

} // namespace dg0
