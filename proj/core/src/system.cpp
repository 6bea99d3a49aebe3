#include "dg0/system.hpp"

#include "dg0/errors.hpp"
#include "dg0/quadrature.hpp"

namespace dg0 {

DiscreteSystem assemble_system(const FeSpace& space, const CoefficientField& field,
                               const TimeGrid& grid, int time_points, int quad_degree) {
    DiscreteSystem sys{grid, {}, {}, {}};
    sys.mass = assemble_mass(space);
    const CoefficientField identity = corpus_field("identity", space.dim());
    sys.stiff_ref = assemble_stiffness(space, identity, 0.0, quad_degree);
    sys.stiff_avg.reserve(static_cast<size_t>(grid.intervals()));
    for (int m = 1; m <= grid.intervals(); ++m) {
        sys.stiff_avg.push_back(
            assemble_averaged_stiffness(space, field, grid, m, time_points, quad_degree));
    }
    return sys;
}

DiscreteSystem scalar_surrogate(const TimeGrid& grid,
                                const std::function<double(double)>& lambda, int time_points) {
    if (!lambda) {
        throw InvalidArgument("scalar_surrogate: lambda required");
    }
    auto one_by_one = [](double value) {
        SparseSpd a(1, 1);
        a.insert(0, 0) = value;
        a.makeCompressed();
        return a;
    };
    DiscreteSystem sys{grid, one_by_one(1.0), one_by_one(1.0), {}};
    const Quad1D rule = gauss_legendre_01(time_points);
    for (int m = 1; m <= grid.intervals(); ++m) {
        const double t0 = grid.node(m - 1);
        const double k = grid.step(m);
        double avg = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
            avg += rule.weights[static_cast<size_t>(i)] *
                   lambda(t0 + k * rule.points[static_cast<size_t>(i)]);
        }
        sys.stiff_avg.push_back(one_by_one(avg));
    }
    return sys;
}

} // namespace dg0
