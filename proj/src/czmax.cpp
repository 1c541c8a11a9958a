#include "oscillab/czmax.hpp"

#include <cmath>

namespace oscillab {
namespace {

std::vector<double> abs_values(const GridFunction& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
    return out;
}

}  // namespace

DyadicCube lift_cube(const DyadicCube& q0, const DyadicCube& local) {
    std::vector<std::int64_t> c(local.coords());
    for (int i = 0; i < local.dim(); ++i) c[i] += q0.coords()[i] << local.level();
    return DyadicCube(q0.level() + local.level(), std::move(c));
}

GridFunction dyadic_maximal(const GridFunction& f, const DyadicCube& q0) {
    const GridFunction g = restrict_to(f, q0);
    return g.with_values(maximal_leaf_values(g.grid(), abs_values(g)));
}

GridFunction sharp_maximal(const GridFunction& f, const DyadicCube& q0, const OscillationFamily& osc) {
    const GridFunction g = restrict_to(f, q0);
    return g.with_values(sup_over_ancestors(g.grid(), osc.oscillation_tree(g)));
}

StoppingFamily cz_decomposition(const GridFunction& f, double lambda, const DyadicCube& q0) {
    const GridFunction g = restrict_to(f, q0);
    const DyadicGrid grid = g.grid();
    const LevelArray<double> avg = average_tree(grid, abs_values(g));
    if (lambda < avg[0][0])
        throw DomainError("precondition violated: lambda is below the average of |f| on Q0");
    StoppingFamily out;
    out.threshold = lambda;
    out.criterion = StoppingCriterion::average;
    for (const NodeRef& n : stopping_nodes(grid, avg, lambda)) out.cubes.push_back(lift_cube(q0, grid.cube(n)));
    return out;
}

StoppingFamily generalized_cz_decomposition(const GridFunction& f, double lambda, const DyadicCube& q0,
                                            const OscillationFamily& osc) {
    const GridFunction g = restrict_to(f, q0);
    const DyadicGrid grid = g.grid();
    const LevelArray<double> osc_tree = osc.oscillation_tree(g);
    if (!(lambda >= 0.0)) throw DomainError("threshold must be nonnegative");
    StoppingFamily out;
    out.root_exceeds = osc_tree[0][0] > lambda;
    out.threshold = lambda;
    out.criterion = StoppingCriterion::oscillation;
    for (const NodeRef& n : stopping_nodes(grid, osc_tree, lambda)) out.cubes.push_back(lift_cube(q0, grid.cube(n)));
    return out;
}

}  // namespace oscillab
