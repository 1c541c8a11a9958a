#pragma once

#include <vector>

#include "oscillab/dyadic.hpp"
#include "oscillab/oscillation.hpp"

namespace oscillab {

enum class StoppingCriterion { average, oscillation };

/// Maximal dyadic cubes whose average (or generalized oscillation) exceeds the threshold.
struct StoppingFamily {
    std::vector<DyadicCube> cubes;
    double threshold = 0.0;
    StoppingCriterion criterion = StoppingCriterion::average;
    /// Q0 itself exceeds the threshold; only proper subcubes are ever reported.
    bool root_exceeds = false;
};

// The maximal operators are localized to Q0: results live on restrict_to(f, Q0),
// i.e. on a grid whose root is Q0.

/// M_{Q0} f: at each leaf, the largest |f|-average over its dyadic ancestors in D(Q0), leaf included.
GridFunction dyadic_maximal(const GridFunction& f, const DyadicCube& q0);

/// M#_{Q0} f: at each leaf, the largest mean of |B_Q f| over dyadic Q containing it.
GridFunction sharp_maximal(const GridFunction& f, const DyadicCube& q0, const OscillationFamily& osc);

/// Stops at the maximal proper subcubes of Q0 with mean |f| > lambda. Requires lambda >= mean_{Q0} |f|.
StoppingFamily cz_decomposition(const GridFunction& f, double lambda, const DyadicCube& q0);

/// Same with the stopping rule mean_Q |B_Q f| > lambda. Below lambda_0 = mean_{Q0} |B_{Q0} f| the
/// family is still built over the proper subcubes and root_exceeds is set.
StoppingFamily generalized_cz_decomposition(const GridFunction& f, double lambda, const DyadicCube& q0,
                                            const OscillationFamily& osc);

/// Maximal nodes (root excluded) with node_value > lambda, in level order.
template <class T>
std::vector<NodeRef> stopping_nodes(const DyadicGrid& grid, const LevelArray<T>& node_value, const T& lambda) {
    std::vector<NodeRef> out;
    std::vector<NodeRef> frontier{NodeRef{0, 0}};
    while (!frontier.empty()) {
        std::vector<NodeRef> next;
        for (const NodeRef& n : frontier) {
            if (n.level == grid.depth()) continue;
            for (const NodeRef& c : grid.children(n)) {
                if (node_value[c.level][c.index] > lambda)
                    out.push_back(c);
                else
                    next.push_back(c);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

/// Leaf values of M f for |f| given as leaf values; works in double or Rational.
template <class T>
std::vector<T> maximal_leaf_values(const DyadicGrid& grid, const std::vector<T>& abs_values) {
    return sup_over_ancestors(grid, average_tree(grid, abs_values));
}

/// Mean oscillation mean_Q |f - f_Q| of every node, in double or Rational.
template <class T>
LevelArray<T> mean_oscillation_levels(const DyadicGrid& grid, const std::vector<T>& values) {
    const LevelArray<T> avg = average_tree(grid, values);
    LevelArray<T> out(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) {
        out[j].assign(grid.nodes_at(j), T(0));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) {
            const T& c = avg[j][i];
            out[j][i] = subtree_mean<T>(grid, NodeRef{j, i}, [&](std::size_t leaf) {
                T d = values[leaf] - c;
                return d < T(0) ? T(-d) : d;
            });
        }
    }
    return out;
}

/// Map a cube of restrict_to(f, q0) back to the coordinates of the parent grid.
DyadicCube lift_cube(const DyadicCube& q0, const DyadicCube& local);

}  // namespace oscillab
