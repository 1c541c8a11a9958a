#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oscillab/dyadic.hpp"
#include "oscillab/goodlambda.hpp"
#include "oscillab/oscillation.hpp"

namespace oscillab {

/**
 * @brief Maximum-weight antichain of the dyadic tree, for every subtree at once.
 *
 * Pairwise disjoint dyadic families are exactly the antichains of the tree, so
 * best(Q) = max(w(Q), sum over children of best(child)) and best(leaf) = w(leaf).
 */
template <class T>
struct AntichainDP {
    LevelArray<T> weight;
    LevelArray<T> best;
    /// true where best(Q) is attained by {Q} itself.
    LevelArray<char> takes_self;
};

template <class T>
AntichainDP<T> antichain_dp(const DyadicGrid& grid, LevelArray<T> weight) {
    AntichainDP<T> dp;
    dp.best.resize(grid.depth() + 1);
    dp.takes_self.resize(grid.depth() + 1);
    for (int j = grid.depth(); j >= 0; --j) {
        dp.best[j].assign(grid.nodes_at(j), T(0));
        dp.takes_self[j].assign(grid.nodes_at(j), 1);
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) {
            const T& w = weight[j][i];
            if (j == grid.depth()) {
                dp.best[j][i] = w;
                continue;
            }
            T sum(0);
            for (const NodeRef& c : grid.children(NodeRef{j, i})) sum += dp.best[j + 1][c.index];
            if (sum > w) {
                dp.best[j][i] = sum;
                dp.takes_self[j][i] = 0;
            } else {
                dp.best[j][i] = w;
            }
        }
    }
    dp.weight = std::move(weight);
    return dp;
}

/// The antichain realizing best(q), in level order.
template <class T>
std::vector<NodeRef> optimal_antichain(const DyadicGrid& grid, const AntichainDP<T>& dp, NodeRef q) {
    std::vector<NodeRef> out, stack{q};
    while (!stack.empty()) {
        NodeRef n = stack.back();
        stack.pop_back();
        if (dp.takes_self[n.level][n.index]) {
            if (dp.weight[n.level][n.index] > T(0)) out.push_back(n);
        } else {
            for (const NodeRef& c : grid.children(n)) stack.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// x^p as a rational: exact for integer p, otherwise the rational value of std::pow(x, p).
Rational rational_power(double x, double p);

/// w(R) = value(R)^p |R|/|Q0| for every node, in double or exact rational form.
LevelArray<double> power_weights(const DyadicGrid& grid, const LevelArray<double>& value, double p);
LevelArray<Rational> power_weights_exact(const DyadicGrid& grid, const LevelArray<double>& value, double p);

/// (best(Q)/|Q|)^{1/p}, returning value(Q) itself when {Q} is optimal.
double antichain_norm(const DyadicGrid& grid, const AntichainDP<double>& dp, const LevelArray<double>& value,
                      NodeRef q, double p);

/// Per-node JN_p norms: jn[j][i] is the norm on that cube, with w(R) = (mean_R |B_R f|)^p |R|.
LevelArray<double> jn_norm_tree(const GridFunction& f, double p, const OscillationFamily& osc);

double jn_norm(const GridFunction& f, double p, const DyadicCube& q, const OscillationFamily& osc);
/// sup over Q in D(q0) of jn_norm.
double jn_sup_norm(const GridFunction& f, double p, const DyadicCube& q0, const OscillationFamily& osc);

/// max over Q in D(q) of mean_Q |f - f_Q|.
double bmo_dyadic_norm(const GridFunction& f, const DyadicCube& q);

/**
 * @brief A nonnegative functional a(Q) on the dyadic cubes of a base cube.
 *
 * Evaluated on cubes in the coordinates of the tree it is used with.
 */
class CubeFunctional {
public:
    using Fn = std::function<double(const DyadicCube&, const BaseCube&)>;

    CubeFunctional(Fn fn, std::string name, std::map<std::string, double> params = {});

    double operator()(const DyadicCube& q, const BaseCube& base) const;
    const std::string& name() const { return name_; }
    const std::map<std::string, double>& params() const { return params_; }

    /// Values on every node of D(q0) (in the local tree of q0, down to `depth`).
    LevelArray<double> tree(const BaseCube& base, int depth, const DyadicCube& q0) const;

private:
    Fn fn_;
    std::string name_;
    std::map<std::string, double> params_;
};

CubeFunctional constant_functional(double c);
/// a(Q) = l(Q)^alpha.
CubeFunctional side_power_functional(double alpha);
/// a(Q) = l(Q) (mean_Q g^p)^{1/p} for a density g on the same grid.
CubeFunctional poincare_functional(const GridFunction& g, double p);
/// a(Q) = eps w_Q.
CubeFunctional gr_functional(const GridFunction& w, double eps);
/// a(Q) = mean_Q |B_Q f|, the smallest functional satisfying the generalized Poincare hypothesis.
CubeFunctional oscillation_functional(const GridFunction& f, const OscillationFamily& osc);
/// Explicit values; cubes missing from the table are an error when evaluated.
CubeFunctional table_functional(std::map<DyadicCube, double> values);

/// ||a||_{D_p,Q}: +inf when a(Q) = 0 and some subcube carries weight, 0 when all of D(Q) vanishes.
double dp_norm(const CubeFunctional& a, double p, const DyadicCube& q, const BaseCube& base, int depth);
/// sup over Q in D(q0) of dp_norm.
double dp_sup_norm(const CubeFunctional& a, double p, const DyadicCube& q0, const BaseCube& base, int depth);
/// Per-node D_p norms from precomputed values of a on the local tree.
LevelArray<double> dp_norm_tree(const DyadicGrid& grid, const LevelArray<double>& a, double p);

struct EmbeddingReport {
    double p = 0.0;
    double weak_lhs = 0.0;      // ||B_Q f||_{L^{p,inf},Q}
    double weak_sharp = 0.0;    // ||M# f||_{L^{p,inf},Q}
    double jn = 0.0;            // ||f||_{JN_p,Q}
    double ratio = 0.0;         // weak_lhs / jn
    double theta = 0.0;
    double constant = 0.0;      // admissible constant for weak_lhs <= constant * jn
    bool sharp_chain_ok = true; // ||M# f||^p <= jn^p, checked in rational arithmetic
    bool bound_ok = true;
    bool pass() const { return sharp_chain_ok && bound_ok; }
};

/// Weak-type embedding of JN_p on Q, with the sharp maximal chain checked exactly.
EmbeddingReport verify_weak_embedding(const GridFunction& f, double p, const DyadicCube& q,
                                      const OscillationFamily& osc);

struct FpwCube {
    DyadicCube cube;
    double a = 0.0;
    double dp_norm = 0.0;
    double jn = 0.0;
    double weak_lhs = 0.0;
    double bound = 0.0;  // constant * ||a||_{D_p(Q0)} * a(Q)
    bool chain_ok = true;
    bool bound_ok = true;
};

struct FpwReport {
    double p = 0.0;
    bool hypothesis_ok = true;
    std::vector<DyadicCube> hypothesis_violations;
    double dp_sup = 0.0;
    double constant = 0.0;
    std::vector<FpwCube> cubes;
    bool chain_ok = true;
    bool bound_ok = true;
    bool pass() const { return hypothesis_ok && chain_ok && bound_ok; }
};

/// Checks mean_Q |B_Q f| <= a(Q) on D(Q0), then jn(Q) <= ||a||_{D_p,Q} a(Q) (exact) and the weak bound.
FpwReport verify_fpw(const GridFunction& f, const CubeFunctional& a, double p, const DyadicCube& q0,
                     const OscillationFamily& osc);

}  // namespace oscillab
