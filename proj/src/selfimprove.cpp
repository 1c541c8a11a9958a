#include "oscillab/selfimprove.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/czmax.hpp"
#include "oscillab/norms.hpp"

namespace oscillab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must be greater than 1");
}

/// Values of a full-grid level array restricted to the subtree of q, indexed by the local tree of q.
template <class T>
LevelArray<T> subtree_levels(const DyadicGrid& grid, const LevelArray<T>& tree, const DyadicCube& q) {
    const DyadicGrid local(grid.dim(), grid.depth() - q.level());
    LevelArray<T> out(local.depth() + 1);
    for (int j = 0; j <= local.depth(); ++j) {
        out[j].resize(local.nodes_at(j));
        for (std::size_t i = 0; i < local.nodes_at(j); ++i) {
            const NodeRef g = grid.node(lift_cube(q, local.cube(NodeRef{j, i})));
            out[j][i] = tree[g.level][g.index];
        }
    }
    return out;
}

std::vector<double> leaf_values_of(const GridFunction& f, const DyadicGrid& grid, NodeRef n) {
    const auto leaves = grid.leaves_of(n);
    std::vector<double> out(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) out[i] = f[leaves[i]];
    return out;
}

double max_over(const LevelArray<double>& t) {
    double m = 0.0;
    for (const auto& level : t)
        for (double v : level) m = std::max(m, v);
    return m;
}

LevelArray<double> jn_tree_from_osc(const DyadicGrid& grid, const LevelArray<double>& osc, double p) {
    const AntichainDP<double> dp = antichain_dp(grid, power_weights(grid, osc, p));
    LevelArray<double> out(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) {
        out[j].resize(grid.nodes_at(j));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) out[j][i] = antichain_norm(grid, dp, osc, NodeRef{j, i}, p);
    }
    return out;
}

}  // namespace

Rational rational_power(double x, double p) {
    if (p == std::floor(p) && p >= 0.0 && p <= 64.0) {
        const Rational base(x);
        Rational out(1);
        for (int k = 0; k < static_cast<int>(p); ++k) out *= base;
        return out;
    }
    return Rational(std::pow(x, p));
}

LevelArray<double> power_weights(const DyadicGrid& grid, const LevelArray<double>& value, double p) {
    LevelArray<double> w(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) {
        const double vol = grid.relative_volume(j);
        w[j].resize(grid.nodes_at(j));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) w[j][i] = std::pow(value[j][i], p) * vol;
    }
    return w;
}

LevelArray<Rational> power_weights_exact(const DyadicGrid& grid, const LevelArray<double>& value, double p) {
    LevelArray<Rational> w(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) {
        const Rational vol = Rational(grid.relative_volume(j));
        w[j].resize(grid.nodes_at(j));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) w[j][i] = rational_power(value[j][i], p) * vol;
    }
    return w;
}

double antichain_norm(const DyadicGrid& grid, const AntichainDP<double>& dp, const LevelArray<double>& value,
                      NodeRef q, double p) {
    if (dp.takes_self[q.level][q.index]) return std::abs(value[q.level][q.index]);
    return std::pow(dp.best[q.level][q.index] / grid.relative_volume(q.level), 1.0 / p);
}

LevelArray<double> jn_norm_tree(const GridFunction& f, double p, const OscillationFamily& osc) {
    check_p(p);
    return jn_tree_from_osc(f.grid(), osc.oscillation_tree(f), p);
}

double jn_norm(const GridFunction& f, double p, const DyadicCube& q, const OscillationFamily& osc) {
    check_cube(f, q);
    check_p(p);
    const DyadicGrid grid = f.grid();
    const LevelArray<double> sub = subtree_levels(grid, osc.oscillation_tree(f), q);
    const DyadicGrid local(grid.dim(), grid.depth() - q.level());
    const AntichainDP<double> dp = antichain_dp(local, power_weights(local, sub, p));
    return antichain_norm(local, dp, sub, NodeRef{0, 0}, p);
}

double jn_sup_norm(const GridFunction& f, double p, const DyadicCube& q0, const OscillationFamily& osc) {
    check_cube(f, q0);
    check_p(p);
    const DyadicGrid grid = f.grid();
    const LevelArray<double> sub = subtree_levels(grid, osc.oscillation_tree(f), q0);
    return max_over(jn_tree_from_osc(DyadicGrid(grid.dim(), grid.depth() - q0.level()), sub, p));
}

double bmo_dyadic_norm(const GridFunction& f, const DyadicCube& q) {
    check_cube(f, q);
    const GridFunction g = restrict_to(f, q);
    const std::vector<double> vals(g.values().begin(), g.values().end());
    return max_over(mean_oscillation_levels(g.grid(), vals));
}

CubeFunctional::CubeFunctional(Fn fn, std::string name, std::map<std::string, double> params)
    : fn_(std::move(fn)), name_(std::move(name)), params_(std::move(params)) {}

double CubeFunctional::operator()(const DyadicCube& q, const BaseCube& base) const {
    const double v = fn_(q, base);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError("functional " + name_ + " is negative or not finite on " + q.to_string());
    return v;
}

LevelArray<double> CubeFunctional::tree(const BaseCube& base, int depth, const DyadicCube& q0) const {
    if (q0.level() > depth) throw DomainError("cube is deeper than the grid");
    const DyadicGrid local(base.dim(), depth - q0.level());
    LevelArray<double> out(local.depth() + 1);
    for (int j = 0; j <= local.depth(); ++j) {
        out[j].resize(local.nodes_at(j));
        for (std::size_t i = 0; i < local.nodes_at(j); ++i)
            out[j][i] = (*this)(lift_cube(q0, local.cube(NodeRef{j, i})), base);
    }
    return out;
}

CubeFunctional constant_functional(double c) {
    if (!(c >= 0.0)) throw DomainError("constant functional must be nonnegative");
    return CubeFunctional([c](const DyadicCube&, const BaseCube&) { return c; }, "constant", {{"c", c}});
}

CubeFunctional side_power_functional(double alpha) {
    return CubeFunctional(
        [alpha](const DyadicCube& q, const BaseCube& base) { return std::pow(q.side_length(base), alpha); },
        "side-power", {{"alpha", alpha}});
}

CubeFunctional poincare_functional(const GridFunction& g, double p) {
    if (!(p > 0.0)) throw DomainError("p must be positive");
    return CubeFunctional(
        [g, p](const DyadicCube& q, const BaseCube& base) { return q.side_length(base) * lp_norm(g, p, q); },
        "poincare", {{"p", p}});
}

CubeFunctional gr_functional(const GridFunction& w, double eps) {
    if (!(eps >= 0.0)) throw DomainError("epsilon must be nonnegative");
    return CubeFunctional([w, eps](const DyadicCube& q, const BaseCube&) { return eps * cube_average(w, q); }, "gr",
                          {{"epsilon", eps}});
}

CubeFunctional oscillation_functional(const GridFunction& f, const OscillationFamily& osc) {
    const DyadicGrid grid = f.grid();
    const LevelArray<double> tree = osc.oscillation_tree(f);
    return CubeFunctional(
        [grid, tree](const DyadicCube& q, const BaseCube&) {
            const NodeRef n = grid.node(q);
            return tree[n.level][n.index];
        },
        "oscillation:" + osc.name());
}

CubeFunctional table_functional(std::map<DyadicCube, double> values) {
    auto table = std::make_shared<const std::map<DyadicCube, double>>(std::move(values));
    return CubeFunctional(
        [table](const DyadicCube& q, const BaseCube&) {
            auto it = table->find(q);
            if (it == table->end()) throw DomainError("functional table has no entry for " + q.to_string());
            return it->second;
        },
        "table");
}

LevelArray<double> dp_norm_tree(const DyadicGrid& grid, const LevelArray<double>& a, double p) {
    check_p(p);
    const AntichainDP<double> dp = antichain_dp(grid, power_weights(grid, a, p));
    LevelArray<double> out(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) {
        out[j].resize(grid.nodes_at(j));
        for (std::size_t i = 0; i < grid.nodes_at(j); ++i) {
            const double best = dp.best[j][i];
            const double w = dp.weight[j][i];
            if (w == 0.0)
                out[j][i] = best > 0.0 ? kInf : 0.0;
            else if (dp.takes_self[j][i])
                out[j][i] = 1.0;
            else
                out[j][i] = std::pow(best / w, 1.0 / p);
        }
    }
    return out;
}

double dp_norm(const CubeFunctional& a, double p, const DyadicCube& q, const BaseCube& base, int depth) {
    const DyadicGrid local(base.dim(), depth - q.level());
    return dp_norm_tree(local, a.tree(base, depth, q), p)[0][0];
}

double dp_sup_norm(const CubeFunctional& a, double p, const DyadicCube& q0, const BaseCube& base, int depth) {
    const DyadicGrid local(base.dim(), depth - q0.level());
    return max_over(dp_norm_tree(local, a.tree(base, depth, q0), p));
}

EmbeddingReport verify_weak_embedding(const GridFunction& f, double p, const DyadicCube& q,
                                      const OscillationFamily& osc) {
    check_cube(f, q);
    check_p(p);
    const DyadicGrid grid = f.grid();
    const DyadicGrid local(grid.dim(), grid.depth() - q.level());
    const LevelArray<double> sub = subtree_levels(grid, osc.oscillation_tree(f), q);
    EmbeddingReport rep;
    rep.p = p;

    const NodeRef nq = grid.node(q);
    rep.weak_lhs = weak_lp_norm(osc.apply_B_local(grid, nq, leaf_values_of(f, grid, nq)), p);
    const std::vector<double> sharp = sup_over_ancestors(local, sub);
    rep.weak_sharp = weak_lp_norm(sharp, p);
    const AntichainDP<double> dp = antichain_dp(local, power_weights(local, sub, p));
    rep.jn = antichain_norm(local, dp, sub, NodeRef{0, 0}, p);

    // sharp chain: v^p |{M# >= v}| <= best for every value v of M#, in rational arithmetic
    const AntichainDP<Rational> dpx = antichain_dp(local, power_weights_exact(local, sub, p));
    const Rational& best = dpx.best[0][0];
    std::vector<double> sorted(sharp);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const Rational n_leaves(static_cast<long>(sorted.size()));
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        const Rational frac = Rational(static_cast<long>(i + 1)) / n_leaves;
        if (rational_power(sorted[i], p) * frac > best) rep.sharp_chain_ok = false;
    }

    rep.theta = std::ldexp(1.0, grid.dim()) * osc.constant_cb();
    rep.constant = 2.0 * derive_constant(p, rep.theta, 0.0).C;
    rep.ratio = rep.jn > 0.0 ? rep.weak_lhs / rep.jn : 0.0;
    rep.bound_ok = rep.weak_lhs <= rep.constant * rep.jn * (1.0 + 1e-12);
    return rep;
}

FpwReport verify_fpw(const GridFunction& f, const CubeFunctional& a, double p, const DyadicCube& q0,
                     const OscillationFamily& osc) {
    check_cube(f, q0);
    check_p(p);
    const DyadicGrid grid = f.grid();
    const DyadicGrid local(grid.dim(), grid.depth() - q0.level());
    const LevelArray<double> sub = subtree_levels(grid, osc.oscillation_tree(f), q0);
    const LevelArray<double> av = a.tree(f.base(), f.depth(), q0);
    FpwReport rep;
    rep.p = p;

    local.for_each_node([&](NodeRef n) {
        if (sub[n.level][n.index] > av[n.level][n.index]) rep.hypothesis_violations.push_back(lift_cube(q0, local.cube(n)));
    });
    rep.hypothesis_ok = rep.hypothesis_violations.empty();

    const LevelArray<double> dpn = dp_norm_tree(local, av, p);
    rep.dp_sup = max_over(dpn);
    rep.constant = 2.0 * derive_constant(p, std::ldexp(1.0, grid.dim()) * osc.constant_cb(), 0.0).C;
    const LevelArray<double> jn = jn_tree_from_osc(local, sub, p);
    const AntichainDP<Rational> dp_jn = antichain_dp(local, power_weights_exact(local, sub, p));
    const AntichainDP<Rational> dp_a = antichain_dp(local, power_weights_exact(local, av, p));

    local.for_each_node([&](NodeRef n) {
        FpwCube c;
        c.cube = lift_cube(q0, local.cube(n));
        c.a = av[n.level][n.index];
        c.dp_norm = dpn[n.level][n.index];
        c.jn = jn[n.level][n.index];
        const NodeRef gn = grid.node(c.cube);
        c.weak_lhs = weak_lp_norm(osc.apply_B_local(grid, gn, leaf_values_of(f, grid, gn)), p);
        // jn(Q)^p |Q| <= (||a||_{D_p,Q} a(Q))^p |Q| is best_jn(Q) <= best_a(Q)
        c.chain_ok = dp_jn.best[n.level][n.index] <= dp_a.best[n.level][n.index];
        c.bound = rep.dp_sup == kInf ? kInf : rep.constant * rep.dp_sup * c.a;
        c.bound_ok = c.weak_lhs <= c.bound * (1.0 + 1e-12);
        if (!c.chain_ok) rep.chain_ok = false;
        if (!c.bound_ok) rep.bound_ok = false;
        rep.cubes.push_back(std::move(c));
    });
    return rep;
}

}  // namespace oscillab
