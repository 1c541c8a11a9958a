#pragma once

// Brute-force references used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "oscillab/dyadic.hpp"
#include "oscillab/metric.hpp"

namespace oracle {

using oscillab::DyadicGrid;
using oscillab::NodeRef;
using oscillab::Rational;

/// Every antichain of the tree (empty one included), as lists of nodes.
inline std::vector<std::vector<NodeRef>> antichains(const DyadicGrid& grid, NodeRef q) {
    std::vector<std::vector<NodeRef>> out{{q}};
    if (q.level == grid.depth()) {
        out.push_back({});
        return out;
    }
    std::vector<std::vector<NodeRef>> acc{{}};
    for (const NodeRef& c : grid.children(q)) {
        auto sub = antichains(grid, c);
        std::vector<std::vector<NodeRef>> next;
        for (const auto& a : acc)
            for (const auto& s : sub) {
                auto m = a;
                m.insert(m.end(), s.begin(), s.end());
                next.push_back(std::move(m));
            }
        acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
    return out;
}

/// Leaf indices (global row-major) below a node, by decoding coordinates.
inline std::vector<std::size_t> leaves_below(const DyadicGrid& grid, NodeRef q) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < grid.leaf_count(); ++k)
        if (grid.ancestor_of_leaf(k, q.level) == q.index) out.push_back(k);
    return out;
}

/// mean_R |f - f_R| straight from the leaf values.
inline double mean_oscillation(const DyadicGrid& grid, std::span<const double> f, NodeRef q) {
    auto lv = leaves_below(grid, q);
    double s = 0;
    for (auto k : lv) s += f[k];
    const double m = s / lv.size();
    double o = 0;
    for (auto k : lv) o += std::abs(f[k] - m);
    return o / lv.size();
}

template <class T>
T best_antichain_sum(const std::vector<std::vector<NodeRef>>& all, const std::function<T(NodeRef)>& w) {
    T best(0);
    for (const auto& a : all) {
        T s(0);
        for (const auto& n : a) s += w(n);
        if (s > best) best = s;
    }
    return best;
}

/// Largest total weight over pairwise disjoint subsets, by listing all 2^k subsets.
inline Rational subset_brute_force(const std::vector<oscillab::SiteSet>& fps, const std::vector<double>& w) {
    const std::size_t k = fps.size();
    Rational best(0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        bool ok = true;
        Rational s(0);
        for (std::size_t i = 0; i < k && ok; ++i) {
            if (!(mask >> i & 1)) continue;
            for (std::size_t j = i + 1; j < k && ok; ++j)
                if ((mask >> j & 1) && fps[i].intersects(fps[j])) ok = false;
            s += Rational(w[i]);
        }
        if (ok && s > best) best = s;
    }
    return best;
}

/// Minimum over data values c (smallest c on ties) of mean_B |f - c|^rho.
inline std::pair<double, double> inf_osc(const oscillab::MetricMeasureSpace& X, std::span<const double> f, double rho,
                                         const oscillab::SiteSet& B) {
    double best = std::numeric_limits<double>::infinity(), bc = 0, mu = 0;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (B.test(i)) mu += X.weight(i);
    std::vector<double> cs;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (B.test(i)) cs.push_back(f[i]);
    std::sort(cs.begin(), cs.end());
    for (double c : cs) {
        double s = 0;
        for (std::size_t i = 0; i < X.size(); ++i)
            if (B.test(i)) s += X.weight(i) * (rho == 1.0 ? std::abs(f[i] - c) : std::pow(std::abs(f[i] - c), rho));
        if (s < best) {
            best = s;
            bc = c;
        }
    }
    return {bc, best / mu};
}

struct JnInstance {
    std::vector<oscillab::SiteSet> footprints;
    std::vector<double> weights;
};

/// Distinct tau-footprints of balls B(x, r) with tau B inside `container`, found from pairs of distance
/// levels: B = {d <= e_k}, tau B = {d <= e_j}, realizable iff (e_k, e_{k+1}] meets (e_j/tau, e_{j+1}/tau].
inline JnInstance jn_instance(const oscillab::MetricMeasureSpace& X, std::span<const double> f, double p, double rho,
                              double tau, const oscillab::SiteSet& container) {
    std::map<oscillab::SiteSet, double> best;
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < X.size(); ++x) {
        std::vector<double> e;
        for (std::size_t y = 0; y < X.size(); ++y) e.push_back(X.d(x, y));
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        auto level_set = [&](std::size_t k) {
            oscillab::SiteSet s(X.size());
            for (std::size_t y = 0; y < X.size(); ++y)
                if (X.d(x, y) <= e[k]) s.set(y);
            return s;
        };
        for (std::size_t k = 0; k < e.size(); ++k)
            for (std::size_t j = 0; j < e.size(); ++j) {
                double lo = std::max(e[k], e[j] / tau);
                double hi = std::min(k + 1 < e.size() ? e[k + 1] : inf, j + 1 < e.size() ? e[j + 1] / tau : inf);
                if (!(lo < hi)) continue;
                auto B = level_set(k), T = level_set(j);
                if (!T.is_subset_of(container)) continue;
                double mu = 0;
                for (std::size_t y = 0; y < X.size(); ++y)
                    if (T.test(y)) mu += X.weight(y);
                double osc = inf_osc(X, f, rho, B).second;
                double a = rho == 1.0 ? osc : std::pow(osc, 1 / rho);
                double w = std::pow(a, p) * mu;
                auto it = best.find(T);
                if (it == best.end() || w > it->second) best[T] = w;
            }
    }
    JnInstance out;
    for (auto& [T, w] : best)
        if (w > 0) {
            out.footprints.push_back(T);
            out.weights.push_back(w);
        }
    return out;
}

/// sup over nested pairs B(x, r) within B(x', r') with r <= r' of mu(B')/mu(B) (r/r')^D, over radii that are
/// distances or lie just above them.
inline double doubling_sweep(const oscillab::MetricMeasureSpace& X, double D, double bump = 1e-9) {
    std::vector<double> radii;
    double dmax = 0;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < X.size(); ++j) {
            if (i == j) continue;
            radii.push_back(X.d(i, j));
            radii.push_back(X.d(i, j) * (1 + bump));
            dmax = std::max(dmax, X.d(i, j));
        }
    radii.push_back(dmax > 0 ? dmax * 4 : 1.0);
    if (dmax > 0) radii.push_back(dmax * bump);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    double c = 1;
    for (std::size_t x = 0; x < X.size(); ++x)
        for (double r : radii) {
            auto B = X.ball_set({x, r});
            double mu = X.measure(B);
            for (std::size_t x2 = 0; x2 < X.size(); ++x2)
                for (double r2 : radii) {
                    if (r2 < r) continue;
                    auto B2 = X.ball_set({x2, r2});
                    if (!B.is_subset_of(B2)) continue;
                    c = std::max(c, X.measure(B2) / mu * std::pow(r / r2, D));
                }
        }
    return c;
}

}  // namespace oracle
