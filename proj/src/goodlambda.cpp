#include "oscillab/goodlambda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "oscillab/czmax.hpp"
#include "oscillab/norms.hpp"

namespace oscillab {

struct DecompositionProvider::Impl {
    DyadicGrid grid;
    double theta;
    double delta;
    Builder builder;
    std::string name;
    std::function<ExactProviderData()> exact_fn;

    std::vector<std::unique_ptr<ProviderTriple>> cache;
    std::unique_ptr<std::once_flag[]> flags;
    std::once_flag exact_flag;
    std::unique_ptr<ExactProviderData> exact_data;

    Impl(DyadicGrid g, double t, double d, Builder b, std::string n, std::function<ExactProviderData()> e)
        : grid(g), theta(t), delta(d), builder(std::move(b)), name(std::move(n)), exact_fn(std::move(e)),
          cache(g.node_count()), flags(new std::once_flag[g.node_count()]) {}
};

DecompositionProvider::DecompositionProvider(DyadicGrid grid, double theta, double delta, Builder builder,
                                             std::string name, std::function<ExactProviderData()> exact) {
    if (!(theta >= 1.0) || !std::isfinite(theta)) throw DomainError("Theta must be at least 1");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("delta must be nonnegative");
    impl_ = std::make_shared<Impl>(grid, theta, delta, std::move(builder), std::move(name), std::move(exact));
}

const DyadicGrid& DecompositionProvider::grid() const { return impl_->grid; }
double DecompositionProvider::theta() const { return impl_->theta; }
double DecompositionProvider::delta() const { return impl_->delta; }
const std::string& DecompositionProvider::name() const { return impl_->name; }
bool DecompositionProvider::has_exact() const { return static_cast<bool>(impl_->exact_fn); }

const ProviderTriple& DecompositionProvider::triple(NodeRef q) const {
    if (q.level == 0) throw DomainError("providers are defined on proper subcubes only");
    const std::size_t id = impl_->grid.dense_id(q);
    std::call_once(impl_->flags[id], [&] {
        auto t = std::make_unique<ProviderTriple>(impl_->builder(impl_->grid, q));
        const std::size_t n = impl_->grid.leaves_of(q).size();
        if (t->G.size() != n || t->H.size() != n) throw DomainError("provider triple has the wrong length");
        impl_->cache[id] = std::move(t);
    });
    return *impl_->cache[id];
}

const ExactProviderData& DecompositionProvider::exact() const {
    if (!has_exact()) throw DomainError("provider has no exact data");
    std::call_once(impl_->exact_flag, [&] { impl_->exact_data = std::make_unique<ExactProviderData>(impl_->exact_fn()); });
    return *impl_->exact_data;
}

namespace {

std::vector<double> gather(std::span<const double> values, const std::vector<std::size_t>& leaves) {
    std::vector<double> out(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) out[i] = values[leaves[i]];
    return out;
}

double local_mean(const DyadicGrid& grid, NodeRef q, std::span<const double> local) {
    return tree_mean(grid.dim(), grid.depth() - q.level, local);
}

double pow2(int k) { return std::ldexp(1.0, k); }

std::vector<Rational> abs_diff(const std::vector<Rational>& v, const Rational& c) {
    std::vector<Rational> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = abs(v[i] - c);
    return out;
}

}  // namespace

GoodLambdaSetup jn_provider(const GridFunction& f, const OscillationFamily& osc) {
    const DyadicGrid grid = f.grid();
    const std::vector<double> vals(f.values().begin(), f.values().end());
    const std::vector<double> a0 = osc.apply_A_local(grid, NodeRef{0, 0}, vals);
    std::vector<double> F(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) F[i] = std::abs(vals[i] - a0[i]);

    auto builder = [osc, vals, a0](const DyadicGrid& g, NodeRef q) {
        const auto leaves = g.leaves_of(q);
        const auto local = gather(vals, leaves);
        const auto b = osc.apply_B_local(g, q, local);
        ProviderTriple t;
        t.G.resize(local.size());
        t.H.resize(local.size());
        for (std::size_t i = 0; i < local.size(); ++i) {
            t.G[i] = std::abs(b[i]);
            t.H[i] = std::abs((local[i] - b[i]) - a0[leaves[i]]);
        }
        t.g = local_mean(g, q, t.G);
        return t;
    };
    std::function<ExactProviderData()> exact;
    if (osc.kind() == OscillationKind::mean) {
        exact = [grid, vals] {
            ExactProviderData d;
            const auto r = to_rational(vals);
            const Rational mean = average_tree(grid, r)[0][0];
            d.F = abs_diff(r, mean);
            d.g = mean_oscillation_levels(grid, r);
            d.theta = Rational(static_cast<long>(grid.fanout()));
            d.delta = 0;
            return d;
        };
    }
    const double theta = pow2(grid.dim()) * osc.constant_cb();
    DecompositionProvider p(grid, theta, 0.0, builder, "jn:" + osc.name(), exact);
    return GoodLambdaSetup{f.with_values(std::move(F)), std::move(p)};
}

GoodLambdaSetup gr_provider(const GridFunction& w, std::optional<double> eps) {
    const DyadicGrid grid = w.grid();
    const std::vector<double> vals(w.values().begin(), w.values().end());
    for (double v : vals)
        if (v < 0.0) throw DomainError("weight must be nonnegative");
    const LevelArray<double> avg = average_tree(grid, vals);
    const double w0 = avg[0][0];
    const double e = eps ? *eps : gr_epsilon(w).epsilon;
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("epsilon must be finite and nonnegative");
    std::vector<double> F(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) F[i] = std::abs(vals[i] - w0);

    auto builder = [vals, avg, w0, e](const DyadicGrid& g, NodeRef q) {
        const auto leaves = g.leaves_of(q);
        const double wq = avg[q.level][q.index];
        ProviderTriple t;
        t.G.resize(leaves.size());
        t.H.assign(leaves.size(), std::abs(wq - w0));
        for (std::size_t i = 0; i < leaves.size(); ++i) t.G[i] = std::abs(vals[leaves[i]] - wq);
        t.g = e * w0;
        return t;
    };
    auto exact = [grid, vals, w, eps] {
        ExactProviderData d;
        const auto r = to_rational(vals);
        const Rational w0r = average_tree(grid, r)[0][0];
        const Rational er = eps ? Rational(*eps) : gr_epsilon_exact(w);
        d.F = abs_diff(r, w0r);
        d.g.resize(grid.depth() + 1);
        for (int j = 0; j <= grid.depth(); ++j) d.g[j].assign(grid.nodes_at(j), er * w0r);
        d.theta = Rational(static_cast<long>(grid.fanout()));
        d.delta = d.theta * er;
        return d;
    };
    const double theta = pow2(grid.dim());
    DecompositionProvider p(grid, theta, theta * e, builder, "gr", exact);
    return GoodLambdaSetup{w.with_values(std::move(F)), std::move(p)};
}

GoodLambdaSetup gr_osc_provider(const GridFunction& w, const OscillationFamily& osc, std::optional<double> eps) {
    const DyadicGrid grid = w.grid();
    const std::vector<double> vals(w.values().begin(), w.values().end());
    for (double v : vals)
        if (v < 0.0) throw DomainError("weight must be nonnegative");
    const double e = eps ? *eps : gr_epsilon(w, &osc).epsilon;
    if (!(e >= 0.0) || !std::isfinite(e)) throw DomainError("epsilon must be finite and nonnegative");
    const double cb = osc.constant_cb();
    const std::vector<double> a0 = osc.apply_A_local(grid, NodeRef{0, 0}, vals);
    std::vector<double> F(vals.size()), abs_a0(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        F[i] = std::abs(vals[i] - a0[i]);
        abs_a0[i] = std::abs(a0[i]);
    }
    const double g_const = e * (1.0 + e) * cb * cb * local_mean(grid, NodeRef{0, 0}, abs_a0);

    auto builder = [osc, vals, a0, g_const](const DyadicGrid& g, NodeRef q) {
        const auto leaves = g.leaves_of(q);
        const auto local = gather(vals, leaves);
        const auto b = osc.apply_B_local(g, q, local);
        ProviderTriple t;
        t.G.resize(local.size());
        t.H.resize(local.size());
        for (std::size_t i = 0; i < local.size(); ++i) {
            t.G[i] = std::abs(b[i]);
            t.H[i] = std::abs((local[i] - b[i]) - a0[leaves[i]]);
        }
        t.g = g_const;
        return t;
    };
    const double theta = pow2(grid.dim()) * cb;
    DecompositionProvider p(grid, theta, theta * e, builder, "gr-osc:" + osc.name());
    return GoodLambdaSetup{w.with_values(std::move(F)), std::move(p)};
}

DecompositionProvider table_provider(const DyadicGrid& grid, double theta, double delta,
                                     std::vector<std::pair<DyadicCube, ProviderTriple>> triples, std::string name) {
    auto table = std::make_shared<std::map<DyadicCube, ProviderTriple>>();
    for (auto& [q, t] : triples) {
        if (q.dim() != grid.dim() || q.level() < 1 || q.level() > grid.depth())
            throw DomainError("provider cube " + q.to_string() + " is not a proper subcube of the grid");
        const std::size_t n = grid.leaves_of(grid.node(q)).size();
        if (t.G.size() != n || t.H.size() != n)
            throw DomainError("provider triple for " + q.to_string() + " has the wrong length");
        if (t.g < 0.0) throw DomainError("g must be nonnegative");
        (*table)[q] = std::move(t);
    }
    grid.for_each_node([&](NodeRef n) {
        if (n.level > 0 && !table->count(grid.cube(n)))
            throw DomainError("provider is missing cube " + grid.cube(n).to_string());
    });
    auto builder = [table](const DyadicGrid& g, NodeRef q) { return table->at(g.cube(q)); };
    return DecompositionProvider(grid, theta, delta, builder, std::move(name));
}

namespace {

LevelArray<double> provider_g_tree(const DecompositionProvider& provider) {
    const DyadicGrid& grid = provider.grid();
    LevelArray<double> g(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) g[j].assign(grid.nodes_at(j), 0.0);
    grid.for_each_node([&](NodeRef n) {
        if (n.level > 0) g[n.level][n.index] = provider.triple(n).g;
    });
    return g;
}

void check_same_grid(const GridFunction& F, const DecompositionProvider& provider) {
    if (F.dim() != provider.grid().dim() || F.depth() != provider.grid().depth())
        throw DomainError("F and the provider live on different grids");
}

}  // namespace

GridFunction g_star(const GridFunction& F, const DecompositionProvider& provider) {
    check_same_grid(F, provider);
    return F.with_values(g_star_values(provider.grid(), provider_g_tree(provider)));
}

HypothesisReport check_hypotheses(const GridFunction& F, const DecompositionProvider& provider, double rel_tol) {
    check_same_grid(F, provider);
    const DyadicGrid& grid = provider.grid();
    const std::vector<double> vals(F.values().begin(), F.values().end());
    for (double v : vals)
        if (v < 0.0) throw DomainError("F must be nonnegative");
    const LevelArray<double> avg = average_tree(grid, vals);
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, v);
    HypothesisReport rep;
    rep.tolerance = rel_tol * std::max(scale, 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    rep.min_slack[0] = rep.min_slack[1] = rep.min_slack[2] = inf;
    grid.for_each_node([&](NodeRef n) {
        if (n.level == 0) return;
        ++rep.cubes_checked;
        const ProviderTriple& t = provider.triple(n);
        const auto leaves = grid.leaves_of(n);
        const double parent_avg = avg[n.level - 1][grid.parent(n).index];
        const DyadicCube q = grid.cube(n);
        double s1 = inf, hmax = 0.0;
        bool negative = t.g < 0.0;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (t.G[i] < 0.0 || t.H[i] < 0.0) negative = true;
            s1 = std::min(s1, t.G[i] + t.H[i] - vals[leaves[i]]);
            hmax = std::max(hmax, t.H[i]);
        }
        if (negative) s1 = std::min(s1, -inf);
        const double s2 = provider.theta() * parent_avg - hmax;
        const double s3 = provider.delta() * parent_avg + t.g - local_mean(grid, n, t.G);
        const double s[3] = {s1, s2, s3};
        for (int c = 0; c < 3; ++c) {
            rep.min_slack[c] = std::min(rep.min_slack[c], s[c]);
            if (s[c] < -rep.tolerance) rep.violations.push_back(HypothesisViolation{q, c + 1, -s[c]});
        }
    });
    for (double& s : rep.min_slack)
        if (s == inf) s = 0.0;
    return rep;
}

bool GoodLambdaReport::pass() const {
    return std::all_of(points.begin(), points.end(), [](const LevelSetPoint& p) { return p.skipped || p.pass; });
}

std::size_t GoodLambdaReport::skipped() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const LevelSetPoint& p) { return p.skipped; }));
}

namespace {

template <class T>
double to_double(const T& v) {
    if constexpr (std::is_same_v<T, double>)
        return v;
    else
        return static_cast<double>(v);
}

template <class T>
void levelset_sweep(const DyadicGrid& grid, const std::vector<T>& F, const LevelArray<T>& g, const T& theta,
                    const T& delta, const LevelSetGrid& pg, GoodLambdaReport& rep) {
    const LevelArray<T> avg = average_tree(grid, F);
    const T mean = avg[0][0];
    const std::vector<T> MF = sup_over_ancestors(grid, avg);
    const std::vector<T> Gs = g_star_values(grid, g);
    const double leaves = static_cast<double>(grid.leaf_count());
    for (double Kin : pg.Ks)
        for (double gin : pg.gammas)
            for (double lin : pg.lambdas) {
                const T K = pg.K_times_theta ? T(Kin) * theta : T(Kin);
                const T gamma(gin);
                const T lambda = pg.lambda_times_mean ? T(lin) * mean : T(lin);
                LevelSetPoint pt;
                pt.K = to_double(K);
                pt.gamma = gin;
                pt.lambda = to_double(lambda);
                if (!(lambda >= mean)) {
                    pt.skipped = true;
                    pt.reason = "lambda below the mean of F on Q0";
                } else if (!(K > theta)) {
                    pt.skipped = true;
                    pt.reason = "K must exceed Theta";
                } else if (!(gamma > T(0) && gamma < T(1))) {
                    pt.skipped = true;
                    pt.reason = "gamma must lie in (0, 1)";
                }
                if (pt.skipped) {
                    rep.points.push_back(pt);
                    continue;
                }
                const T Klambda = K * lambda;
                const T glambda = gamma * lambda;
                long count_E = 0, count_Omega = 0;
                for (std::size_t i = 0; i < MF.size(); ++i) {
                    if (MF[i] > lambda) ++count_Omega;
                    if (MF[i] > Klambda && !(Gs[i] > glambda)) ++count_E;
                }
                // |E| (K - Theta) <= (delta + gamma) |Omega|, without dividing
                pt.pass = T(count_E) * (K - theta) <= (delta + gamma) * T(count_Omega);
                pt.measure_E = count_E / leaves;
                pt.measure_Omega = count_Omega / leaves;
                const T bound = (delta + gamma) / (K - theta) * T(count_Omega) / T(static_cast<long>(grid.leaf_count()));
                pt.bound = to_double(bound);
                if (pt.bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, pt.measure_E / pt.bound);
                rep.points.push_back(pt);
            }
}

}  // namespace

GoodLambdaReport verify_levelset_inequality(const GridFunction& F, const DecompositionProvider& provider,
                                            const LevelSetGrid& pg, bool exact) {
    check_same_grid(F, provider);
    const DyadicGrid& grid = provider.grid();
    GoodLambdaReport rep;
    rep.theta = provider.theta();
    rep.delta = provider.delta();
    rep.exact = exact;
    if (exact) {
        const ExactProviderData& d = provider.exact();
        levelset_sweep<Rational>(grid, d.F, d.g, d.theta, d.delta, pg, rep);
    } else {
        std::vector<double> vals(F.values().begin(), F.values().end());
        for (double v : vals)
            if (v < 0.0) throw DomainError("F must be nonnegative");
        levelset_sweep<double>(grid, vals, provider_g_tree(provider), provider.theta(), provider.delta(), pg, rep);
    }
    return rep;
}

double admissible_p_range(double theta, double delta) {
    if (!(theta >= 1.0) || !std::isfinite(theta)) throw DomainError("Theta must be at least 1");
    if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
    if (delta >= 0.5) throw DomainError("empty exponent range: delta must be below 1/2");
    if (delta == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 + std::log(1.0 / (2.0 * delta)) / std::log(2.0 * theta);
}

DerivedConstant derive_constant(double p, double theta, double delta) {
    const double pmax = admissible_p_range(theta, delta);
    if (!(p > 1.0) || !(p < pmax)) throw DomainError("p outside the admissible range");
    DerivedConstant c;
    const double two_theta = 2.0 * theta;
    c.gamma = (theta * std::pow(two_theta, -p) - delta) / 2.0;
    if (!(c.gamma > 0.0)) throw DomainError("p outside the admissible range");
    c.r = std::pow(two_theta, p) * (delta + c.gamma) / theta;
    c.C = two_theta * std::max(1.0, 1.0 / c.gamma) * std::pow(1.0 - c.r, -1.0 / p);
    return c;
}

NormReport verify_norm_inequalities(const GridFunction& F, const DecompositionProvider& provider, double p) {
    check_same_grid(F, provider);
    const DyadicGrid& grid = provider.grid();
    const std::vector<double> vals(F.values().begin(), F.values().end());
    for (double v : vals)
        if (v < 0.0) throw DomainError("F must be nonnegative");
    NormReport rep;
    rep.p = p;
    rep.constant = derive_constant(p, provider.theta(), provider.delta());
    const LevelArray<double> avg = average_tree(grid, vals);
    rep.F_mean = avg[0][0];
    const std::vector<double> MF = sup_over_ancestors(grid, avg);
    const std::vector<double> Gs = g_star_values(grid, provider_g_tree(provider));
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] > MF[i]) rep.pointwise_F_le_MF = false;
    const double C = rep.constant.C;
    rep.weak_F = weak_lp_norm(vals, p);
    rep.weak_MF = weak_lp_norm(MF, p);
    rep.weak_Gstar = weak_lp_norm(Gs, p);
    rep.weak_rhs = C * rep.weak_Gstar + C * rep.F_mean;
    rep.strong_F = lp_norm(vals, p);
    rep.strong_MF = lp_norm(MF, p);
    rep.strong_Gstar = lp_norm(Gs, p);
    rep.strong_rhs = C * rep.strong_Gstar + C * rep.F_mean;
    const double slack = 1.0 + 1e-12;
    rep.weak_ok = rep.weak_MF <= rep.weak_rhs * slack;
    rep.strong_ok = rep.strong_MF <= rep.strong_rhs * slack;
    return rep;
}

GrEpsilon gr_epsilon(const GridFunction& w, const OscillationFamily* osc) {
    const DyadicGrid grid = w.grid();
    const std::vector<double> vals(w.values().begin(), w.values().end());
    if (!osc)
        for (double v : vals)
            if (v < 0.0) throw DomainError("weight must be nonnegative");
    const LevelArray<double> avg = average_tree(grid, vals);
    GrEpsilon out;
    grid.for_each_node([&](NodeRef n) {
        if (out.infinite) return;
        const auto local = gather(vals, grid.leaves_of(n));
        double num, den;
        if (osc) {
            const auto b = osc->apply_B_local(grid, n, local);
            std::vector<double> ab(b.size()), aa(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) {
                ab[i] = std::abs(b[i]);
                aa[i] = std::abs(local[i] - b[i]);
            }
            num = local_mean(grid, n, ab);
            den = local_mean(grid, n, aa);
        } else {
            const double c = avg[n.level][n.index];
            std::vector<double> ab(local.size());
            for (std::size_t i = 0; i < local.size(); ++i) ab[i] = std::abs(local[i] - c);
            num = local_mean(grid, n, ab);
            den = c;
        }
        if (num == 0.0) return;
        if (den == 0.0) {
            out.infinite = true;
            out.epsilon = std::numeric_limits<double>::infinity();
            out.attained_at = grid.cube(n);
            return;
        }
        if (num / den > out.epsilon) {
            out.epsilon = num / den;
            out.attained_at = grid.cube(n);
        }
    });
    return out;
}

Rational gr_epsilon_exact(const GridFunction& w) {
    const DyadicGrid grid = w.grid();
    const auto r = to_rational(w.values());
    const LevelArray<Rational> avg = average_tree(grid, r);
    const LevelArray<Rational> osc = mean_oscillation_levels(grid, r);
    Rational best = 0;
    grid.for_each_node([&](NodeRef n) {
        const Rational& num = osc[n.level][n.index];
        if (num == 0) return;
        const Rational& den = avg[n.level][n.index];
        if (den <= 0) throw DomainError("zero average with nonzero oscillation: epsilon is infinite");
        best = std::max(best, Rational(num / den));
    });
    return best;
}

double gr_critical_exponent(double eps, int dim, double c_b) {
    if (!(eps >= 0.0)) throw DomainError("epsilon must be nonnegative");
    if (eps == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(1.0 / eps) / std::log(pow2(dim + 1) * c_b);
}

double gr_threshold(int dim, bool generalized, double c_b) {
    return generalized ? pow2(-(dim + 2)) / c_b : pow2(-(dim + 1));
}

GrReport gr_self_improve(const GridFunction& w, const OscillationFamily* osc, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be at least 1");
    const DyadicGrid grid = w.grid();
    const int n = grid.dim();
    GrReport rep;
    rep.generalized = osc != nullptr;
    rep.c_b = osc ? osc->constant_cb() : 1.0;
    rep.p = p;
    const GrEpsilon ge = gr_epsilon(w, osc);
    rep.epsilon = ge.epsilon;
    rep.epsilon_infinite = ge.infinite;
    rep.threshold = gr_threshold(n, rep.generalized, rep.c_b);
    if (ge.infinite) {
        rep.not_applicable_reason = "epsilon is infinite";
        rep.p_of_eps = 1.0;
        return rep;
    }
    rep.p_of_eps = gr_critical_exponent(rep.epsilon, n, rep.c_b);
    if (!(rep.epsilon < rep.threshold)) {
        rep.not_applicable_reason = "epsilon is not below the smallness threshold";
        return rep;
    }
    if (!(p < rep.p_of_eps)) {
        rep.not_applicable_reason = "p is not below p(epsilon)";
        return rep;
    }
    rep.applicable = true;
    rep.theta = pow2(n) * rep.c_b;
    rep.delta = rep.theta * rep.epsilon;
    const double eps = rep.epsilon;
    if (p == 1.0) {
        rep.C_oscillation = 1.0;
    } else {
        rep.constant = derive_constant(p, rep.theta, rep.delta);
        const double C = rep.constant.C;
        rep.C_oscillation = rep.generalized ? C * ((1.0 + eps) * rep.c_b * rep.c_b + 1.0) : 2.0 * C;
    }
    rep.C_reverse = (1.0 + rep.C_oscillation * eps) * rep.c_b;

    const std::vector<double> vals(w.values().begin(), w.values().end());
    const LevelArray<double> avg = average_tree(grid, vals);
    auto ratio = [](double lhs, double rhs) {
        if (rhs > 0.0) return lhs / rhs;
        return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    grid.for_each_node([&](NodeRef q) {
        ++rep.cubes;
        const auto local = gather(vals, grid.leaves_of(q));
        const double wq = avg[q.level][q.index];
        std::vector<double> b(local.size()), a(local.size());
        if (osc) {
            b = osc->apply_B_local(grid, q, local);
            for (std::size_t i = 0; i < b.size(); ++i) a[i] = std::abs(local[i] - b[i]);
        } else {
            for (std::size_t i = 0; i < b.size(); ++i) b[i] = local[i] - wq;
        }
        const double den = osc ? local_mean(grid, q, a) : wq;
        const double r1 = ratio(lp_norm(b, p), rep.C_oscillation * eps * den);
        const double r2 = ratio(lp_norm(local, p), rep.C_reverse * wq);
        if (r1 > rep.worst_oscillation_ratio || r2 > rep.worst_reverse_ratio) rep.worst_cube = grid.cube(q);
        rep.worst_oscillation_ratio = std::max(rep.worst_oscillation_ratio, r1);
        rep.worst_reverse_ratio = std::max(rep.worst_reverse_ratio, r2);
    });
    const double slack = 1.0 + 1e-12;
    rep.pass = rep.worst_oscillation_ratio <= slack && rep.worst_reverse_ratio <= slack;
    return rep;
}

}  // namespace oscillab
