// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "oscillab/czmax.hpp"
#include "oscillab/goodlambda.hpp"
#include "oscillab/io.hpp"
#include "oscillab/metric.hpp"
#include "oscillab/norms.hpp"
#include "oscillab/oscillation.hpp"
#include "oscillab/selfimprove.hpp"

using namespace oscillab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel_err(double a, double b) {
    if (a == b) return 0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

OscillationFamily means(const GridFunction& f) { return mean_oscillation_family(f.grid(), f.root()); }

// ---------------------------------------------------------------- 1

void antichain_exactness() {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(-1, 1), ua(0.05, 1);
    std::map<std::pair<int, int>, std::vector<std::vector<NodeRef>>> shapes;
    auto chains = [&](const DyadicGrid& g) -> const std::vector<std::vector<NodeRef>>& {
        auto key = std::make_pair(g.dim(), g.depth());
        if (!shapes.count(key)) shapes[key] = oracle::antichains(g, NodeRef{0, 0});
        return shapes[key];
    };
    double lib_time = 0, worst = 0;
    std::size_t float_checks = 0, exact_checks = 0, mismatches = 0;
    int dim2_exact_budget = 4;
    const auto t0 = Clock::now();
    for (int k = 0; k < 200; ++k) {
        const int dim = k < 100 ? 1 : 2;
        const int depth = dim == 1 ? 1 + k % 3 : 1 + k % 2;
        DyadicGrid grid(dim, depth);
        std::vector<double> v(grid.leaf_count());
        for (double& x : v) x = u(rng);
        const GridFunction f = build_grid_function(dim, depth, BaseCube::unit(dim), v);
        std::map<DyadicCube, double> table;
        LevelArray<double> a(depth + 1), osc(depth + 1), vol(depth + 1);
        for (int j = 0; j <= depth; ++j) {
            a[j].resize(grid.nodes_at(j));
            osc[j].resize(grid.nodes_at(j));
            vol[j].assign(grid.nodes_at(j), grid.relative_volume(j));
            for (std::size_t i = 0; i < grid.nodes_at(j); ++i) {
                a[j][i] = ua(rng);
                table[grid.cube(NodeRef{j, i})] = a[j][i];
                osc[j][i] = oracle::mean_oscillation(grid, f.values(), NodeRef{j, i});
            }
        }
        const CubeFunctional af = table_functional(table);
        const auto& all = chains(grid);
        const bool do_exact = dim == 1 || depth == 1 || dim2_exact_budget-- > 0;
        for (double p : {1.5, 2.0, 3.0}) {
            const auto t1 = Clock::now();
            const double jn = jn_norm(f, p, f.root(), means(f));
            const double dp = dp_norm(af, p, f.root(), f.base(), depth);
            lib_time += seconds_since(t1);
            const double jn_ref = std::pow(oracle::best_antichain_sum<double>(all, [&](NodeRef n) {
                return std::pow(osc[n.level][n.index], p) * vol[n.level][n.index];
            }), 1 / p);
            const double dp_ref = std::pow(oracle::best_antichain_sum<double>(all, [&](NodeRef n) {
                return std::pow(a[n.level][n.index], p) * vol[n.level][n.index];
            }), 1 / p) / a[0][0];
            worst = std::max({worst, rel_err(jn, jn_ref), rel_err(dp, dp_ref)});
            float_checks += 2;
            if (!do_exact) continue;
            // rational weights shared by the DP and the enumeration
            for (const LevelArray<double>* val : {&osc, &a}) {
                LevelArray<Rational> w = power_weights_exact(grid, *val, p);
                const Rational brute = oracle::best_antichain_sum<Rational>(
                    all, [&](NodeRef n) { return w[n.level][n.index]; });
                const auto t2 = Clock::now();
                const AntichainDP<Rational> dpx = antichain_dp(grid, w);
                lib_time += seconds_since(t2);
                if (dpx.best[0][0] != brute) ++mismatches;
                ++exact_checks;
            }
        }
    }
    const bool ok = worst <= 1e-12 && mismatches == 0 && lib_time < 10;
    report(1, "antichain-dp-exactness", ok,
           fmt("float checks %zu, max rel err %.2e; exact checks %zu, mismatches %zu; library %.2f s (total %.1f s)",
               float_checks, worst, exact_checks, mismatches, lib_time, seconds_since(t0)));
}

// ---------------------------------------------------------------- 2, 3

GridFunction gr_random(int dim, int depth, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.01, 0.1), u(-1, 1);
    const double amp = ua(rng);
    DyadicGrid grid(dim, depth);
    std::vector<double> v(grid.leaf_count());
    for (double& x : v) x = 1 + amp * u(rng);
    return build_grid_function(dim, depth, BaseCube::unit(dim), std::move(v));
}

void levelset_and_norms() {
    const LevelSetGrid pg{{1.1, 2, 4}, {0.1, 0.5, 0.9}, {1, 2, 4, 8}, true, true};
    std::mt19937_64 rng(2002);
    std::size_t points = 0, skipped = 0, bad_points = 0, hyp_fail = 0, runs = 0;
    std::size_t norm_runs = 0, norm_fail = 0, strong_lp_fail = 0, nonempty_E = 0;
    double worst_ratio = 0, time2 = 0;
    auto tally = [&](const GoodLambdaReport& r) {
        for (const auto& pt : r.points) {
            ++points;
            if (pt.skipped) ++skipped;
            else if (!pt.pass) ++bad_points;
            if (pt.measure_E > 0) ++nonempty_E;
        }
        worst_ratio = std::max(worst_ratio, r.worst_ratio);
    };
    for (const std::string kind : {"jn", "gr"})
        for (int dim : {1, 2}) {
            const int depth = dim == 1 ? 8 : 4;
            for (int k = 0; k < 100; ++k) {
                std::optional<GoodLambdaSetup> s;
                if (kind == "jn") {
                    const GridFunction f = random_uniform(dim, depth, rng());
                    s.emplace(jn_provider(f, means(f)));
                } else {
                    s.emplace(gr_provider(gr_random(dim, depth, rng)));
                }
                const auto t0 = Clock::now();
                if (!check_hypotheses(s->F, s->provider).pass()) ++hyp_fail;
                const GoodLambdaReport r = verify_levelset_inequality(s->F, s->provider, pg, true);
                time2 += seconds_since(t0);
                ++runs;
                tally(r);

                const double pmax = admissible_p_range(s->provider.theta(), s->provider.delta());
                const double p = std::isfinite(pmax) ? (1 + pmax) / 2 : 2.0;
                const NormReport n = verify_norm_inequalities(s->F, s->provider, p);
                ++norm_runs;
                if (!n.pass()) ++norm_fail;
                if (!(n.strong_F <= n.strong_MF) || !n.pointwise_F_le_MF) ++strong_lp_fail;
            }
        }
    const std::size_t main_nonempty = nonempty_E;
    // uniform random data leaves E empty; perturbed -log|x| in dim 1 gives nonempty E
    std::uniform_real_distribution<double> un(-1, 1), unoise(0, 0.2);
    const auto t_log = Clock::now();
    for (int k = 0; k < 100; ++k) {
        const GridFunction b = bmo_log(1, 8);
        std::vector<double> v(b.values().begin(), b.values().end());
        const double noise = unoise(rng);
        for (double& x : v) x += noise * un(rng);
        const GridFunction f = build_grid_function(1, 8, BaseCube::unit(1), v);
        const GoodLambdaSetup s = jn_provider(f, means(f));
        if (!check_hypotheses(s.F, s.provider).pass()) ++hyp_fail;
        tally(verify_levelset_inequality(s.F, s.provider, pg, true));
        ++runs;
    }
    time2 += seconds_since(t_log);
    report(2, "good-lambda-level-sets", hyp_fail == 0 && skipped == 0 && bad_points == 0 && time2 < 60,
           fmt("%zu runs, %zu grid points, %zu skipped, %zu violated, hypotheses failed %zu, nonempty E %zu random "
               "+ %zu log-type, worst |E|/bound %.3f, %.1f s",
               runs, points, skipped, bad_points, hyp_fail, main_nonempty, nonempty_E - main_nonempty, worst_ratio,
               time2));
    report(3, "good-lambda-norm-inequalities", norm_fail == 0 && strong_lp_fail == 0,
           fmt("%zu runs, norm inequality failures %zu, ||F||_p > ||MF||_p in %zu", norm_runs, norm_fail,
               strong_lp_fail));
}

// ---------------------------------------------------------------- 4

void sharp_chain() {
    std::mt19937_64 rng(4004);
    std::size_t runs = 0, bad = 0;
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
        const int dim = k % 2 ? 2 : 1;
        const int depth = dim == 1 ? 3 + k % 5 : 2 + k % 3;
        const GridFunction f = random_uniform(dim, depth, rng(), -1, 1);
        for (double p : {1.5, 2.0, 3.0}) {
            const EmbeddingReport e = verify_weak_embedding(f, p, f.root(), means(f));
            ++runs;
            if (!e.sharp_chain_ok) ++bad;
            if (e.jn > 0) worst = std::max(worst, e.weak_sharp / e.jn);
        }
    }
    report(4, "sharp-maximal-weak-embedding", bad == 0,
           fmt("%zu checks, %zu failures, max ||M#f||_weak / jn = %.4f", runs, bad, worst));
}

// ---------------------------------------------------------------- 5

void gr_self_improvement() {
    std::size_t runs = 0, bad_formula = 0, bad_si = 0, bad_eps = 0, bad_mono = 0;
    double worst = 0;
    for (int n : {1, 2}) {
        std::vector<std::pair<double, double>> eps_p;
        for (int j = 4; j <= 10; ++j) {
            const double e0 = std::ldexp(1.0, -j);
            const GridFunction w = gr_weight(n, n == 1 ? 8 : 4, e0, 500 + j);
            const GrEpsilon ge = gr_epsilon(w);
            if (ge.infinite || ge.epsilon > e0) ++bad_eps;
            const double pe = gr_critical_exponent(ge.epsilon, n);
            const double expect = std::log2(1 / ge.epsilon) / (n + 1);
            const double err = rel_err(pe, expect);
            worst = std::max(worst, err);
            if (err > 1e-12) ++bad_formula;
            const GrReport r = gr_self_improve(w, nullptr, (1 + pe) / 2);
            if (!r.pass || !r.applicable) ++bad_si;
            eps_p.emplace_back(ge.epsilon, pe);
            ++runs;
        }
        // p(eps) on a fine grid of eps and on the generated instances
        for (double e = 1e-4; e < 0.24; e *= 1.1)
            if (!(gr_critical_exponent(e * 1.1, n) < gr_critical_exponent(e, n))) ++bad_mono;
        std::sort(eps_p.begin(), eps_p.end());
        for (std::size_t i = 1; i < eps_p.size(); ++i)
            if (eps_p[i].first > eps_p[i - 1].first && !(eps_p[i].second < eps_p[i - 1].second)) ++bad_mono;
    }
    report(5, "gurov-reshetnyak-self-improvement", !bad_formula && !bad_si && !bad_eps && !bad_mono,
           fmt("%zu weights, p(eps) max rel err %.1e, self-improvement failures %zu, eps > eps0 %zu, monotonicity "
               "failures %zu",
               runs, worst, bad_si, bad_eps, bad_mono));
}

// ---------------------------------------------------------------- 6

void oscillation_axioms() {
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst_repro = 0, worst_nest = 0;
    std::size_t axiom_fail = 0, bit_fail = 0, families = 0;
    for (int dim : {1, 2})
        for (int m : {0, 1, 2})
            for (int depth = 1; depth <= 4; ++depth) {
                DyadicGrid grid(dim, depth);
                const DyadicCube q0 = DyadicCube::root(dim);
                const OscillationFamily osc = polynomial_oscillation_family(grid, q0, m);
                ++families;
                const auto exps = monomial_exponents(dim, m);
                std::vector<GridFunction> probes;
                for (int t = 0; t < 3; ++t) {
                    std::vector<double> c(exps.size());
                    for (double& x : c) x = u(rng);
                    const GridFunction poly = cell_averaged_polynomial(BaseCube::unit(dim), depth, exps, c);
                    // B_Q of a polynomial vanishes on every cube
                    double scale = 0;
                    for (double v : poly.values()) scale = std::max(scale, std::abs(v));
                    grid.for_each_node([&](NodeRef n) {
                        const GridFunction b = osc.apply_B(poly, grid.cube(n));
                        for (double v : b.values()) worst_repro = std::max(worst_repro, std::abs(v) / scale);
                    });
                    probes.push_back(random_uniform(dim, depth, rng(), -1, 1));
                }
                const AxiomReport ar = verify_oscillation_axioms(osc, probes, 1e-10);
                worst_nest = std::max(worst_nest, ar.nesting_residual);
                if (!ar.pass()) ++axiom_fail;
                if (m == 0) {
                    const OscillationFamily mean = mean_oscillation_family(grid, q0);
                    for (const auto& f : probes) {
                        const LevelArray<double> a = osc.oscillation_tree(f), b = mean.oscillation_tree(f);
                        if (a != b) ++bit_fail;
                        grid.for_each_node([&](NodeRef n) {
                            const GridFunction x = osc.apply_A(f, grid.cube(n)), y = mean.apply_A(f, grid.cube(n));
                            if (!std::equal(x.values().begin(), x.values().end(), y.values().begin())) ++bit_fail;
                        });
                    }
                }
            }
    report(6, "oscillation-axioms", worst_repro <= 1e-10 && worst_nest <= 1e-10 && !axiom_fail && !bit_fail,
           fmt("%zu families, reproduction %.1e, nesting residual %.1e, axiom failures %zu, m=0 bit mismatches %zu",
               families, worst_repro, worst_nest, axiom_fail, bit_fail));
}

// ---------------------------------------------------------------- 7

void vitali_covers() {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> u(0, 1), ur(0.25, 0.6);
    std::size_t covers = 0, bad = 0, nonempty = 0, selected = 0, indep_bad = 0;
    const std::vector<double> Dgrid{0.5, 1, 1.5, 2, 2.5, 3};
    // independent re-check of disjointness, (a), (c) and the radius bound
    auto recheck = [&](const MetricMeasureSpace& X, const CoverReport& c, const std::vector<double>& F, double lam,
                       const Ball& B0, double eta, double tau) {
        std::vector<SiteSet> sets;
        SiteSet uni(X.size()), uni5(X.size()), om(X.size());
        for (std::size_t y : c.omega) om.set(y);
        for (const Ball& b : c.selected) {
            const SiteSet s = X.ball_set(b);
            for (const auto& t : sets)
                if (s.intersects(t)) ++indep_bad;
            sets.push_back(s);
            uni |= s;
            uni5 |= X.ball_set(b.dilate(5));
            if (!(X.average(s, F) > lam)) ++indep_bad;
            if (b.radius > eta * B0.radius / (15 * tau)) ++indep_bad;
        }
        if (!uni.is_subset_of(om) || !om.is_subset_of(uni5)) ++indep_bad;
    };
    const auto t0 = Clock::now();
    for (int k = 0; k < 100; ++k) {
        const MetricMeasureSpace X = random_planar_space(50, rng());
        const DoublingProfile prof = doubling_constants(X, Dgrid);
        const double tau = k % 2 ? 2.0 : 1.0;
        const double eta = 1.0;
        const Ball B0{static_cast<std::size_t>(rng() % 50), ur(rng)};
        const BallBasis basis = ball_basis(X, B0, eta);
        // heavy tails: a few sites carry most of the mass
        std::vector<double> F(X.size());
        for (double& x : F) x = std::pow(1 - u(rng), -3.0) - 1;
        const double thr = lambda0(tau, eta, prof) * X.average(basis.hat_sites, F);
        for (double mult : {1.0, 2.0, 4.0}) {
            const double lam = mult * thr;
            const CoverReport c = vitali_cz_cover(X, basis, F, lam, tau, prof);
            ++covers;
            if (!c.pass()) ++bad;
            if (!c.omega.empty()) ++nonempty;
            selected += c.selected.size();
            recheck(X, c, F, lam, B0, eta, tau);
        }
    }
    // the planar instances above have lambda0 above mu(hat B0) / min weight, so Omega is always empty;
    // jittered lines of 100 sites with spikes give nonempty covers
    std::size_t line_covers = 0, line_nonempty = 0, line_selected = 0;
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({static_cast<double>(i)});
    const MetricMeasureSpace L = MetricMeasureSpace::euclidean(pts, std::vector<double>(pts.size(), 1.0));
    const DoublingProfile lprof = doubling_constants(L, Dgrid);
    for (int k = 0; k < 100; ++k) {
        const double eta = 4.0 + (k % 3), tau = 1.0;
        const std::size_t c0 = 45 + rng() % 11;
        const Ball B0{c0, 50 / (1 + eta)};
        const BallBasis basis = ball_basis(L, B0, eta);
        std::vector<double> F(L.size(), 0.0);
        const std::size_t spikes = 1 + rng() % 2;
        for (std::size_t j = 0; j < spikes; ++j) F[c0 - 4 + rng() % 9] = 1 + u(rng);
        const double thr = lambda0(tau, eta, lprof) * L.average(basis.hat_sites, F);
        for (double mult : {1.0, 1.25, 1.5}) {
            const CoverReport c = vitali_cz_cover(L, basis, F, mult * thr, tau, lprof);
            recheck(L, c, F, mult * thr, B0, eta, tau);
            ++line_covers;
            if (!c.pass()) ++bad;
            if (!c.omega.empty()) ++line_nonempty;
            line_selected += c.selected.size();
        }
    }
    const double secs = seconds_since(t0);
    report(7, "vitali-cz-cover", bad == 0 && indep_bad == 0 && secs < 60,
           fmt("%zu planar covers (nonempty %zu, balls %zu) + %zu line covers (nonempty %zu, balls %zu), %zu failed, "
               "independent re-check failures %zu, %.1f s",
               covers, nonempty, selected, line_covers, line_nonempty, line_selected, bad, indep_bad, secs));
}

// ---------------------------------------------------------------- 8, 9

MetricMeasureSpace small_space(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1), uw(0.5, 1.5);
    std::vector<std::vector<double>> pts;
    while (pts.size() < n) {
        // coordinates on a 1/16 grid keep distances distinct but not generic
        std::vector<double> p{std::floor(u(rng) * 16) / 16, std::floor(u(rng) * 16) / 16};
        bool dup = false;
        for (const auto& q : pts) dup = dup || (q == p);
        if (!dup) pts.push_back(p);
    }
    std::vector<double> w(n);
    for (double& x : w) x = uw(rng);
    try {
        return MetricMeasureSpace::euclidean(pts, w);
    } catch (const std::invalid_argument&) {
        // collinear triples can break the triangle inequality by one ulp; redraw
        return small_space(rng, n);
    }
}

void metric_jn_exactness() {
    std::mt19937_64 rng(8008);
    std::uniform_real_distribution<double> u(-1, 1);
    std::size_t instances = 0, tries = 0, bad = 0, count_bad = 0, max_cand = 0;
    while (instances < 100 && tries < 100000) {
        ++tries;
        const MetricMeasureSpace X = small_space(rng, 3 + rng() % 4);
        std::vector<double> f(X.size());
        for (double& x : f) x = u(rng);
        const double rho = instances % 2 ? 0.5 : 1.0;
        const double tau = (instances / 2) % 2 ? 2.0 : 1.0;
        double dmax = 0;
        for (std::size_t i = 0; i < X.size(); ++i) dmax = std::max(dmax, X.d(0, i));
        const Ball B{0, dmax * (0.6 + 0.8 * (u(rng) + 1) / 2)};
        const auto inst = oracle::jn_instance(X, f, 2, rho, tau, X.ball_set(B));
        if (inst.weights.empty() || inst.weights.size() > 12) continue;
        const JnResult r = jn_ptr_norm(X, f, 2, rho, tau, B, true);
        ++instances;
        max_cand = std::max(max_cand, inst.weights.size());
        if (r.candidates != inst.weights.size()) ++count_bad;
        if (!r.exact || r.best_exact != oracle::subset_brute_force(inst.footprints, inst.weights)) ++bad;
    }
    report(8, "metric-jn-exactness", instances == 100 && bad == 0 && count_bad == 0,
           fmt("%zu instances (%zu drawn), up to %zu candidates, value mismatches %zu, candidate-count mismatches %zu",
               instances, tries, max_cand, bad, count_bad));
}

void metric_fpw_equality() {
    std::mt19937_64 rng(9009);
    std::uniform_real_distribution<double> u(-1, 1);
    std::size_t instances = 0, bad = 0, tries = 0;
    double worst = 0;
    while (instances < 50 && tries < 10000) {
        ++tries;
        const MetricMeasureSpace X = small_space(rng, 4 + rng() % 5);
        std::vector<double> f(X.size());
        for (double& x : f) x = u(rng);
        const double rho = tries % 2 ? 0.5 : 1.0;
        const double tau = (tries / 2) % 2 ? 2.0 : 1.0;
        const double p = std::vector<double>{1.5, 2, 3}[tries % 3];
        double dmax = 0;
        for (std::size_t i = 0; i < X.size(); ++i) dmax = std::max(dmax, X.d(0, i));
        const Ball B0{0, 1.01 * dmax};
        const BallFunctional a0 = exact_oscillation_functional(X, f, rho, tau);
        const DpResult dp = dp_norm_metric(X, a0, p, tau, B0, true);
        if (!(dp.a_B > 0)) continue;
        const JnResult jn = jn_ptr_norm(X, f, p, rho, tau, B0, true);
        ++instances;
        const double err = rel_err(jn.norm, dp.norm * dp.a_B);
        worst = std::max(worst, err);
        if (!jn.exact || !dp.exact || err > 1e-9) ++bad;
    }
    report(9, "metric-jn-dp-equality", instances == 50 && bad == 0,
           fmt("%zu instances, max rel err %.2e, failures %zu", instances, worst, bad));
}

// ---------------------------------------------------------------- 10

Rational rat(double x) { return Rational(x); }

Rational ipow(const Rational& x, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void kolmogorov_chebyshev() {
    std::mt19937_64 rng(10010);
    std::size_t runs = 0, lib_bad = 0, exact_bad = 0;
    for (int k = 0; k < 500; ++k) {
        const int dim = 1 + k % 2;
        const int depth = dim == 1 ? 1 + k % 6 : 1 + k % 3;
        const GridFunction f = random_uniform(dim, depth, rng(), -3, 3);
        const DyadicCube q = f.root();
        ++runs;
        for (double p : {1.5, 2.0, 3.0}) {
            const double weak = weak_lp_norm(f, p, q);
            if (!(weak <= lp_norm(f, p, q))) ++lib_bad;
            for (double qq : {0.5, 1.0, 1.25}) {
                if (!(qq < p)) continue;
                if (!(lp_norm(f, qq, q) <= std::pow(p / (p - qq), 1 / qq) * weak)) ++lib_bad;
            }
        }
        // exact: integer exponents, powers compared in rational arithmetic
        const std::size_t N = f.size();
        std::vector<Rational> a(N);
        for (std::size_t i = 0; i < N; ++i) a[i] = abs(rat(f[i]));
        for (int p : {2, 3}) {
            Rational lp(0), weak_p(0), l1(0), l2(0);
            for (const auto& x : a) {
                lp += ipow(x, p);
                l1 += x;
                l2 += x * x;
            }
            lp /= N;
            l1 /= N;
            l2 /= N;
            for (const auto& lam : a) {
                std::size_t cnt = 0;
                for (const auto& x : a) cnt += x >= lam;  // sup over lambda just below lam
                weak_p = std::max(weak_p, ipow(lam, p) * Rational(cnt) / N);
            }
            if (!(weak_p <= lp)) ++exact_bad;
            // q = 1: ||f||_1^p <= (p/(p-1))^p weak^p
            if (!(ipow(l1, p) <= ipow(Rational(p, p - 1), p) * weak_p)) ++exact_bad;
            // q = 2 < p = 3: (||f||_2^2)^3 <= 3^3 (weak^3)^2
            if (p == 3 && !(ipow(l2, 3) <= Rational(27) * weak_p * weak_p)) ++exact_bad;
        }
    }
    report(10, "kolmogorov-chebyshev", lib_bad == 0 && exact_bad == 0,
           fmt("%zu functions, library failures %zu, exact rational failures %zu", runs, lib_bad, exact_bad));
}

}  // namespace

int main() {
    antichain_exactness();
    levelset_and_norms();
    sharp_chain();
    gr_self_improvement();
    oscillation_axioms();
    vitali_covers();
    metric_jn_exactness();
    metric_fpw_equality();
    kolmogorov_chebyshev();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
