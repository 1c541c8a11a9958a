#include <doctest.h>

#include <cmath>

#include "oscillab/czmax.hpp"
#include "oscillab/goodlambda.hpp"

using namespace oscillab;

namespace {
GridFunction g1(std::vector<double> v, int depth) { return build_grid_function(1, depth, BaseCube::unit(1), std::move(v)); }
OscillationFamily means(const GridFunction& f) { return mean_oscillation_family(f.grid(), f.root()); }
}  // namespace

TEST_CASE("admissible_p_range") {
    CHECK(std::isinf(admissible_p_range(3, 0)));
    CHECK(admissible_p_range(2, 0.125) == doctest::Approx(2.0).epsilon(1e-15));
    for (int n : {1, 2}) {
        double eps = std::ldexp(1.0, -9);
        double th = std::ldexp(1.0, n);
        CHECK(admissible_p_range(th, th * eps) == doctest::Approx(std::log2(1 / eps) / (n + 1)).epsilon(1e-12));
    }
}

TEST_CASE("derive_constant") {
    auto d = derive_constant(2, 1, 0);
    CHECK(d.gamma == 0.125);
    CHECK(d.r == 0.5);
    CHECK(d.C == doctest::Approx(16 * std::sqrt(2.0)).epsilon(1e-14));
    double prev = 0;
    for (double p : {1.2, 1.5, 2.0, 3.0}) {
        double C = derive_constant(p, 2, 0).C;
        CHECK(std::isfinite(C));
        CHECK(C > prev);
        prev = C;
    }
    double edge = 2 * std::pow(4.0, -1.5);
    CHECK(derive_constant(1.5, 2, edge * (1 - 1e-9)).C > 1e3);
    CHECK_THROWS(derive_constant(1.5, 2, edge));
}

TEST_CASE("hypotheses of the JN and GR providers") {
    auto f = g1({3, 0, 1, 7, 2, 2, 0, 5}, 3);
    auto jn = jn_provider(f, means(f));
    CHECK(jn.provider.theta() == 2.0);
    CHECK(jn.provider.delta() == 0.0);
    CHECK(check_hypotheses(jn.F, jn.provider).pass());
    auto w = g1({0.9, 1.1, 0.9, 1.1}, 2);
    auto gr = gr_provider(w);
    CHECK(gr.provider.delta() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(check_hypotheses(gr.F, gr.provider).pass());
}

TEST_CASE("inflated H fails with a witness") {
    auto f = g1({0, 0, 0, 4}, 2);
    auto grid = f.grid();
    std::vector<std::pair<DyadicCube, ProviderTriple>> rows;
    grid.for_each_node([&](NodeRef n) {
        if (n.level == 0) return;
        auto leaves = grid.leaves_of(n);
        rows.push_back({grid.cube(n), ProviderTriple{std::vector<double>(leaves.size(), 0.0),
                                                     std::vector<double>(leaves.size(), 100.0), 0.0}});
    });
    auto prov = table_provider(grid, 2, 0, rows);
    auto F = g1({1, 1, 1, 3}, 2);
    auto rep = check_hypotheses(F, prov);
    CHECK_FALSE(rep.pass());
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].condition == 2);
}

TEST_CASE("g_star of the JN provider is the sharp maximal function over proper subcubes") {
    auto f = g1({3, 0, 1, 7, 2, 2, 0, 5}, 3);
    auto jn = jn_provider(f, means(f));
    auto G = g_star(jn.F, jn.provider);
    auto grid = f.grid();
    auto osc = means(f).oscillation_tree(f);
    for (std::size_t leaf = 0; leaf < f.size(); ++leaf) {
        double m = 0;
        for (int j = 1; j <= grid.depth(); ++j) m = std::max(m, osc[j][grid.ancestor_of_leaf(leaf, j)]);
        CHECK(G[leaf] == m);
    }
}

TEST_CASE("level sets for the spike") {
    auto f = g1({0, 0, 0, 4}, 2);
    auto jn = jn_provider(f, means(f));
    LevelSetGrid grid{{4}, {0.5}, {1.5}, false, false};
    auto r = verify_levelset_inequality(jn.F, jn.provider, grid, true);
    REQUIRE(r.points.size() == 1);
    CHECK(r.exact);
    CHECK(r.pass());
    CHECK_FALSE(r.points[0].skipped);
    // F = |f - 1| = [1,1,1,3], MF > 1.5 on the right half, MF > 6 nowhere.
    CHECK(r.points[0].measure_Omega == 0.5);
    CHECK(r.points[0].measure_E == 0.0);
}

TEST_CASE("constant F") {
    auto f = g1({2, 2, 2, 2}, 2);
    auto jn = jn_provider(f, means(f));
    LevelSetGrid grid{{1.5, 3}, {0.5}, {1, 2}, true, true};
    auto r = verify_levelset_inequality(jn.F, jn.provider, grid);
    CHECK(r.pass());
    auto n = verify_norm_inequalities(jn.F, jn.provider, 2);
    CHECK(n.pass());
    CHECK(n.strong_F == 0.0);
}

TEST_CASE("GR norm inequalities") {
    auto w = g1({0.9, 1.1, 0.9, 1.1}, 2);
    auto gr = gr_provider(w);
    double pmax = admissible_p_range(gr.provider.theta(), gr.provider.delta());
    REQUIRE(pmax > 1);
    auto n = verify_norm_inequalities(gr.F, gr.provider, (1 + pmax) / 2);
    CHECK(n.pass());
}

TEST_CASE("gr_epsilon") {
    CHECK(gr_epsilon(g1({0.9, 1.1, 0.9, 1.1}, 2)).epsilon == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(gr_epsilon(g1({3, 3, 3, 3}, 2)).epsilon == 0.0);
    CHECK(gr_epsilon(g1({0, 4}, 1)).epsilon == 1.0);
    CHECK(gr_epsilon_exact(g1({0, 4}, 1)) == Rational(1));
}

TEST_CASE("gr_self_improve") {
    CHECK(gr_critical_exponent(std::ldexp(1.0, -8), 1) == doctest::Approx(4.0).epsilon(1e-15));
    double e = 0.01;
    CHECK(gr_critical_exponent(e * e, 1) == doctest::Approx(2 * gr_critical_exponent(e, 1)).epsilon(1e-14));
    auto c = gr_self_improve(g1({2, 2, 2, 2}, 2), nullptr, 3);
    CHECK(c.epsilon == 0.0);
    CHECK(c.pass);
    CHECK(c.worst_oscillation_ratio == 0.0);
}
