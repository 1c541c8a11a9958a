#include <doctest.h>

#include <cmath>
#include <random>

#include "oscillab/oscillation.hpp"

using namespace oscillab;

namespace {
GridFunction random_fn(int dim, int depth, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(std::size_t{1} << (dim * depth));
    for (double& x : v) x = u(rng);
    return build_grid_function(dim, depth, BaseCube::unit(dim), v);
}
}  // namespace

TEST_CASE("mean family") {
    auto f = build_grid_function(1, 1, BaseCube::unit(1), {0, 4});
    auto osc = mean_oscillation_family(f.grid(), f.root());
    auto A = osc.apply_A(f, f.root());
    CHECK(A[0] == 2.0);
    CHECK(A[1] == 2.0);
    CHECK(osc.constant_cb() == 1.0);
    auto c = build_grid_function(1, 2, BaseCube::unit(1), {1.5, 1.5, 1.5, 1.5});
    auto B = osc.apply_B(c, c.root());
    for (std::size_t i = 0; i < 4; ++i) CHECK(B[i] == 0.0);
}

TEST_CASE("degree zero polynomials coincide with means bit for bit") {
    for (int dim : {1, 2}) {
        auto f = random_fn(dim, dim == 1 ? 4 : 3, 7u + dim);
        auto grid = f.grid();
        auto mean = mean_oscillation_family(grid, f.root());
        auto poly = polynomial_oscillation_family(grid, f.root(), 0);
        grid.for_each_node([&](NodeRef n) {
            auto q = grid.cube(n);
            auto a = mean.apply_A(f, q), b = poly.apply_A(f, q);
            for (std::size_t i = 0; i < f.size(); ++i) CHECK(a[i] == b[i]);
        });
    }
}

TEST_CASE("linear basis approaches sqrt(12) x") {
    auto basis = build_polynomial_basis(1, 1, 10);
    REQUIRE(basis.full_rank());
    CHECK(basis.coefficients[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(basis.coefficients[1][1] == doctest::Approx(std::sqrt(12.0)).epsilon(1e-5));
}

TEST_CASE("polynomials are reproduced") {
    auto p = cell_averaged_polynomial(BaseCube::unit(2), 3, monomial_exponents(2, 2), {1, -2, 0.5, 3, 1, -1});
    auto osc = polynomial_oscillation_family(p.grid(), p.root(), 2);
    auto grid = p.grid();
    grid.for_each_node([&](NodeRef n) {
        if (n.level == grid.depth()) return;
        CHECK(osc.mean_abs_B(p, grid.cube(n)) < 1e-10);
    });
}

TEST_CASE("axioms hold for mean and polynomial families") {
    std::vector<GridFunction> probes{random_fn(1, 4, 1), random_fn(1, 4, 2)};
    auto grid = probes[0].grid();
    auto mean = verify_oscillation_axioms(mean_oscillation_family(grid, probes[0].root()), probes);
    CHECK(mean.pass());
    CHECK(mean.nesting_residual == 0.0);
    std::vector<GridFunction> polys{cell_averaged_polynomial(BaseCube::unit(1), 4, {{0}, {1}}, {0.3, -1.0}),
                                    random_fn(1, 4, 3)};
    auto lin = verify_oscillation_axioms(polynomial_oscillation_family(grid, polys[0].root(), 1), polys);
    CHECK(lin.pass());
    CHECK(lin.nesting_residual <= 1e-10);
}

TEST_CASE("custom family with too small C_B fails with a witness") {
    LocalOperator twice = [](const DyadicGrid&, NodeRef, std::span<const double> local) {
        double s = 0;
        for (double v : local) s += v;
        return std::vector<double>(local.size(), 2 * s / local.size());
    };
    auto osc = custom_oscillation_family(twice, 1.0, "twice");
    std::vector<GridFunction> probes{build_grid_function(1, 2, BaseCube::unit(1), {1, 2, 3, 4})};
    auto rep = verify_oscillation_axioms(osc, probes);
    CHECK_FALSE(rep.bound_ok);
    CHECK(rep.witness.has_value());
}
