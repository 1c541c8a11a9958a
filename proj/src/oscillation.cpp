#include "oscillab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>

namespace oscillab {
namespace {

constexpr int kMaxSubDepth = 24;
constexpr double kPivotTolerance = 1e-12;
// Beyond this many cells the kernel bound falls back to sum_k ||phi_k||_inf^2.
constexpr std::size_t kKernelExactCells = 4096;

double interval_monomial_average(double a, double b, int k) {
    if (k == 0) return 1.0;
    return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
}

double inner(int dim, int sub_depth, const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> prod(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) prod[i] = u[i] * v[i];
    return tree_mean(dim, sub_depth, prod);
}

}  // namespace

double tree_mean(int dim, int sub_depth, std::span<const double> local) {
    const DyadicGrid g(dim, sub_depth);
    if (local.size() != g.leaf_count()) throw DomainError("local block has the wrong length");
    return subtree_mean<double>(g, NodeRef{0, 0}, [&](std::size_t leaf) { return local[leaf]; });
}

std::vector<std::vector<int>> monomial_exponents(int dim, int degree) {
    if (degree < 0) throw DomainError("polynomial degree must be nonnegative");
    std::vector<std::vector<int>> out;
    for (int total = 0; total <= degree; ++total) {
        std::vector<int> alpha(dim, 0);
        // Enumerate compositions of `total` into dim parts, lexicographically descending in alpha[0].
        std::function<void(int, int)> rec = [&](int axis, int remaining) {
            if (axis == dim - 1) {
                alpha[axis] = remaining;
                out.push_back(alpha);
                return;
            }
            for (int a = remaining; a >= 0; --a) {
                alpha[axis] = a;
                rec(axis + 1, remaining - a);
            }
        };
        rec(0, total);
    }
    return out;
}

double PolynomialBasis::sup_norm() const {
    double best = 0.0;
    for (const auto& v : vectors)
        for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

double PolynomialBasis::kernel_bound() const {
    if (vectors.empty()) return 0.0;
    const std::size_t n = vectors.front().size();
    if (n > kKernelExactCells) {
        double s = 0.0;
        for (const auto& v : vectors) {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            s += m * m;
        }
        return s;
    }
    double best = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x; y < n; ++y) {
            double k = 0.0;
            for (const auto& v : vectors) k += v[x] * v[y];
            best = std::max(best, std::abs(k));
        }
    return best;
}

PolynomialBasis build_polynomial_basis(int dim, int degree, int sub_depth) {
    if (sub_depth < 0 || sub_depth > kMaxSubDepth) throw DomainError("sub-depth out of range");
    PolynomialBasis b;
    b.dim = dim;
    b.degree = degree;
    b.sub_depth = sub_depth;
    b.exponents = monomial_exponents(dim, degree);
    const DyadicGrid local(dim, sub_depth);
    const std::size_t cells = local.leaf_count();
    const double h = std::ldexp(1.0, -sub_depth);
    const std::size_t nmono = b.exponents.size();

    std::vector<std::vector<std::int64_t>> cell_coords(cells);
    for (std::size_t k = 0; k < cells; ++k) cell_coords[k] = local.decode(sub_depth, k);

    for (std::size_t j = 0; j < nmono; ++j) {
        std::vector<double> v(cells, 1.0);
        for (std::size_t k = 0; k < cells; ++k)
            for (int i = 0; i < dim; ++i) {
                const double a = -0.5 + static_cast<double>(cell_coords[k][i]) * h;
                v[k] *= interval_monomial_average(a, a + h, b.exponents[j][i]);
            }
        std::vector<double> coef(nmono, 0.0);
        coef[j] = 1.0;
        const double original = std::sqrt(inner(dim, sub_depth, v, v));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t q = 0; q < b.vectors.size(); ++q) {
                const double c = inner(dim, sub_depth, v, b.vectors[q]);
                for (std::size_t k = 0; k < cells; ++k) v[k] -= c * b.vectors[q][k];
                for (std::size_t t = 0; t < nmono; ++t) coef[t] -= c * b.coefficients[q][t];
            }
        }
        const double norm = std::sqrt(inner(dim, sub_depth, v, v));
        if (!(norm > kPivotTolerance * original)) continue;
        for (double& x : v) x /= norm;
        for (double& x : coef) x /= norm;
        b.vectors.push_back(std::move(v));
        b.coefficients.push_back(std::move(coef));
    }
    return b;
}

struct OscillationFamily::Impl {
    OscillationKind kind = OscillationKind::mean;
    int dim = 1;
    int degree = 0;
    double cb = 1.0;
    std::string name;
    LocalOperator custom;
    std::unique_ptr<std::once_flag[]> flags;
    mutable std::vector<PolynomialBasis> bases;

    const PolynomialBasis& basis(int sub_depth) const {
        if (sub_depth < 0 || sub_depth > kMaxSubDepth) throw DomainError("sub-depth out of range");
        std::call_once(flags[sub_depth], [&] { bases[sub_depth] = build_polynomial_basis(dim, degree, sub_depth); });
        return bases[sub_depth];
    }
};

OscillationKind OscillationFamily::kind() const { return impl_->kind; }
int OscillationFamily::degree() const { return impl_->degree; }
double OscillationFamily::constant_cb() const { return impl_->cb; }
std::string OscillationFamily::name() const { return impl_->name; }

const PolynomialBasis& OscillationFamily::basis(int sub_depth) const {
    if (impl_->kind != OscillationKind::polynomial) throw DomainError("family has no polynomial basis");
    return impl_->basis(sub_depth);
}

std::vector<double> OscillationFamily::apply_A_local(const DyadicGrid& grid, NodeRef q,
                                                     std::span<const double> local) const {
    const int sub = grid.depth() - q.level;
    switch (impl_->kind) {
        case OscillationKind::mean:
            return std::vector<double>(local.size(), tree_mean(grid.dim(), sub, local));
        case OscillationKind::polynomial: {
            const PolynomialBasis& b = impl_->basis(sub);
            std::vector<double> out(local.size(), 0.0);
            std::vector<double> prod(local.size());
            for (const auto& phi : b.vectors) {
                for (std::size_t i = 0; i < local.size(); ++i) prod[i] = local[i] * phi[i];
                const double c = tree_mean(grid.dim(), sub, prod);
                for (std::size_t i = 0; i < local.size(); ++i) out[i] += c * phi[i];
            }
            return out;
        }
        case OscillationKind::custom: {
            auto out = impl_->custom(grid, q, local);
            if (out.size() != local.size()) throw DomainError("custom A_Q returned the wrong length");
            return out;
        }
    }
    throw DomainError("unknown oscillation kind");
}

std::vector<double> OscillationFamily::apply_B_local(const DyadicGrid& grid, NodeRef q,
                                                     std::span<const double> local) const {
    auto a = apply_A_local(grid, q, local);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = local[i] - a[i];
    return a;
}

namespace {

std::vector<double> gather(const GridFunction& f, const std::vector<std::size_t>& leaves) {
    std::vector<double> out(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) out[i] = f[leaves[i]];
    return out;
}

GridFunction scatter(const GridFunction& f, const std::vector<std::size_t>& leaves, const std::vector<double>& local) {
    std::vector<double> vals(f.size(), 0.0);
    for (std::size_t i = 0; i < leaves.size(); ++i) vals[leaves[i]] = local[i];
    return f.with_values(std::move(vals));
}

}  // namespace

GridFunction OscillationFamily::apply_A(const GridFunction& f, const DyadicCube& q) const {
    const DyadicGrid grid = f.grid();
    const NodeRef n = grid.node(q);
    const auto leaves = grid.leaves_of(n);
    return scatter(f, leaves, apply_A_local(grid, n, gather(f, leaves)));
}

GridFunction OscillationFamily::apply_B(const GridFunction& f, const DyadicCube& q) const {
    const DyadicGrid grid = f.grid();
    const NodeRef n = grid.node(q);
    const auto leaves = grid.leaves_of(n);
    return scatter(f, leaves, apply_B_local(grid, n, gather(f, leaves)));
}

double OscillationFamily::mean_abs_B(const GridFunction& f, const DyadicCube& q) const {
    const DyadicGrid grid = f.grid();
    const NodeRef n = grid.node(q);
    auto b = apply_B_local(grid, n, gather(f, grid.leaves_of(n)));
    for (double& x : b) x = std::abs(x);
    return tree_mean(grid.dim(), grid.depth() - n.level, b);
}

double OscillationFamily::mean_abs_A(const GridFunction& f, const DyadicCube& q) const {
    const DyadicGrid grid = f.grid();
    const NodeRef n = grid.node(q);
    auto a = apply_A_local(grid, n, gather(f, grid.leaves_of(n)));
    for (double& x : a) x = std::abs(x);
    return tree_mean(grid.dim(), grid.depth() - n.level, a);
}

LevelArray<double> OscillationFamily::oscillation_tree(const GridFunction& f) const {
    const DyadicGrid grid = f.grid();
    LevelArray<double> out(grid.depth() + 1);
    for (int j = 0; j <= grid.depth(); ++j) out[j].assign(grid.nodes_at(j), 0.0);
    grid.for_each_node([&](NodeRef n) {
        auto b = apply_B_local(grid, n, gather(f, grid.leaves_of(n)));
        for (double& x : b) x = std::abs(x);
        out[n.level][n.index] = tree_mean(grid.dim(), grid.depth() - n.level, b);
    });
    return out;
}

OscillationFamily mean_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0) {
    (void)grid.node(q0);
    auto impl = std::make_shared<OscillationFamily::Impl>();
    impl->kind = OscillationKind::mean;
    impl->dim = grid.dim();
    impl->cb = 1.0;
    impl->name = "mean";
    return OscillationFamily(std::move(impl));
}

OscillationFamily polynomial_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0, int m) {
    if (m < 0) throw DomainError("polynomial degree must be nonnegative");
    const NodeRef root = grid.node(q0);
    auto impl = std::make_shared<OscillationFamily::Impl>();
    impl->kind = OscillationKind::polynomial;
    impl->dim = grid.dim();
    impl->degree = m;
    impl->name = "polynomial(" + std::to_string(m) + ")";
    impl->flags = std::make_unique<std::once_flag[]>(kMaxSubDepth + 1);
    impl->bases.resize(kMaxSubDepth + 1);
    double cb = 0.0;
    for (int s = 0; s <= grid.depth() - root.level; ++s) cb = std::max(cb, impl->basis(s).kernel_bound());
    impl->cb = std::max(1.0, cb);
    return OscillationFamily(std::move(impl));
}

OscillationFamily custom_oscillation_family(LocalOperator op, double c_b, std::string name) {
    if (!op) throw DomainError("custom family needs an operator");
    if (!(c_b >= 1.0)) throw DomainError("C_B must be at least 1");
    auto impl = std::make_shared<OscillationFamily::Impl>();
    impl->kind = OscillationKind::custom;
    impl->cb = c_b;
    impl->name = std::move(name);
    impl->custom = std::move(op);
    return OscillationFamily(std::move(impl));
}

AxiomReport verify_oscillation_axioms(const OscillationFamily& osc, std::span<const GridFunction> probes,
                                      double tolerance) {
    if (probes.empty()) throw DomainError("axiom check needs at least one probe");
    AxiomReport rep;
    rep.tolerance = tolerance;
    auto fail = [&](bool& flag, const std::string& what, const DyadicGrid& grid, NodeRef n) {
        if (flag) {
            flag = false;
            if (!rep.witness) {
                rep.witness = grid.cube(n);
                rep.failure = what;
            }
        }
    };

    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const GridFunction& f = probes[pi];
        const GridFunction& g = probes[(pi + 1) % probes.size()];
        if (g.size() != f.size()) throw DomainError("probes must share one grid");
        const DyadicGrid grid = f.grid();
        double scale = 0.0;
        for (double v : f.values()) scale = std::max(scale, std::abs(v));
        for (double v : g.values()) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) scale = 1.0;

        grid.for_each_node([&](NodeRef q2) {
            const auto leaves = grid.leaves_of(q2);
            const auto lf = gather(f, leaves);
            const auto lg = gather(g, leaves);
            const auto af = osc.apply_A_local(grid, q2, lf);

            // (a) linearity on the pair (f, g)
            constexpr double alpha = 0.75, beta = -1.25;
            std::vector<double> mix(lf.size());
            for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * lf[i] + beta * lg[i];
            const auto amix = osc.apply_A_local(grid, q2, mix);
            const auto ag = osc.apply_A_local(grid, q2, lg);
            double lin = 0.0;
            for (std::size_t i = 0; i < mix.size(); ++i)
                lin = std::max(lin, std::abs(amix[i] - alpha * af[i] - beta * ag[i]));
            rep.linearity_residual = std::max(rep.linearity_residual, lin / scale);
            if (lin / scale > tolerance) fail(rep.linearity_ok, "linearity", grid, q2);

            // (b) L^inf bound by the average
            std::vector<double> absf(lf.size());
            for (std::size_t i = 0; i < lf.size(); ++i) absf[i] = std::abs(lf[i]);
            const double avg = tree_mean(grid.dim(), grid.depth() - q2.level, absf);
            double sup = 0.0;
            for (double v : af) sup = std::max(sup, std::abs(v));
            if (avg > 0.0) {
                const double ratio = sup / avg;
                rep.empirical_cb = std::max(rep.empirical_cb, ratio);
                if (ratio > osc.constant_cb() * (1.0 + tolerance)) fail(rep.bound_ok, "L^inf bound", grid, q2);
            } else if (sup > tolerance * scale) {
                rep.empirical_cb = std::numeric_limits<double>::infinity();
                fail(rep.bound_ok, "L^inf bound", grid, q2);
            }

            // (c) B_{Q1} A_{Q2} f = 0 on every Q1 within Q2
            std::vector<std::size_t> position(grid.leaf_count(), 0);
            for (std::size_t i = 0; i < leaves.size(); ++i) position[leaves[i]] = i;
            for (int j = q2.level; j <= grid.depth(); ++j) {
                const DyadicGrid truncated(grid.dim(), j);
                for (std::size_t k : truncated.leaves_of(q2)) {
                    const NodeRef q1{j, k};
                    const auto sub = grid.leaves_of(q1);
                    std::vector<double> restricted(sub.size());
                    for (std::size_t i = 0; i < sub.size(); ++i) restricted[i] = af[position[sub[i]]];
                    const auto resid = osc.apply_B_local(grid, q1, restricted);
                    double r = 0.0;
                    for (double v : resid) r = std::max(r, std::abs(v));
                    rep.nesting_residual = std::max(rep.nesting_residual, r / scale);
                    if (r / scale > tolerance) fail(rep.nesting_ok, "nesting", grid, q1);
                }
            }
        });
    }
    return rep;
}

GridFunction cell_averaged_polynomial(const BaseCube& base, int depth, const std::vector<std::vector<int>>& exponents,
                                      const std::vector<double>& coeffs) {
    if (exponents.size() != coeffs.size()) throw DomainError("exponents and coefficients differ in length");
    const DyadicGrid grid(base.dim(), depth);
    const double h = std::ldexp(base.side, -depth);
    std::vector<double> vals(grid.leaf_count(), 0.0);
    for (std::size_t leaf = 0; leaf < vals.size(); ++leaf) {
        const auto c = grid.decode(depth, leaf);
        for (std::size_t j = 0; j < exponents.size(); ++j) {
            double term = coeffs[j];
            for (int i = 0; i < base.dim(); ++i) {
                const double a = base.origin[i] + static_cast<double>(c[i]) * h;
                term *= interval_monomial_average(a, a + h, exponents[j][i]);
            }
            vals[leaf] += term;
        }
    }
    return GridFunction(base, depth, std::move(vals));
}

}  // namespace oscillab
