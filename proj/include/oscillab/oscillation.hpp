#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oscillab/dyadic.hpp"

namespace oscillab {

/// Tree-ordered mean of a local block of 2^{dim*sub_depth} values (same summation order as cube_average).
double tree_mean(int dim, int sub_depth, std::span<const double> local);

/// Multi-indices |alpha| <= m, ordered by total degree then lexicographically.
std::vector<std::vector<int>> monomial_exponents(int dim, int degree);

/**
 * @brief Orthonormal basis of cell-averaged polynomials of degree <= m on the reference cube.
 *
 * The reference cube [-1/2, 1/2)^n is split into 2^{sub_depth} cells per axis; each monomial is
 * replaced by its cell averages and the resulting vectors are orthonormalized under
 * <u, v> = mean(u v). Cubes of the same sub-depth share one basis by affine rescaling.
 */
struct PolynomialBasis {
    int dim = 1;
    int degree = 0;
    int sub_depth = 0;
    std::vector<std::vector<int>> exponents;
    /// Orthonormal vectors over the local cells, one per accepted monomial.
    std::vector<std::vector<double>> vectors;
    /// coefficients[k][j]: weight of monomial j (reference coordinates) in vectors[k].
    std::vector<std::vector<double>> coefficients;

    std::size_t rank() const { return vectors.size(); }
    bool full_rank() const { return vectors.size() == exponents.size(); }
    /// max_k ||phi_k||_inf over the cells.
    double sup_norm() const;
    /// max_{x,y} |sum_k phi_k(x) phi_k(y)|, the exact L^1(avg) -> L^inf norm of the projection.
    double kernel_bound() const;
};

/// Two-pass Gram-Schmidt; a monomial whose residual falls below 1e-12 of its norm is dropped.
PolynomialBasis build_polynomial_basis(int dim, int degree, int sub_depth);

enum class OscillationKind { mean, polynomial, custom };

/// A_Q acting on the leaf values of Q in local row-major order; must return the same length.
using LocalOperator =
    std::function<std::vector<double>(const DyadicGrid& grid, NodeRef q, std::span<const double> local)>;

/**
 * @brief A local oscillation family {A_Q, B_Q = I - A_Q} over the dyadic subcubes of a grid.
 *
 * Immutable and cheap to copy; polynomial bases are built lazily, once per sub-depth, and are
 * safe to request from several threads.
 */
class OscillationFamily {
public:
    OscillationKind kind() const;
    int degree() const;
    double constant_cb() const;
    std::string name() const;

    std::vector<double> apply_A_local(const DyadicGrid& grid, NodeRef q, std::span<const double> local) const;
    std::vector<double> apply_B_local(const DyadicGrid& grid, NodeRef q, std::span<const double> local) const;

    /// A_Q f, zero outside Q.
    GridFunction apply_A(const GridFunction& f, const DyadicCube& q) const;
    /// B_Q f restricted to Q, zero outside Q.
    GridFunction apply_B(const GridFunction& f, const DyadicCube& q) const;

    /// mean over Q of |B_Q f|.
    double mean_abs_B(const GridFunction& f, const DyadicCube& q) const;
    /// mean over Q of |A_Q f|.
    double mean_abs_A(const GridFunction& f, const DyadicCube& q) const;
    /// mean_abs_B for every node of the grid.
    LevelArray<double> oscillation_tree(const GridFunction& f) const;

    /// Shared basis for cubes `sub_depth` levels above the leaves (polynomial kind only).
    const PolynomialBasis& basis(int sub_depth) const;

    friend OscillationFamily mean_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0);
    friend OscillationFamily polynomial_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0, int m);
    friend OscillationFamily custom_oscillation_family(LocalOperator op, double c_b, std::string name);

private:
    struct Impl;
    explicit OscillationFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// A_Q f = f_Q chi_Q, C_B = 1.
OscillationFamily mean_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0);

/// Projection onto cell-averaged polynomials of degree <= m; C_B is the exact kernel bound over D(Q0).
OscillationFamily polynomial_oscillation_family(const DyadicGrid& grid, const DyadicCube& q0, int m);

OscillationFamily custom_oscillation_family(LocalOperator op, double c_b, std::string name = "custom");

struct AxiomReport {
    double linearity_residual = 0.0;
    double empirical_cb = 0.0;
    double nesting_residual = 0.0;
    double tolerance = 1e-10;
    bool linearity_ok = true;
    bool bound_ok = true;
    bool nesting_ok = true;
    std::optional<DyadicCube> witness;
    std::string failure;

    bool pass() const { return linearity_ok && bound_ok && nesting_ok; }
};

/// Checks linearity, ||A_Q f||_inf <= C_B mean_Q |f| and B_{Q1} A_{Q2} f = 0 on Q1 for Q1 within Q2.
AxiomReport verify_oscillation_axioms(const OscillationFamily& osc, std::span<const GridFunction> probes,
                                      double tolerance = 1e-10);

/// Cell averages over the leaves of `grid` of the polynomial sum_j coeffs[j] x^{exponents[j]},
/// in the coordinates of `base`.
GridFunction cell_averaged_polynomial(const BaseCube& base, int depth, const std::vector<std::vector<int>>& exponents,
                                      const std::vector<double>& coeffs);

}  // namespace oscillab
