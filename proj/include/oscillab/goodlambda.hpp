#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oscillab/dyadic.hpp"
#include "oscillab/oscillation.hpp"

namespace oscillab {

// Throughout this module Q0 is the root of the grid the provider was built on.

/// G^Q and H^Q over the leaves of Q (local row-major order) and the constant g^Q.
struct ProviderTriple {
    std::vector<double> G;
    std::vector<double> H;
    double g = 0.0;
};

/// F and the g^Q in exact arithmetic, for providers that can supply them.
struct ExactProviderData {
    std::vector<Rational> F;
    LevelArray<Rational> g;  // root entry unused
    Rational theta;
    Rational delta;
};

/**
 * @brief Per-cube triples (G^Q, H^Q, g^Q) with constants (Theta, delta) for the good-lambda theorem.
 *
 * Triples are built on first request and cached; concurrent readers are safe.
 */
class DecompositionProvider {
public:
    using Builder = std::function<ProviderTriple(const DyadicGrid&, NodeRef)>;

    DecompositionProvider(DyadicGrid grid, double theta, double delta, Builder builder, std::string name,
                          std::function<ExactProviderData()> exact = {});

    const DyadicGrid& grid() const;
    double theta() const;
    double delta() const;
    const std::string& name() const;

    /// Triple of a non-root node.
    const ProviderTriple& triple(NodeRef q) const;
    bool has_exact() const;
    /// Computed once on first request.
    const ExactProviderData& exact() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// F together with a provider for it.
struct GoodLambdaSetup {
    GridFunction F;
    DecompositionProvider provider;
};

/// F = |B_{Q0} f|, G^Q = |B_Q f|, H^Q = |A_Q f - A_{Q0} f|, g^Q = mean_Q |B_Q f|; Theta = 2^n C_B, delta = 0.
GoodLambdaSetup jn_provider(const GridFunction& f, const OscillationFamily& osc);

/// F = |w - w_{Q0}|, G^Q = |w - w_Q|, H^Q = |w_Q - w_{Q0}|, g^Q = eps w_{Q0}; Theta = 2^n, delta = 2^n eps.
/// eps defaults to gr_epsilon(w).
GoodLambdaSetup gr_provider(const GridFunction& w, std::optional<double> eps = std::nullopt);

/// F = |B_{Q0} w| with g^Q = eps (1 + eps) C_B^2 mean_{Q0} |A_{Q0} w|; Theta = 2^n C_B, delta = 2^n eps C_B.
GoodLambdaSetup gr_osc_provider(const GridFunction& w, const OscillationFamily& osc,
                                std::optional<double> eps = std::nullopt);

/// Provider from explicit triples keyed by cube; every non-root cube must be present.
DecompositionProvider table_provider(const DyadicGrid& grid, double theta, double delta,
                                     std::vector<std::pair<DyadicCube, ProviderTriple>> triples,
                                     std::string name = "custom");

/// G*(x) = max of g^Q over non-root Q containing x (zero on a single-cube grid).
GridFunction g_star(const GridFunction& F, const DecompositionProvider& provider);

template <class T>
std::vector<T> g_star_values(const DyadicGrid& grid, const LevelArray<T>& g) {
    if (grid.depth() == 0) return std::vector<T>(grid.leaf_count(), T(0));
    std::vector<T> running = g[1];
    for (int j = 2; j <= grid.depth(); ++j) {
        std::vector<T> next(grid.nodes_at(j));
        for (std::size_t i = 0; i < next.size(); ++i) {
            const T& up = running[grid.parent(NodeRef{j, i}).index];
            const T& own = g[j][i];
            next[i] = own > up ? own : up;
        }
        running = std::move(next);
    }
    return running;
}

struct HypothesisViolation {
    DyadicCube cube;
    int condition = 0;  // 1, 2 or 3
    double excess = 0.0;
};

struct HypothesisReport {
    std::size_t cubes_checked = 0;
    double tolerance = 0.0;
    /// Smallest slack seen for each of (i), (ii), (iii); negative means violated.
    double min_slack[3] = {0.0, 0.0, 0.0};
    std::vector<HypothesisViolation> violations;
    bool pass() const { return violations.empty(); }
};

/// Checks (i)-(iii) on every non-root cube, up to `rel_tol` times the largest value of F.
HypothesisReport check_hypotheses(const GridFunction& F, const DecompositionProvider& provider,
                                  double rel_tol = 1e-12);

struct LevelSetPoint {
    double K = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double measure_E = 0.0;      // normalized |E_lambda|
    double measure_Omega = 0.0;  // normalized |Omega_lambda|
    double bound = 0.0;          // (delta + gamma)/(K - Theta) |Omega_lambda|
    bool skipped = false;
    std::string reason;
    bool pass = true;
};

struct GoodLambdaReport {
    double theta = 0.0;
    double delta = 0.0;
    bool exact = false;
    std::vector<LevelSetPoint> points;
    /// max of |E|/bound over evaluated points with a positive bound.
    double worst_ratio = 0.0;
    bool pass() const;
    std::size_t skipped() const;
};

/// Parameter grid for the level-set check. With the flags set, K is a multiple of Theta and lambda a
/// multiple of mean_{Q0} F, both taken in the working arithmetic.
struct LevelSetGrid {
    std::vector<double> Ks;
    std::vector<double> gammas;
    std::vector<double> lambdas;
    bool K_times_theta = false;
    bool lambda_times_mean = false;
};

/// |{MF > K lambda, G* <= gamma lambda}| <= (delta+gamma)/(K-Theta) |{MF > lambda}| at every grid point.
/// With `exact` set (requires provider.has_exact()) all sets are computed in rational arithmetic.
GoodLambdaReport verify_levelset_inequality(const GridFunction& F, const DecompositionProvider& provider,
                                            const LevelSetGrid& grid, bool exact = false);

/// Upper end of (1, p_max); +inf when delta = 0.
double admissible_p_range(double theta, double delta);

struct DerivedConstant {
    double gamma = 0.0;
    double r = 0.0;  // (2 Theta)^p (delta + gamma) / Theta
    double C = 0.0;
};

/// K = 2 Theta, gamma at the midpoint of (0, Theta (2 Theta)^{-p} - delta),
/// C = 2 Theta max(1, 1/gamma) (1 - r)^{-1/p}.
DerivedConstant derive_constant(double p, double theta, double delta);

struct NormReport {
    double p = 0.0;
    DerivedConstant constant;
    double F_mean = 0.0;
    double weak_F = 0.0, weak_MF = 0.0, weak_Gstar = 0.0, weak_rhs = 0.0;
    double strong_F = 0.0, strong_MF = 0.0, strong_Gstar = 0.0, strong_rhs = 0.0;
    bool pointwise_F_le_MF = true;
    bool weak_ok = true;
    bool strong_ok = true;
    bool pass() const { return pointwise_F_le_MF && weak_ok && strong_ok; }
};

/// Both sides of the weak and strong norm inequalities with the constant from derive_constant.
NormReport verify_norm_inequalities(const GridFunction& F, const DecompositionProvider& provider, double p);

struct GrEpsilon {
    double epsilon = 0.0;
    bool infinite = false;  // zero denominator with nonzero oscillation
    std::optional<DyadicCube> attained_at;
};

/// Smallest eps with mean_Q |B_Q w| <= eps * (w_Q, or mean_Q |A_Q w| with a family) over D(Q0).
GrEpsilon gr_epsilon(const GridFunction& w, const OscillationFamily* osc = nullptr);
Rational gr_epsilon_exact(const GridFunction& w);

/// Critical exponent p(eps); +inf at eps = 0.
double gr_critical_exponent(double eps, int dim, double c_b = 1.0);
/// Smallness threshold: 2^{-(n+1)} classical, 2^{-(n+2)} / C_B generalized.
double gr_threshold(int dim, bool generalized, double c_b = 1.0);

struct GrReport {
    bool generalized = false;
    double epsilon = 0.0;
    bool epsilon_infinite = false;
    double threshold = 0.0;
    double c_b = 1.0;
    double p_of_eps = 0.0;
    double p = 0.0;
    bool applicable = false;
    std::string not_applicable_reason;
    double theta = 0.0, delta = 0.0;
    DerivedConstant constant;
    double C_oscillation = 0.0;  // constant of the L^p oscillation bound
    double C_reverse = 0.0;      // constant of the reverse Hoelder bound
    std::size_t cubes = 0;
    double worst_oscillation_ratio = 0.0;
    double worst_reverse_ratio = 0.0;
    std::optional<DyadicCube> worst_cube;
    bool pass = true;
};

/// Higher integrability of w for exponent p on every cube of D(Q0).
GrReport gr_self_improve(const GridFunction& w, const OscillationFamily* osc, double p);

}  // namespace oscillab
