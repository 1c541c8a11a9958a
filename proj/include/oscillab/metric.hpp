#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "oscillab/dyadic.hpp"

namespace oscillab {

using SiteSet = boost::dynamic_bitset<>;

/// Open ball {y : d(y, center) < radius}.
struct Ball {
    std::size_t center = 0;
    double radius = 0.0;
    Ball dilate(double t) const { return Ball{center, t * radius}; }
};

/**
 * @brief A finite metric measure space.
 *
 * The metric axioms are checked exactly at construction; every site carries positive mass.
 */
class MetricMeasureSpace {
public:
    MetricMeasureSpace(std::vector<std::vector<double>> dist, std::vector<double> weights,
                       std::vector<std::string> ids = {});
    /// Euclidean distances between the given coordinates.
    static MetricMeasureSpace euclidean(const std::vector<std::vector<double>>& coords, std::vector<double> weights,
                                        std::vector<std::string> ids = {});

    std::size_t size() const { return weights_.size(); }
    double d(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }

    SiteSet ball_set(const Ball& b) const;
    SiteSet all_sites() const;
    double measure(const SiteSet& s) const;
    /// mu-weighted mean of values over s (sites in index order).
    double average(const SiteSet& s, std::span<const double> values) const;
    /// Distinct distances from site i, ascending, starting with 0.
    std::vector<double> distance_levels(std::size_t i) const;

private:
    std::vector<double> dist_;
    std::vector<double> weights_;
    std::vector<std::string> ids_;
    std::vector<std::vector<double>> coords_;
};

struct DoublingEntry {
    double D = 0.0;
    double c_mu = 1.0;
};

/// mu(B')/mu(B) <= c_mu (r_{B'}/r_B)^D for nested balls with r_B <= r_{B'}.
struct DoublingProfile {
    double c_mu = 1.0;
    double D = 1.0;
    std::vector<DoublingEntry> table;
};

/// For each D the least c_mu over all nested pairs of balls (every real radius, via the finitely many
/// distinct balls); returns the pair minimizing c_mu 2^D.
DoublingProfile doubling_constants(const MetricMeasureSpace& space, const std::vector<double>& D_grid);

/// One radius per distinct ball around `center` with radius in (0, r_max]: the largest such radius,
/// i.e. every positive distance not above r_max, and r_max.
std::vector<double> canonical_radii(const MetricMeasureSpace& space, std::size_t center, double r_max);

struct BasisMember {
    Ball ball;
    SiteSet sites;
};

/// The balls centered in B0 with radius at most eta r_{B0}, one per distinct set and center.
struct BallBasis {
    Ball B0;
    double eta = 1.0;
    SiteSet B0_sites;
    SiteSet hat_sites;  // (1 + eta) B0
    std::vector<BasisMember> members;
    SiteSet covered;    // union of the members
};

BallBasis ball_basis(const MetricMeasureSpace& space, const Ball& B0, double eta);

/// sup of mean_B |F| over members containing each site; 0 on sites no member contains.
std::vector<double> ball_maximal(const MetricMeasureSpace& space, const BallBasis& basis, std::span<const double> F);

/// (15 tau)^D c_mu (1 + 1/eta)^D.
double lambda0(double tau, double eta, const DoublingProfile& profile);

struct CoverReport {
    double lambda = 0.0;
    double lambda0 = 0.0;
    double threshold = 0.0;  // lambda0 * mean_{hat B0} |F|
    std::vector<std::size_t> omega;
    std::vector<Ball> selected;
    std::size_t witnesses = 0;
    bool disjoint = true;
    bool prop_a = true;  // union B_i in Omega, Omega in union 5 B_i
    bool prop_b = true;  // 15 tau B_i in the basis
    bool prop_c = true;  // F_{B_i} > lambda
    bool prop_d = true;  // F_{sigma B_i} <= lambda for sigma >= 2 with sigma B_i in the basis
    bool radius_bound = true;  // r_{B_i} <= eta r_{B0} / (15 tau)
    std::string failure;
    bool pass() const { return disjoint && prop_a && prop_b && prop_c && prop_d && radius_bound; }
};

/// Calderon-Zygmund cover of {M F > lambda} by a Vitali selection of maximal-radius witness balls.
CoverReport vitali_cz_cover(const MetricMeasureSpace& space, const BallBasis& basis, std::span<const double> F,
                            double lambda, double tau, const DoublingProfile& profile);

/// Minimizer of mean_B |f - c|^rho over the data values c on B (smallest on ties) and the minimum.
struct InfOscillation {
    double c = 0.0;
    double value = 0.0;
};
InfOscillation inf_oscillation(const MetricMeasureSpace& space, std::span<const double> f, double rho,
                               const SiteSet& B);

template <class T>
struct IndependentSet {
    T best = T(0);
    std::vector<std::size_t> chosen;
    bool exact = true;
    T upper_bound = T(0);
    std::size_t nodes = 0;
};

/// Maximum total weight of pairwise disjoint footprints, by branch and bound with a greedy incumbent.
/// Without enough node budget the greedy/partial answer is returned with exact = false.
template <class T>
IndependentSet<T> max_weight_independent_set(const std::vector<SiteSet>& footprints, const std::vector<T>& weights,
                                             std::span<const double> site_measure, std::size_t node_budget = 2000000);

/// A candidate of the disjoint-family suprema: B(center, r) with footprint tau B.
struct BallCandidate {
    Ball ball;
    SiteSet sites;      // B
    SiteSet footprint;  // tau B
    double oscillation = 0.0;  // (inf_c mean_B |f - c|^rho)^{1/rho}
    double weight = 0.0;       // oscillation^p mu(tau B)
};

/// Distinct candidate balls B with tau B inside `container`, keyed by tau B (largest weight kept),
/// zero weights dropped.
std::vector<BallCandidate> jn_candidates(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                         double rho, double tau, const SiteSet& container);

struct JnResult {
    double norm = 0.0;
    double best = 0.0;  // maximal sum of weights
    Rational best_exact;
    bool exact = true;
    double upper_bound = 0.0;
    std::size_t candidates = 0;
    std::vector<Ball> family;
};

/// ||f||_{JN^rho_{p,tau}, B}; `exact_arithmetic` runs the search on rational weights.
JnResult jn_ptr_norm(const MetricMeasureSpace& space, std::span<const double> f, double p, double rho, double tau,
                     const Ball& B, bool exact_arithmetic = false);

/// A nonnegative functional on balls.
struct BallFunctional {
    std::function<double(const Ball&)> fn;
    std::string name;
};

/// a_0(B) = (inf_c mean_{B/tau} |f - c|^rho)^{1/rho}.
BallFunctional exact_oscillation_functional(const MetricMeasureSpace& space, std::vector<double> f, double rho,
                                            double tau);
BallFunctional radius_power_functional(double alpha, double scale = 1.0);

struct DpResult {
    double norm = 0.0;          // ||a||_{D_p,B}
    double a_B = 0.0;
    double best = 0.0;
    Rational best_exact;
    bool exact = true;
    std::size_t candidates = 0;
};

/// ||a||_{D_p,B} over pairwise disjoint balls inside B, evaluated on the canonical radii
/// (the tau-dilates of the JN candidate radii, so that both suprema range over the same sets).
DpResult dp_norm_metric(const MetricMeasureSpace& space, const BallFunctional& a, double p, double tau, const Ball& B,
                        bool exact_arithmetic = false);

struct FpwMetricReport {
    double p = 0.0, rho = 1.0, tau = 1.0, eta = 1.0;
    bool hypothesis_ok = true;
    std::size_t hypothesis_checked = 0;
    std::vector<Ball> hypothesis_violations;
    JnResult jn;       // on tau hat B0
    DpResult dp;       // on tau hat B0
    double product = 0.0;  // ||a||_{D_p} a(tau hat B0)
    bool chain_ok = true;  // jn^p <= (||a|| a)^p, compared in rational arithmetic
    double weak_lhs = 0.0; // ||f - f_{B0}||_{L^{p,inf}(B0)}
    double weak_ratio = 0.0;
    bool pass() const { return hypothesis_ok && chain_ok; }
};

FpwMetricReport verify_fpw_metric(const MetricMeasureSpace& space, std::span<const double> f, const BallFunctional& a,
                                  double p, double rho, double tau, const Ball& B0, double eta);

/// Per-ball triple of the metric good-lambda theorem, G and H listed over the sites of the ball.
struct MetricTriple {
    std::vector<double> G;
    std::vector<double> H;
    double g = 0.0;
};

struct MetricProvider {
    double theta = 1.0;
    double delta = 0.0;
    double tau = 1.0;
    std::function<MetricTriple(const BasisMember&)> triple;
    std::string name;
};

/// Weak Gurov-Reshetnyak provider on B0: G = |w - w_B|, H = |w_B - w_{B0}|, g = eps w_{B0},
/// Theta = c_mu tau^D, delta = eps; eps is the least constant of the weak condition over the members.
struct MetricSetup {
    std::vector<double> F;
    MetricProvider provider;
    double epsilon = 0.0;
};
MetricSetup weak_gr_metric_provider(const MetricMeasureSpace& space, const BallBasis& basis, std::vector<double> w,
                                    double tau, const DoublingProfile& profile);
/// Oscillation provider: F = |f - c_{hat B0}|^rho, G = |f - c_B|^rho, H = |c_B - c_{hat B0}|^rho,
/// g = inf_c mean_B |f - c|^rho, Theta = 2 c_mu tau^D, delta = 0.
MetricSetup jn_metric_provider(const MetricMeasureSpace& space, const BallBasis& basis, std::vector<double> f,
                               double rho, double tau, const DoublingProfile& profile);

struct MetricLevelPoint {
    double K = 0.0, gamma = 0.0, lambda = 0.0;
    double measure_E = 0.0, measure_Omega = 0.0;
    double observed_constant = 0.0;  // mu(E) (K - Theta) / ((delta + gamma) mu(Omega))
    bool skipped = false;
    std::string reason;
    bool pass = true;
};

struct MetricGoodLambdaReport {
    bool hypotheses_ok = true;
    std::size_t hypothesis_violations = 0;
    double lambda0 = 0.0;
    double F_hat_mean = 0.0;
    double K_min = 0.0;  // max(Theta, c_mu 3^D)
    std::vector<MetricLevelPoint> points;
    double max_observed_constant = 0.0;
    std::optional<double> calibrated_constant;
    bool empirical = true;
    bool pass() const;
};

/// Level-set measures inside hat B0. With a calibrated constant, each point must satisfy
/// mu(E) <= C (delta + gamma)/(K - Theta) mu(Omega); otherwise only the observed constant is reported.
/// `lambdas` are multiples of lambda0 * mean_{hat B0} F.
MetricGoodLambdaReport verify_good_lambda_metric(const MetricMeasureSpace& space, const BallBasis& basis,
                                                 std::span<const double> F, const MetricProvider& provider,
                                                 const DoublingProfile& profile, const std::vector<double>& Ks,
                                                 const std::vector<double>& gammas,
                                                 const std::vector<double>& lambdas,
                                                 std::optional<double> calibrated_constant = std::nullopt);

struct WeakGrReport {
    double tau = 1.0, eta = 1.0, p = 1.0;
    double epsilon = 0.0;
    bool epsilon_infinite = false;
    std::size_t balls = 0;
    double constant = 1.0;  // C_mu used in the threshold and p(eps)
    bool calibrated = false;
    double threshold = 0.0;
    double p_of_eps = 0.0;
    bool applicable = false;
    std::string not_applicable_reason;
    double observed_oscillation_constant = 0.0;  // max (mean_B |w-w_B|^p)^{1/p} / (eps w_{tau hat B})
    double observed_reverse_constant = 0.0;      // max (mean_B w^p)^{1/p} / w_{tau hat B}
    std::optional<double> oscillation_bound;
    std::optional<double> reverse_bound;
    bool pass = true;
};

/// The weak condition mean_B |w - w_B| <= eps w_{tau B} over balls with tau B inside tau hat B0, and the
/// resulting L^p bounds. Calibrated constants, when given, turn the reported ratios into assertions.
WeakGrReport verify_weak_gr_metric(const MetricMeasureSpace& space, std::span<const double> w, double tau,
                                   const Ball& B0, double eta, double p, const DoublingProfile& profile,
                                   std::optional<double> calibrated_constant = std::nullopt,
                                   std::optional<double> oscillation_bound = std::nullopt,
                                   std::optional<double> reverse_bound = std::nullopt);

}  // namespace oscillab
