#include "oscillab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "oscillab/norms.hpp"

namespace oscillab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_or_self(double x, double e) { return e == 1.0 ? x : std::pow(x, e); }

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return kInf;
    return num / den;
}

std::vector<std::size_t> members_of(const SiteSet& s) {
    std::vector<std::size_t> out;
    for (auto i = s.find_first(); i != SiteSet::npos; i = s.find_next(i)) out.push_back(i);
    return out;
}

// Representatives of the intervals cut out by the breakpoints: the midpoint of each bounded interval
// and twice the largest breakpoint.
std::vector<double> interval_midpoints(std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> reps;
    double prev = 0.0;
    for (double b : breaks) {
        if (b <= 0.0) continue;
        reps.push_back(prev + (b - prev) / 2);
        prev = b;
    }
    reps.push_back(prev > 0.0 ? 2 * prev : 1.0);
    return reps;
}

std::vector<double> scaled_breaks(const MetricMeasureSpace& space, std::size_t x, std::initializer_list<double> scales) {
    std::vector<double> out;
    for (double e : space.distance_levels(x)) {
        if (e == 0.0) continue;
        for (double s : scales) out.push_back(e / s);
    }
    return out;
}

void check_oscillation_params(double p, double rho, double tau) {
    if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("p must be positive and finite");
    if (!(rho > 0 && rho <= 1)) throw std::invalid_argument("rho must lie in (0, 1]");
    if (!(tau >= 1) || !std::isfinite(tau)) throw std::invalid_argument("tau must be at least 1");
}

void check_ball(const MetricMeasureSpace& space, const Ball& b) {
    if (b.center >= space.size()) throw std::invalid_argument("ball center out of range");
    if (!(b.radius > 0) || !std::isfinite(b.radius)) throw std::invalid_argument("ball radius must be positive");
}

}  // namespace

// ---------------------------------------------------------------- space

MetricMeasureSpace::MetricMeasureSpace(std::vector<std::vector<double>> dist, std::vector<double> weights,
                                       std::vector<std::string> ids)
    : weights_(std::move(weights)), ids_(std::move(ids)) {
    const std::size_t n = weights_.size();
    if (n == 0) throw std::invalid_argument("empty space");
    if (dist.size() != n) throw std::invalid_argument("distance matrix size does not match weights");
    dist_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) throw std::invalid_argument("distance matrix is not square");
        if (!(weights_[i] > 0) || !std::isfinite(weights_[i]))
            throw std::invalid_argument("weights must be positive and finite");
        for (std::size_t j = 0; j < n; ++j) dist_[i * n + j] = dist[i][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal at site " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!(d(i, j) > 0) || !std::isfinite(d(i, j)))
                throw std::invalid_argument("distances between distinct sites must be positive and finite");
            if (d(i, j) != d(j, i)) throw std::invalid_argument("distance matrix is not symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (d(i, k) > d(i, j) + d(j, k))
                    throw std::invalid_argument("triangle inequality fails at (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ", " + std::to_string(k) + ")");
    if (ids_.empty())
        for (std::size_t i = 0; i < n; ++i) ids_.push_back(std::to_string(i));
    if (ids_.size() != n) throw std::invalid_argument("ids size does not match weights");
}

MetricMeasureSpace MetricMeasureSpace::euclidean(const std::vector<std::vector<double>>& coords,
                                                 std::vector<double> weights, std::vector<std::string> ids) {
    const std::size_t n = coords.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (coords[i].size() != coords[0].size()) throw std::invalid_argument("coordinates of mixed dimension");
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0;
            for (std::size_t k = 0; k < coords[i].size(); ++k) s += (coords[i][k] - coords[j][k]) * (coords[i][k] - coords[j][k]);
            dist[i][j] = dist[j][i] = std::sqrt(s);
        }
    }
    MetricMeasureSpace space(std::move(dist), std::move(weights), std::move(ids));
    space.coords_ = coords;
    return space;
}

SiteSet MetricMeasureSpace::ball_set(const Ball& b) const {
    SiteSet s(size());
    for (std::size_t y = 0; y < size(); ++y)
        if (d(b.center, y) < b.radius) s.set(y);
    return s;
}

SiteSet MetricMeasureSpace::all_sites() const {
    SiteSet s(size());
    s.set();
    return s;
}

double MetricMeasureSpace::measure(const SiteSet& s) const {
    double m = 0;
    for (auto i = s.find_first(); i != SiteSet::npos; i = s.find_next(i)) m += weights_[i];
    return m;
}

double MetricMeasureSpace::average(const SiteSet& s, std::span<const double> values) const {
    if (s.none()) throw std::invalid_argument("average over an empty set");
    double num = 0, den = 0;
    for (auto i = s.find_first(); i != SiteSet::npos; i = s.find_next(i)) {
        num += weights_[i] * values[i];
        den += weights_[i];
    }
    return num / den;
}

std::vector<double> MetricMeasureSpace::distance_levels(std::size_t i) const {
    std::vector<double> e(dist_.begin() + i * size(), dist_.begin() + (i + 1) * size());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

// ---------------------------------------------------------------- doubling

DoublingProfile doubling_constants(const MetricMeasureSpace& space, const std::vector<double>& D_grid) {
    if (D_grid.empty()) throw std::invalid_argument("empty D grid");
    for (double D : D_grid)
        if (!(D > 0) || !std::isfinite(D)) throw std::invalid_argument("D must be positive");

    // Radii r in (lo, hi] give the set {d(x, .) <= lo}.
    struct Piece {
        SiteSet set;
        double lo, hi, mu;
    };
    std::vector<Piece> pieces;
    for (std::size_t x = 0; x < space.size(); ++x) {
        auto e = space.distance_levels(x);
        for (std::size_t k = 0; k < e.size(); ++k) {
            SiteSet s(space.size());
            for (std::size_t y = 0; y < space.size(); ++y)
                if (space.d(x, y) <= e[k]) s.set(y);
            double mu = space.measure(s);
            pieces.push_back({std::move(s), e[k], k + 1 < e.size() ? e[k + 1] : kInf, mu});
        }
    }

    std::vector<double> c(D_grid.size(), 1.0);
    for (const Piece& a : pieces) {
        for (const Piece& b : pieces) {
            if (!(a.lo < b.hi) || !a.set.is_subset_of(b.set)) continue;
            double ratio = b.mu / a.mu;
            bool overlap = a.hi > b.lo;
            for (std::size_t t = 0; t < D_grid.size(); ++t) {
                if (ratio <= c[t]) continue;
                double v = overlap ? ratio : ratio * std::pow(a.hi / b.lo, D_grid[t]);
                c[t] = std::max(c[t], v);
            }
        }
    }

    DoublingProfile prof;
    double best = kInf;
    for (std::size_t t = 0; t < D_grid.size(); ++t) {
        prof.table.push_back({D_grid[t], c[t]});
        double score = c[t] * std::pow(2.0, D_grid[t]);
        if (score < best) {
            best = score;
            prof.c_mu = c[t];
            prof.D = D_grid[t];
        }
    }
    return prof;
}

// ---------------------------------------------------------------- basis and maximal function

std::vector<double> canonical_radii(const MetricMeasureSpace& space, std::size_t center, double r_max) {
    std::vector<double> out;
    for (double e : space.distance_levels(center))
        if (e > 0 && e < r_max) out.push_back(e);
    out.push_back(r_max);
    return out;
}

BallBasis ball_basis(const MetricMeasureSpace& space, const Ball& B0, double eta) {
    check_ball(space, B0);
    if (!(eta > 0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
    BallBasis basis;
    basis.B0 = B0;
    basis.eta = eta;
    basis.B0_sites = space.ball_set(B0);
    basis.hat_sites = space.ball_set(B0.dilate(1 + eta));
    basis.covered = SiteSet(space.size());
    const double r_max = eta * B0.radius;
    for (std::size_t x : members_of(basis.B0_sites)) {
        for (double r : canonical_radii(space, x, r_max)) {
            Ball b{x, r};
            SiteSet s = space.ball_set(b);
            basis.covered |= s;
            basis.members.push_back({b, std::move(s)});
        }
    }
    return basis;
}

namespace {

std::vector<double> member_averages(const MetricMeasureSpace& space, const BallBasis& basis,
                                    std::span<const double> F) {
    std::vector<double> absF(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) absF[i] = std::abs(F[i]);
    std::vector<double> avg;
    avg.reserve(basis.members.size());
    for (const auto& m : basis.members) avg.push_back(space.average(m.sites, absF));
    return avg;
}

void check_site_values(const MetricMeasureSpace& space, std::span<const double> F) {
    if (F.size() != space.size()) throw std::invalid_argument("site values do not match the space size");
    for (double v : F)
        if (!std::isfinite(v)) throw std::invalid_argument("site values must be finite");
}

}  // namespace

std::vector<double> ball_maximal(const MetricMeasureSpace& space, const BallBasis& basis,
                                 std::span<const double> F) {
    check_site_values(space, F);
    auto avg = member_averages(space, basis, F);
    std::vector<double> M(space.size(), 0.0);
    for (std::size_t k = 0; k < basis.members.size(); ++k)
        for (std::size_t y : members_of(basis.members[k].sites)) M[y] = std::max(M[y], avg[k]);
    return M;
}

double lambda0(double tau, double eta, const DoublingProfile& profile) {
    if (!(tau >= 1)) throw std::invalid_argument("tau must be at least 1");
    if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
    return std::pow(15 * tau, profile.D) * profile.c_mu * std::pow(1 + 1 / eta, profile.D);
}

// ---------------------------------------------------------------- covering

CoverReport vitali_cz_cover(const MetricMeasureSpace& space, const BallBasis& basis, std::span<const double> F,
                            double lambda, double tau, const DoublingProfile& profile) {
    check_site_values(space, F);
    CoverReport rep;
    rep.lambda = lambda;
    rep.lambda0 = lambda0(tau, basis.eta, profile);
    std::vector<double> absF(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) absF[i] = std::abs(F[i]);
    rep.threshold = rep.lambda0 * space.average(basis.hat_sites, absF);
    if (lambda < rep.threshold) throw std::invalid_argument("lambda is below lambda0 times the average over hat B0");

    auto avg = member_averages(space, basis, F);
    std::vector<double> M(space.size(), 0.0);
    for (std::size_t k = 0; k < basis.members.size(); ++k)
        for (std::size_t y : members_of(basis.members[k].sites)) M[y] = std::max(M[y], avg[k]);

    SiteSet omega(space.size());
    for (std::size_t y = 0; y < space.size(); ++y)
        if (M[y] > lambda) {
            omega.set(y);
            rep.omega.push_back(y);
        }
    if (omega.none()) return rep;

    // Witness of y: the largest member containing y with average above lambda.
    std::vector<std::size_t> witnesses;
    for (std::size_t y : rep.omega) {
        std::size_t best = basis.members.size();
        for (std::size_t k = 0; k < basis.members.size(); ++k) {
            if (!basis.members[k].sites.test(y) || !(avg[k] > lambda)) continue;
            if (best == basis.members.size() || basis.members[k].ball.radius > basis.members[best].ball.radius)
                best = k;
        }
        witnesses.push_back(best);
    }
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
    rep.witnesses = witnesses.size();
    std::stable_sort(witnesses.begin(), witnesses.end(), [&](std::size_t a, std::size_t b) {
        return basis.members[a].ball.radius > basis.members[b].ball.radius;
    });

    std::vector<std::size_t> chosen;
    for (std::size_t k : witnesses) {
        bool free = true;
        for (std::size_t j : chosen)
            if (basis.members[j].sites.intersects(basis.members[k].sites)) {
                free = false;
                break;
            }
        if (free) chosen.push_back(k);
    }

    auto fail = [&](bool& flag, const std::string& why) {
        if (flag && rep.failure.empty()) rep.failure = why;
        flag = false;
    };
    const double r0 = basis.B0.radius, eta = basis.eta;
    SiteSet union5(space.size());
    for (std::size_t a = 0; a < chosen.size(); ++a) {
        const auto& m = basis.members[chosen[a]];
        rep.selected.push_back(m.ball);
        for (std::size_t b = a + 1; b < chosen.size(); ++b)
            if (m.sites.intersects(basis.members[chosen[b]].sites)) fail(rep.disjoint, "selected balls intersect");
        if (!m.sites.is_subset_of(omega)) fail(rep.prop_a, "selected ball leaves Omega");
        union5 |= space.ball_set(m.ball.dilate(5));
        if (!(15 * tau * m.ball.radius <= eta * r0)) fail(rep.prop_b, "15 tau B_i is not in the basis");
        if (!(m.ball.radius <= eta * r0 / (15 * tau))) fail(rep.radius_bound, "radius bound fails");
        if (!(avg[chosen[a]] > lambda)) fail(rep.prop_c, "average over B_i is not above lambda");

        // Every distinct ball B(x_i, s) with 2 r_i <= s <= eta r0.
        const double lo = 2 * m.ball.radius, hi = eta * r0;
        if (lo <= hi) {
            auto e = space.distance_levels(m.ball.center);
            for (std::size_t k = 0; k < e.size(); ++k) {
                double top = k + 1 < e.size() ? e[k + 1] : kInf;
                if (!(top >= lo && e[k] < hi)) continue;
                SiteSet s(space.size());
                for (std::size_t y = 0; y < space.size(); ++y)
                    if (space.d(m.ball.center, y) <= e[k]) s.set(y);
                if (space.average(s, absF) > lambda) fail(rep.prop_d, "average over a dilate of B_i exceeds lambda");
            }
        }
    }
    if (!omega.is_subset_of(union5)) fail(rep.prop_a, "Omega is not covered by the 5-dilates");
    return rep;
}

// ---------------------------------------------------------------- oscillation and independent sets

InfOscillation inf_oscillation(const MetricMeasureSpace& space, std::span<const double> f, double rho,
                               const SiteSet& B) {
    if (B.none()) throw std::invalid_argument("empty ball");
    if (!(rho > 0 && rho <= 1)) throw std::invalid_argument("rho must lie in (0, 1]");
    auto sites = members_of(B);
    std::vector<double> cs;
    for (std::size_t i : sites) cs.push_back(f[i]);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    InfOscillation out;
    double best = kInf;
    for (double c : cs) {
        double s = 0;
        for (std::size_t i : sites) s += space.weight(i) * pow_or_self(std::abs(f[i] - c), rho);
        if (s < best) {
            best = s;
            out.c = c;
        }
    }
    out.value = best / space.measure(B);
    return out;
}

template <class T>
IndependentSet<T> max_weight_independent_set(const std::vector<SiteSet>& footprints, const std::vector<T>& weights,
                                             std::span<const double> site_measure, std::size_t node_budget) {
    const std::size_t n = footprints.size();
    if (weights.size() != n) throw std::invalid_argument("weights and footprints differ in size");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

    std::vector<T> mu(site_measure.size());
    for (std::size_t y = 0; y < mu.size(); ++y) mu[y] = T(site_measure[y]);
    std::vector<T> density(n);
    for (std::size_t i = 0; i < n; ++i) {
        T m(0);
        for (auto y = footprints[i].find_first(); y != SiteSet::npos; y = footprints[i].find_next(y)) m += mu[y];
        density[i] = m > T(0) ? T(weights[i] / m) : T(0);
    }
    // sum over sites of mu(y) times the largest density covering y: disjoint families never exceed it.
    auto bound = [&](const std::vector<std::size_t>& rest) {
        T total(0);
        for (std::size_t i : rest) total += weights[i];
        std::vector<T> top(mu.size(), T(0));
        for (std::size_t i : rest)
            for (auto y = footprints[i].find_first(); y != SiteSet::npos; y = footprints[i].find_next(y))
                if (density[i] > top[y]) top[y] = density[i];
        T dens(0);
        for (std::size_t y = 0; y < mu.size(); ++y)
            if (top[y] > T(0)) dens += top[y] * mu[y];
        return dens < total ? dens : total;
    };

    IndependentSet<T> res;
    std::vector<std::size_t> positive;
    for (std::size_t i : order)
        if (weights[i] > T(0)) positive.push_back(i);
    for (std::size_t i : positive) {
        bool ok = true;
        for (std::size_t j : res.chosen)
            if (footprints[i].intersects(footprints[j])) {
                ok = false;
                break;
            }
        if (ok) {
            res.chosen.push_back(i);
            res.best += weights[i];
        }
    }
    res.upper_bound = bound(positive);

    std::vector<std::size_t> current;
    auto search = [&](auto&& self, const std::vector<std::size_t>& rest, const T& sum) -> void {
        if (++res.nodes > node_budget) {
            res.exact = false;
            return;
        }
        if (rest.empty()) {
            if (sum > res.best) {
                res.best = sum;
                res.chosen = current;
            }
            return;
        }
        if (!(sum + bound(rest) > res.best)) return;
        const std::size_t head = rest.front();
        std::vector<std::size_t> with;
        for (std::size_t k = 1; k < rest.size(); ++k)
            if (!footprints[rest[k]].intersects(footprints[head])) with.push_back(rest[k]);
        current.push_back(head);
        self(self, with, sum + weights[head]);
        current.pop_back();
        if (!res.exact) return;
        std::vector<std::size_t> without(rest.begin() + 1, rest.end());
        self(self, without, sum);
    };
    search(search, positive, T(0));
    std::sort(res.chosen.begin(), res.chosen.end());
    if (res.exact) res.upper_bound = res.best;
    return res;
}

template IndependentSet<double> max_weight_independent_set<double>(const std::vector<SiteSet>&,
                                                                   const std::vector<double>&,
                                                                   std::span<const double>, std::size_t);
template IndependentSet<Rational> max_weight_independent_set<Rational>(const std::vector<SiteSet>&,
                                                                       const std::vector<Rational>&,
                                                                       std::span<const double>, std::size_t);

// ---------------------------------------------------------------- JN and D_p on balls

namespace {

// Radii r around x for which both B(x, r) and B(x, tau r) are constant on the surrounding interval.
std::vector<double> jn_radii(const MetricMeasureSpace& space, std::size_t x, double tau) {
    return interval_midpoints(scaled_breaks(space, x, {1.0, tau}));
}

struct WeightedSets {
    std::vector<SiteSet> footprints;
    std::vector<double> weights;
    std::vector<Ball> balls;
};

// Keyed by footprint, keeping the largest weight; zero weights dropped.
WeightedSets dedupe(std::map<SiteSet, std::pair<double, Ball>>& by_fp) {
    WeightedSets out;
    for (auto& [fp, wb] : by_fp) {
        if (!(wb.first > 0)) continue;
        out.footprints.push_back(fp);
        out.weights.push_back(wb.first);
        out.balls.push_back(wb.second);
    }
    return out;
}

void offer(std::map<SiteSet, std::pair<double, Ball>>& by_fp, SiteSet fp, double w, Ball b) {
    auto it = by_fp.find(fp);
    if (it == by_fp.end())
        by_fp.emplace(std::move(fp), std::make_pair(w, b));
    else if (w > it->second.first)
        it->second = {w, b};
}

struct SearchOutcome {
    double best = 0;
    Rational best_exact;
    bool exact = true;
    double upper = 0;
    std::vector<std::size_t> chosen;
};

SearchOutcome run_search(const MetricMeasureSpace& space, const WeightedSets& ws, bool exact_arithmetic) {
    SearchOutcome out;
    if (exact_arithmetic) {
        std::vector<Rational> w;
        for (double v : ws.weights) w.emplace_back(v);
        auto r = max_weight_independent_set<Rational>(ws.footprints, w, space.weights());
        out.best_exact = r.best;
        out.best = r.best.convert_to<double>();
        out.exact = r.exact;
        out.upper = r.upper_bound.convert_to<double>();
        out.chosen = r.chosen;
    } else {
        auto r = max_weight_independent_set<double>(ws.footprints, ws.weights, space.weights());
        out.best = r.best;
        out.best_exact = Rational(r.best);
        out.exact = r.exact;
        out.upper = r.upper_bound;
        out.chosen = r.chosen;
    }
    return out;
}

}  // namespace

std::vector<BallCandidate> jn_candidates(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                         double rho, double tau, const SiteSet& container) {
    check_site_values(space, f);
    check_oscillation_params(p, rho, tau);
    std::map<SiteSet, BallCandidate> by_fp;
    for (std::size_t x : members_of(container)) {
        for (double r : jn_radii(space, x, tau)) {
            Ball b{x, r};
            SiteSet fp = space.ball_set(b.dilate(tau));
            if (!fp.is_subset_of(container)) break;
            BallCandidate c;
            c.ball = b;
            c.sites = space.ball_set(b);
            c.oscillation = pow_or_self(inf_oscillation(space, f, rho, c.sites).value, 1 / rho);
            c.weight = pow_or_self(c.oscillation, p) * space.measure(fp);
            c.footprint = fp;
            auto it = by_fp.find(fp);
            if (it == by_fp.end())
                by_fp.emplace(std::move(fp), std::move(c));
            else if (c.weight > it->second.weight)
                it->second = std::move(c);
        }
    }
    std::vector<BallCandidate> out;
    for (auto& [fp, c] : by_fp)
        if (c.weight > 0) out.push_back(std::move(c));
    return out;
}

JnResult jn_ptr_norm(const MetricMeasureSpace& space, std::span<const double> f, double p, double rho, double tau,
                     const Ball& B, bool exact_arithmetic) {
    check_ball(space, B);
    SiteSet container = space.ball_set(B);
    auto cands = jn_candidates(space, f, p, rho, tau, container);
    WeightedSets ws;
    for (const auto& c : cands) {
        ws.footprints.push_back(c.footprint);
        ws.weights.push_back(c.weight);
        ws.balls.push_back(c.ball);
    }
    auto s = run_search(space, ws, exact_arithmetic);
    JnResult res;
    res.best = s.best;
    res.best_exact = s.best_exact;
    res.exact = s.exact;
    res.upper_bound = s.upper;
    res.candidates = cands.size();
    for (std::size_t i : s.chosen) res.family.push_back(ws.balls[i]);
    res.norm = std::pow(res.best / space.measure(container), 1 / p);
    return res;
}

BallFunctional exact_oscillation_functional(const MetricMeasureSpace& space, std::vector<double> f, double rho,
                                            double tau) {
    check_site_values(space, f);
    check_oscillation_params(1.0, rho, tau);
    return BallFunctional{[space, f = std::move(f), rho, tau](const Ball& b) {
                              SiteSet s = space.ball_set(Ball{b.center, b.radius / tau});
                              return pow_or_self(inf_oscillation(space, f, rho, s).value, 1 / rho);
                          },
                          "exact-oscillation"};
}

BallFunctional radius_power_functional(double alpha, double scale) {
    return BallFunctional{[alpha, scale](const Ball& b) { return scale * std::pow(b.radius, alpha); },
                          "radius-power"};
}

DpResult dp_norm_metric(const MetricMeasureSpace& space, const BallFunctional& a, double p, double tau, const Ball& B,
                        bool exact_arithmetic) {
    check_ball(space, B);
    check_oscillation_params(p, 1.0, tau);
    SiteSet container = space.ball_set(B);
    std::map<SiteSet, std::pair<double, Ball>> by_set;
    for (std::size_t x : members_of(container)) {
        for (double r : jn_radii(space, x, tau)) {
            Ball b{x, tau * r};
            SiteSet s = space.ball_set(b);
            if (!s.is_subset_of(container)) break;
            double v = a.fn(b);
            if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("ball functional must be finite and nonnegative");
            double w = pow_or_self(v, p) * space.measure(s);
            offer(by_set, std::move(s), w, b);
        }
    }
    auto ws = dedupe(by_set);
    auto s = run_search(space, ws, exact_arithmetic);
    DpResult res;
    res.best = s.best;
    res.best_exact = s.best_exact;
    res.exact = s.exact;
    res.candidates = ws.weights.size();
    res.a_B = a.fn(B);
    if (res.a_B > 0)
        res.norm = std::pow(res.best / space.measure(container), 1 / p) / res.a_B;
    else
        res.norm = res.best > 0 ? kInf : 0.0;
    return res;
}

FpwMetricReport verify_fpw_metric(const MetricMeasureSpace& space, std::span<const double> f, const BallFunctional& a,
                                  double p, double rho, double tau, const Ball& B0, double eta) {
    check_ball(space, B0);
    check_oscillation_params(p, rho, tau);
    FpwMetricReport rep;
    rep.p = p;
    rep.rho = rho;
    rep.tau = tau;
    rep.eta = eta;
    const Ball big = B0.dilate(tau * (1 + eta));
    SiteSet container = space.ball_set(big);

    for (std::size_t x : members_of(container)) {
        for (double r : jn_radii(space, x, tau)) {
            Ball b{x, r};
            if (!space.ball_set(b.dilate(tau)).is_subset_of(container)) break;
            ++rep.hypothesis_checked;
            double lhs = pow_or_self(inf_oscillation(space, f, rho, space.ball_set(b)).value, 1 / rho);
            if (lhs > a.fn(Ball{x, tau * r})) {
                rep.hypothesis_ok = false;
                rep.hypothesis_violations.push_back(b);
            }
        }
    }

    rep.jn = jn_ptr_norm(space, f, p, rho, tau, big, true);
    rep.dp = dp_norm_metric(space, a, p, tau, big, true);
    rep.chain_ok = rep.jn.best_exact <= rep.dp.best_exact;
    if (rep.dp.a_B > 0)
        rep.product = std::pow(rep.dp.best / space.measure(container), 1 / p);
    else
        rep.product = rep.dp.best > 0 ? kInf : 0.0;

    SiteSet b0 = space.ball_set(B0);
    double fb = space.average(b0, f);
    std::vector<double> vals, wts;
    for (std::size_t i : members_of(b0)) {
        vals.push_back(f[i] - fb);
        wts.push_back(space.weight(i));
    }
    rep.weak_lhs = weak_lp_norm(vals, p, wts);
    rep.weak_ratio = safe_ratio(rep.weak_lhs, rep.product);
    return rep;
}

// ---------------------------------------------------------------- good lambda on balls

MetricSetup weak_gr_metric_provider(const MetricMeasureSpace& space, const BallBasis& basis, std::vector<double> w,
                                    double tau, const DoublingProfile& profile) {
    check_site_values(space, w);
    for (double v : w)
        if (v < 0) throw std::invalid_argument("weight function must be nonnegative");
    if (!(tau >= 1)) throw std::invalid_argument("tau must be at least 1");
    const double w0 = space.average(basis.B0_sites, w);
    double eps = 0;
    for (const auto& m : basis.members) {
        double wb = space.average(m.sites, w);
        std::vector<double> dev(space.size());
        for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(w[i] - wb);
        eps = std::max(eps, safe_ratio(space.average(m.sites, dev), space.average(space.ball_set(m.ball.dilate(tau)), w)));
    }
    MetricSetup setup;
    setup.epsilon = eps;
    setup.F.resize(space.size());
    for (std::size_t i = 0; i < w.size(); ++i) setup.F[i] = std::abs(w[i] - w0);
    setup.provider.theta = profile.c_mu * std::pow(tau, profile.D);
    setup.provider.delta = eps;
    setup.provider.tau = tau;
    setup.provider.name = "weak-gr";
    setup.provider.triple = [&space, w = std::move(w), w0, eps](const BasisMember& m) {
        MetricTriple t;
        double wb = space.average(m.sites, w);
        for (std::size_t i : members_of(m.sites)) {
            t.G.push_back(std::abs(w[i] - wb));
            t.H.push_back(std::abs(wb - w0));
        }
        t.g = eps * w0;
        return t;
    };
    return setup;
}

MetricSetup jn_metric_provider(const MetricMeasureSpace& space, const BallBasis& basis, std::vector<double> f,
                               double rho, double tau, const DoublingProfile& profile) {
    check_site_values(space, f);
    check_oscillation_params(1.0, rho, tau);
    const double c_hat = inf_oscillation(space, f, rho, basis.hat_sites).c;
    MetricSetup setup;
    setup.F.resize(space.size());
    for (std::size_t i = 0; i < f.size(); ++i) setup.F[i] = pow_or_self(std::abs(f[i] - c_hat), rho);
    setup.provider.theta = 2 * profile.c_mu * std::pow(tau, profile.D);
    setup.provider.delta = 0;
    setup.provider.tau = tau;
    setup.provider.name = "jn";
    setup.provider.triple = [&space, f = std::move(f), rho, c_hat](const BasisMember& m) {
        MetricTriple t;
        auto io = inf_oscillation(space, f, rho, m.sites);
        for (std::size_t i : members_of(m.sites)) {
            t.G.push_back(pow_or_self(std::abs(f[i] - io.c), rho));
            t.H.push_back(pow_or_self(std::abs(io.c - c_hat), rho));
        }
        t.g = io.value;
        return t;
    };
    return setup;
}

bool MetricGoodLambdaReport::pass() const {
    if (!hypotheses_ok) return false;
    for (const auto& pt : points)
        if (!pt.skipped && !pt.pass) return false;
    return true;
}

MetricGoodLambdaReport verify_good_lambda_metric(const MetricMeasureSpace& space, const BallBasis& basis,
                                                 std::span<const double> F, const MetricProvider& provider,
                                                 const DoublingProfile& profile, const std::vector<double>& Ks,
                                                 const std::vector<double>& gammas,
                                                 const std::vector<double>& lambdas,
                                                 std::optional<double> calibrated_constant) {
    check_site_values(space, F);
    for (double v : F)
        if (v < 0) throw std::invalid_argument("F must be nonnegative");
    MetricGoodLambdaReport rep;
    rep.calibrated_constant = calibrated_constant;
    rep.empirical = true;
    const double theta = provider.theta, delta = provider.delta;
    double fmax = 0;
    for (double v : F) fmax = std::max(fmax, v);
    const double tol = 1e-12 * std::max(1.0, fmax);

    std::vector<double> Gstar(space.size(), 0.0);
    for (const auto& m : basis.members) {
        MetricTriple t = provider.triple(m);
        auto sites = members_of(m.sites);
        if (t.G.size() != sites.size() || t.H.size() != sites.size())
            throw std::invalid_argument("provider triple does not match the ball");
        double tauF = space.average(space.ball_set(m.ball.dilate(provider.tau)), F);
        double hmax = 0, gnum = 0, mu = 0;
        bool ok = true;
        for (std::size_t k = 0; k < sites.size(); ++k) {
            if (F[sites[k]] > t.G[k] + t.H[k] + tol) ok = false;
            hmax = std::max(hmax, t.H[k]);
            gnum += space.weight(sites[k]) * t.G[k];
            mu += space.weight(sites[k]);
        }
        if (hmax > theta * tauF + tol) ok = false;
        if (gnum / mu > delta * tauF + t.g + tol) ok = false;
        if (!ok) {
            rep.hypotheses_ok = false;
            ++rep.hypothesis_violations;
        }
        for (std::size_t y : sites) Gstar[y] = std::max(Gstar[y], t.g);
    }

    auto MF = ball_maximal(space, basis, F);
    rep.lambda0 = lambda0(provider.tau, basis.eta, profile);
    rep.F_hat_mean = space.average(basis.hat_sites, F);
    rep.K_min = std::max(theta, profile.c_mu * std::pow(3.0, profile.D));
    auto hat = members_of(basis.hat_sites);
    for (double K : Ks)
        for (double gamma : gammas)
            for (double mult : lambdas) {
                MetricLevelPoint pt;
                pt.K = K;
                pt.gamma = gamma;
                pt.lambda = mult * rep.lambda0 * rep.F_hat_mean;
                if (!(K > rep.K_min)) {
                    pt.skipped = true;
                    pt.reason = "K must exceed max(Theta, c_mu 3^D)";
                } else if (!(gamma > 0 && gamma < 1)) {
                    pt.skipped = true;
                    pt.reason = "gamma must lie in (0, 1)";
                } else if (!(mult >= 1)) {
                    pt.skipped = true;
                    pt.reason = "lambda below lambda0 times the average over hat B0";
                } else if (!(delta < 0.5)) {
                    pt.skipped = true;
                    pt.reason = "delta must be below 1/2";
                }
                if (pt.skipped) {
                    rep.points.push_back(pt);
                    continue;
                }
                for (std::size_t y : hat) {
                    if (MF[y] > pt.lambda) pt.measure_Omega += space.weight(y);
                    if (MF[y] > K * pt.lambda && Gstar[y] <= gamma * pt.lambda) pt.measure_E += space.weight(y);
                }
                pt.observed_constant =
                    safe_ratio(pt.measure_E * (K - theta), (delta + gamma) * pt.measure_Omega);
                rep.max_observed_constant = std::max(rep.max_observed_constant, pt.observed_constant);
                if (calibrated_constant)
                    pt.pass = pt.measure_E * (K - theta) <= *calibrated_constant * (delta + gamma) * pt.measure_Omega;
                rep.points.push_back(pt);
            }
    return rep;
}

// ---------------------------------------------------------------- weak Gurov-Reshetnyak

WeakGrReport verify_weak_gr_metric(const MetricMeasureSpace& space, std::span<const double> w, double tau,
                                   const Ball& B0, double eta, double p, const DoublingProfile& profile,
                                   std::optional<double> calibrated_constant, std::optional<double> oscillation_bound,
                                   std::optional<double> reverse_bound) {
    check_site_values(space, w);
    check_ball(space, B0);
    for (double v : w)
        if (v < 0) throw std::invalid_argument("weight function must be nonnegative");
    if (!(tau >= 1)) throw std::invalid_argument("tau must be at least 1");
    if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
    if (!(p >= 1) || !std::isfinite(p)) throw std::invalid_argument("p must be at least 1");

    WeakGrReport rep;
    rep.tau = tau;
    rep.eta = eta;
    rep.p = p;
    rep.constant = calibrated_constant.value_or(1.0);
    rep.calibrated = calibrated_constant.has_value();
    rep.oscillation_bound = oscillation_bound;
    rep.reverse_bound = reverse_bound;
    SiteSet container = space.ball_set(B0.dilate(tau * (1 + eta)));

    struct Row {
        SiteSet B, tauB, tauHat;
    };
    std::vector<Row> rows;
    for (std::size_t x : members_of(container)) {
        for (double r : interval_midpoints(scaled_breaks(space, x, {1.0, tau, tau * (1 + eta)}))) {
            Ball b{x, r};
            SiteSet tb = space.ball_set(b.dilate(tau));
            if (!tb.is_subset_of(container)) break;
            rows.push_back({space.ball_set(b), std::move(tb), space.ball_set(b.dilate(tau * (1 + eta)))});
        }
    }
    rep.balls = rows.size();

    std::vector<double> dev(space.size());
    for (const Row& row : rows) {
        double wb = space.average(row.B, w);
        for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(w[i] - wb);
        double e = safe_ratio(space.average(row.B, dev), space.average(row.tauB, w));
        if (std::isinf(e)) rep.epsilon_infinite = true;
        rep.epsilon = std::max(rep.epsilon, e);
    }

    const double D = profile.D, c = profile.c_mu, C = rep.constant;
    rep.threshold = (1 / (2 * C)) * std::pow(std::min(1.0, tau / 3), D);
    rep.p_of_eps = rep.epsilon == 0 ? kInf
                                     : std::log(c * std::pow(tau, D) / (C * rep.epsilon)) /
                                           std::log(2 * c * std::pow(std::max(tau, 3.0), D));
    if (rep.epsilon_infinite)
        rep.not_applicable_reason = "weak condition fails (zero average with positive oscillation)";
    else if (!(rep.epsilon < rep.threshold) && rep.epsilon > 0)
        rep.not_applicable_reason = "epsilon is not below the smallness threshold";
    else if (!(p < rep.p_of_eps))
        rep.not_applicable_reason = "p is not below p(epsilon)";
    rep.applicable = rep.not_applicable_reason.empty();

    for (const Row& row : rows) {
        double wb = space.average(row.B, w);
        std::vector<double> osc(space.size()), wp(space.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            osc[i] = pow_or_self(std::abs(w[i] - wb), p);
            wp[i] = pow_or_self(w[i], p);
        }
        double lhs_osc = pow_or_self(space.average(row.B, osc), 1 / p);
        double lhs_rev = pow_or_self(space.average(row.B, wp), 1 / p);
        double what = space.average(row.tauHat, w);
        rep.observed_oscillation_constant =
            std::max(rep.observed_oscillation_constant, safe_ratio(lhs_osc, rep.epsilon * what));
        rep.observed_reverse_constant = std::max(rep.observed_reverse_constant, safe_ratio(lhs_rev, what));
    }
    rep.pass = rep.applicable;
    if (rep.applicable && oscillation_bound && rep.observed_oscillation_constant > *oscillation_bound) rep.pass = false;
    if (rep.applicable && reverse_bound && rep.observed_reverse_constant > *reverse_bound) rep.pass = false;
    return rep;
}

}  // namespace oscillab
