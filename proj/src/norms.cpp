#include "oscillab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oscillab {
namespace {

void check_exponent(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("exponent p must be a finite positive number");
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) return std::accumulate(v.begin(), v.end(), 0.0);
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> leaf_values(const GridFunction& f, const DyadicCube& q) {
    const DyadicGrid grid = f.grid();
    std::vector<double> out;
    for (std::size_t leaf : grid.leaves_of(grid.node(q))) out.push_back(f[leaf]);
    return out;
}

void check_weights(std::span<const double> values, std::span<const double> weights) {
    if (!weights.empty() && weights.size() != values.size())
        throw DomainError("weights and values differ in length");
}

}  // namespace

double pairwise_mean(std::span<const double> values) {
    if (values.empty()) throw DomainError("mean of an empty set");
    return pairwise_sum(values) / static_cast<double>(values.size());
}

double lp_norm(std::span<const double> values, double p, std::span<const double> weights) {
    check_exponent(p);
    check_weights(values, weights);
    if (values.empty()) throw DomainError("norm over an empty set");
    double top = 0.0;
    for (double v : values) top = std::max(top, std::abs(v));
    if (top == 0.0) return 0.0;
    // Scaling by the max keeps constants exact: (mean 1^p)^{1/p} == 1.
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::pow(std::abs(values[i]) / top, p);
    double mean;
    if (weights.empty()) {
        mean = pairwise_mean(terms);
    } else {
        for (std::size_t i = 0; i < terms.size(); ++i) terms[i] *= weights[i];
        mean = pairwise_sum(terms) / pairwise_sum(weights);
    }
    return top * std::pow(mean, 1.0 / p);
}

double weak_lp_norm(std::span<const double> values, double p, std::span<const double> weights) {
    check_exponent(p);
    check_weights(values, weights);
    if (values.empty()) throw DomainError("norm over an empty set");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
    const double total = weights.empty() ? static_cast<double>(values.size()) : pairwise_sum(weights);
    double best = 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double v = std::abs(values[order[k]]);
        mass += weights.empty() ? 1.0 : weights[order[k]];
        const bool group_end = k + 1 == order.size() || std::abs(values[order[k + 1]]) != v;
        if (!group_end || v == 0.0) continue;
        const double frac = std::min(1.0, mass / total);
        best = std::max(best, v * std::pow(frac, 1.0 / p));
    }
    return best;
}

double distribution_fraction(std::span<const double> values, double lambda, std::span<const double> weights) {
    check_weights(values, weights);
    if (values.empty()) throw DomainError("distribution over an empty set");
    if (weights.empty()) {
        std::size_t count = 0;
        for (double v : values) count += std::abs(v) > lambda ? 1 : 0;
        return static_cast<double>(count) / static_cast<double>(values.size());
    }
    double above = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        total += weights[i];
        if (std::abs(values[i]) > lambda) above += weights[i];
    }
    return above / total;
}

double lp_norm(const GridFunction& f, double p, const DyadicCube& q) {
    check_exponent(p);
    const auto v = leaf_values(f, q);
    return lp_norm(v, p);
}

double weak_lp_norm(const GridFunction& f, double p, const DyadicCube& q) {
    check_exponent(p);
    const auto v = leaf_values(f, q);
    return weak_lp_norm(v, p);
}

double distribution_fraction(const GridFunction& f, double lambda, const DyadicCube& q) {
    const auto v = leaf_values(f, q);
    return distribution_fraction(v, lambda);
}

}  // namespace oscillab
