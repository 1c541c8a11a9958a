#pragma once

#include <span>

#include "oscillab/dyadic.hpp"

namespace oscillab {

// All norms use the normalized measure dx/|Q| (resp. dmu/mu(B)), so ||1|| = 1 on every cube.
// An empty weight span means equal weights.

double lp_norm(std::span<const double> values, double p, std::span<const double> weights = {});
double weak_lp_norm(std::span<const double> values, double p, std::span<const double> weights = {});
double distribution_fraction(std::span<const double> values, double lambda, std::span<const double> weights = {});

double lp_norm(const GridFunction& f, double p, const DyadicCube& q);

/// sup_{lambda>0} lambda |{|f| > lambda}|^{1/p}, attained at a data value of |f|.
double weak_lp_norm(const GridFunction& f, double p, const DyadicCube& q);

/// |{x in Q : |f(x)| > lambda}| / |Q|.
double distribution_fraction(const GridFunction& f, double lambda, const DyadicCube& q);

/// Mean with pairwise summation; the building block for every normalized integral.
double pairwise_mean(std::span<const double> values);

}  // namespace oscillab
