#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscillab/czmax.hpp"
#include "oscillab/dyadic.hpp"
#include "oscillab/metric.hpp"
#include "oscillab/selfimprove.hpp"

namespace oscillab {

using Json = nlohmann::json;

/// Finite numbers as numbers; infinities and NaN as "inf", "-inf", "nan".
Json number(double v);
double number_from(const Json& j);

Json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j);

Json to_json(const DyadicCube& q);
DyadicCube cube_from_json(const Json& j);

Json to_json(const StoppingFamily& s);

/// {"points":[ids],"dist":[[...]],"weights":[...]} or {"coords":[[...]],"metric":"euclidean","weights":[...]}.
Json to_json(const MetricMeasureSpace& space);
MetricMeasureSpace space_from_json(const Json& j);

Json to_json(const Ball& b);
Ball ball_from_json(const Json& j);

/// {"kind":"constant","c":..}, {"kind":"side-power","alpha":..}, {"kind":"gr","eps":..} (uses `f`),
/// {"kind":"oscillation"} (uses `f`), or {"kind":"table","entries":[{"cube":..,"value":..}]}.
CubeFunctional functional_from_json(const Json& j, const GridFunction& f);

Json read_json_file(const std::string& path);
/// Writes to the file, or to stdout when `path` is empty.
void write_text(const std::string& path, const std::string& text);

/// Nested objects flattened to dotted keys; an array of objects under `table_key` becomes a table.
std::string json_to_csv(const Json& report, const std::string& table_key = "");

// Generators. All are deterministic in the seed.

/// Leaf values uniform in [lo, hi).
GridFunction random_uniform(int dim, int depth, std::uint64_t seed, double lo = 0.0, double hi = 1.0);
/// Zero except the last leaf, which holds the leaf count (so the mean is 1).
GridFunction spike(int dim, int depth);
/// w = 1 + a s with random signs s and a = eps0 (1 - eps0^2 / 2), so that gr_epsilon(w) <= eps0.
GridFunction gr_weight(int dim, int depth, double eps0, std::uint64_t seed);
/// -log |x| at the leaf centers of the unit cube.
GridFunction bmo_log(int dim, int depth);
/// N points uniform in the unit square with weights uniform in [0.5, 1.5); a point is redrawn while
/// any triangle through it fails the triangle inequality in floating point.
MetricMeasureSpace random_planar_space(std::size_t n, std::uint64_t seed);

}  // namespace oscillab
