#include "oscillab/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace oscillab {

Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw DomainError("expected a number, got " + j.dump());
}

Json to_json(const GridFunction& f) {
    Json j;
    j["dim"] = f.dim();
    j["depth"] = f.depth();
    j["origin"] = f.base().origin;
    j["side"] = f.base().side;
    j["values"] = std::vector<double>(f.values().begin(), f.values().end());
    return j;
}

GridFunction grid_function_from_json(const Json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const int depth = j.at("depth").get<int>();
        BaseCube base = BaseCube::unit(dim);
        if (j.contains("origin")) base.origin = j["origin"].get<std::vector<double>>();
        if (j.contains("side")) base.side = j["side"].get<double>();
        return build_grid_function(dim, depth, base, j.at("values").get<std::vector<double>>());
    } catch (const Json::exception& e) {
        throw DomainError(std::string("malformed grid function: ") + e.what());
    }
}

Json to_json(const DyadicCube& q) {
    return Json{{"level", q.level()}, {"coords", q.coords()}};
}

DyadicCube cube_from_json(const Json& j) {
    try {
        return DyadicCube(j.at("level").get<int>(), j.at("coords").get<std::vector<std::int64_t>>());
    } catch (const Json::exception& e) {
        throw DomainError(std::string("malformed cube: ") + e.what());
    }
}

Json to_json(const StoppingFamily& s) {
    Json cubes = Json::array();
    for (const auto& q : s.cubes) cubes.push_back(to_json(q));
    return Json{{"cubes", cubes},
                {"threshold", number(s.threshold)},
                {"criterion", s.criterion == StoppingCriterion::average ? "average" : "oscillation"},
                {"root_exceeds", s.root_exceeds}};
}

Json to_json(const MetricMeasureSpace& space) {
    Json j;
    j["points"] = space.ids();
    j["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
    if (!space.coords().empty()) {
        j["coords"] = space.coords();
        j["metric"] = "euclidean";
    } else {
        std::vector<std::vector<double>> d(space.size(), std::vector<double>(space.size()));
        for (std::size_t i = 0; i < space.size(); ++i)
            for (std::size_t k = 0; k < space.size(); ++k) d[i][k] = space.d(i, k);
        j["dist"] = d;
    }
    return j;
}

MetricMeasureSpace space_from_json(const Json& j) {
    try {
        std::vector<std::string> ids;
        if (j.contains("points"))
            for (const auto& p : j["points"]) ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        std::size_t n = 0;
        if (j.contains("coords")) n = j["coords"].size();
        else if (j.contains("dist")) n = j["dist"].size();
        std::vector<double> w = j.contains("weights") ? j["weights"].get<std::vector<double>>()
                                                      : std::vector<double>(n, 1.0);
        if (j.contains("coords")) {
            if (j.value("metric", std::string("euclidean")) != "euclidean")
                throw DomainError("only the euclidean metric is supported for coordinates");
            return MetricMeasureSpace::euclidean(j["coords"].get<std::vector<std::vector<double>>>(), std::move(w),
                                                 std::move(ids));
        }
        return MetricMeasureSpace(j.at("dist").get<std::vector<std::vector<double>>>(), std::move(w), std::move(ids));
    } catch (const Json::exception& e) {
        throw DomainError(std::string("malformed space: ") + e.what());
    }
}

Json to_json(const Ball& b) {
    return Json{{"center", b.center}, {"radius", number(b.radius)}};
}

Ball ball_from_json(const Json& j) {
    try {
        return Ball{j.at("center").get<std::size_t>(), number_from(j.at("radius"))};
    } catch (const Json::exception& e) {
        throw DomainError(std::string("malformed ball: ") + e.what());
    }
}

CubeFunctional functional_from_json(const Json& j, const GridFunction& f) {
    const std::string kind = j.value("kind", std::string());
    if (kind == "constant") return constant_functional(number_from(j.at("c")));
    if (kind == "side-power") return side_power_functional(number_from(j.at("alpha")));
    if (kind == "gr") return gr_functional(f, number_from(j.at("eps")));
    if (kind == "oscillation")
        return oscillation_functional(f, mean_oscillation_family(f.grid(), f.root()));
    if (kind == "table") {
        std::map<DyadicCube, double> values;
        for (const auto& e : j.at("entries")) values[cube_from_json(e.at("cube"))] = number_from(e.at("value"));
        return table_functional(std::move(values));
    }
    throw DomainError("unknown functional kind '" + kind + "'");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DomainError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace

std::string json_to_csv(const Json& report, const std::string& table_key) {
    std::ostringstream os;
    if (!table_key.empty() && report.contains(table_key) && report[table_key].is_array()) {
        std::vector<std::vector<std::pair<std::string, std::string>>> rows;
        std::set<std::string> seen;
        std::vector<std::string> header;
        for (const auto& row : report[table_key]) {
            rows.emplace_back();
            flatten(row, "", rows.back());
            for (const auto& [k, v] : rows.back())
                if (seen.insert(k).second) header.push_back(k);
        }
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
        os << "\n";
        for (const auto& row : rows) {
            std::map<std::string, std::string> m(row.begin(), row.end());
            for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(m[header[i]]);
            os << "\n";
        }
        return os.str();
    }
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(report, "", flat);
    os << "key,value\n";
    for (const auto& [k, v] : flat) os << csv_field(k) << "," << csv_field(v) << "\n";
    return os.str();
}

// ---------------------------------------------------------------- generators

GridFunction random_uniform(int dim, int depth, std::uint64_t seed, double lo, double hi) {
    DyadicGrid grid(dim, depth);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(grid.leaf_count());
    for (double& x : v) x = u(rng);
    return build_grid_function(dim, depth, BaseCube::unit(dim), std::move(v));
}

GridFunction spike(int dim, int depth) {
    DyadicGrid grid(dim, depth);
    std::vector<double> v(grid.leaf_count(), 0.0);
    v.back() = static_cast<double>(grid.leaf_count());
    return build_grid_function(dim, depth, BaseCube::unit(dim), std::move(v));
}

GridFunction gr_weight(int dim, int depth, double eps0, std::uint64_t seed) {
    if (!(eps0 > 0 && eps0 < 1)) throw DomainError("eps0 must lie in (0, 1)");
    DyadicGrid grid(dim, depth);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    const double a = eps0 * (1 - eps0 * eps0 / 2);
    std::vector<double> v(grid.leaf_count());
    for (double& x : v) x = 1 + (coin(rng) ? a : -a);
    return build_grid_function(dim, depth, BaseCube::unit(dim), std::move(v));
}

GridFunction bmo_log(int dim, int depth) {
    DyadicGrid grid(dim, depth);
    const double h = std::ldexp(1.0, -depth);
    std::vector<double> v(grid.leaf_count());
    for (std::size_t k = 0; k < v.size(); ++k) {
        auto c = grid.decode(depth, k);
        double s = 0;
        for (auto ci : c) s += ((ci + 0.5) * h) * ((ci + 0.5) * h);
        v[k] = -0.5 * std::log(s);
    }
    return build_grid_function(dim, depth, BaseCube::unit(dim), std::move(v));
}

MetricMeasureSpace random_planar_space(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("empty space");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0), uw(0.5, 1.5);
    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]));
    };
    std::vector<std::vector<double>> pts;
    while (pts.size() < n) {
        std::vector<double> p{u(rng), u(rng)};
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            const double dpi = dist(p, pts[i]);
            if (!(dpi > 0)) ok = false;
            for (std::size_t k = 0; k < pts.size() && ok; ++k) {
                const double dpk = dist(p, pts[k]), dik = dist(pts[i], pts[k]);
                if (dpk > dpi + dik || dpi > dpk + dik || dik > dpi + dpk) ok = false;
            }
        }
        if (ok) pts.push_back(std::move(p));
    }
    std::vector<double> w(n);
    for (double& x : w) x = uw(rng);
    return MetricMeasureSpace::euclidean(pts, std::move(w));
}

}  // namespace oscillab
