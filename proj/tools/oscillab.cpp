// oscillab command-line front end.
//
// Exit status: 0 when every asserted inequality holds, 2 when one fails (or a hypothesis is
// violated), 1 on I/O and validation errors.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscillab/czmax.hpp"
#include "oscillab/dyadic.hpp"
#include "oscillab/goodlambda.hpp"
#include "oscillab/io.hpp"
#include "oscillab/metric.hpp"
#include "oscillab/norms.hpp"
#include "oscillab/oscillation.hpp"
#include "oscillab/selfimprove.hpp"

using namespace oscillab;

namespace {

struct Common {
    std::string input;
    std::string output;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool exact = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_input = true) {
    auto* in = sub->add_option("--input,-i", c.input, "input JSON file");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--output,-o", c.output, "output file (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_flag("--exact-rational", c.exact, "exact rational arithmetic where supported");
}

DyadicCube parse_cube(const std::string& s, int dim) {
    if (s.empty()) return DyadicCube::root(dim);
    auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("cube must look like level:c1,c2,...");
    int level = std::stoi(s.substr(0, colon));
    std::vector<std::int64_t> coords;
    std::stringstream ss(s.substr(colon + 1));
    for (std::string part; std::getline(ss, part, ',');) coords.push_back(std::stoll(part));
    DyadicCube q(level, coords);
    if (q.dim() != dim) throw DomainError("cube dimension does not match the input");
    return q;
}

OscillationFamily family(const GridFunction& f, int m) {
    if (m < 0) return mean_oscillation_family(f.grid(), f.root());
    return polynomial_oscillation_family(f.grid(), f.root(), m);
}

std::vector<double> site_values(const Json& space_json, const std::string& values_path) {
    if (!values_path.empty()) {
        Json v = read_json_file(values_path);
        if (v.is_object()) v = v.at("values");
        return v.get<std::vector<double>>();
    }
    if (space_json.contains("values")) return space_json["values"].get<std::vector<double>>();
    throw DomainError("no site values: pass --values or add \"values\" to the space");
}

Ball default_ball(const MetricMeasureSpace& space, std::size_t center, std::optional<double> radius) {
    if (radius) return Ball{center, *radius};
    double r = 0;
    for (std::size_t y = 0; y < space.size(); ++y) r = std::max(r, space.d(center, y));
    return Ball{center, r > 0 ? 2 * r : 1.0};
}

int emit(const Common& c, const std::string& command, Json params, Json report, bool pass,
         const std::string& table_key = "") {
    params["seed"] = c.seed;
    params["exact_rational"] = c.exact;
    if (!c.input.empty()) params["input"] = c.input;
    Json out = std::move(report);
    out["command"] = command;
    out["version"] = OSCILLAB_VERSION;
    out["params"] = std::move(params);
    out["pass"] = pass;
    write_text(c.output, c.format == "csv" ? json_to_csv(out, table_key) : out.dump(2) + "\n");
    return pass ? 0 : 2;
}

Json cube_list(const std::vector<DyadicCube>& cubes) {
    Json a = Json::array();
    for (const auto& q : cubes) a.push_back(to_json(q));
    return a;
}

Json level_points(const GoodLambdaReport& r) {
    Json pts = Json::array();
    for (const auto& p : r.points)
        pts.push_back({{"K", number(p.K)},
                       {"gamma", number(p.gamma)},
                       {"lambda", number(p.lambda)},
                       {"measure_E", number(p.measure_E)},
                       {"measure_Omega", number(p.measure_Omega)},
                       {"bound", number(p.bound)},
                       {"skipped", p.skipped},
                       {"reason", p.reason},
                       {"pass", p.pass}});
    return pts;
}

Json gr_json(const GrReport& r) {
    Json j{{"generalized", r.generalized},
           {"epsilon", number(r.epsilon_infinite ? INFINITY : r.epsilon)},
           {"threshold", number(r.threshold)},
           {"c_b", number(r.c_b)},
           {"p_of_eps", number(r.p_of_eps)},
           {"p", number(r.p)},
           {"applicable", r.applicable},
           {"theta", number(r.theta)},
           {"delta", number(r.delta)},
           {"constant", number(r.constant.C)},
           {"C_oscillation", number(r.C_oscillation)},
           {"C_reverse", number(r.C_reverse)},
           {"cubes", r.cubes},
           {"worst_oscillation_ratio", number(r.worst_oscillation_ratio)},
           {"worst_reverse_ratio", number(r.worst_reverse_ratio)}};
    if (!r.not_applicable_reason.empty()) j["not_applicable_reason"] = r.not_applicable_reason;
    if (r.worst_cube) j["worst_cube"] = to_json(*r.worst_cube);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillab: good-lambda inequalities and self-improvement on dyadic grids and finite metric spaces"};
    app.set_version_flag("--version", std::string(OSCILLAB_VERSION));
    app.require_subcommand(1);

    Common c;
    std::string cube;
    int m = -1;
    double p = 2.0, lambda = 0.0;

    // maximal
    auto* s_max = app.add_subcommand("maximal", "dyadic maximal function, or the sharp maximal function");
    bool sharp = false;
    add_common(s_max, c);
    s_max->add_option("--cube", cube, "Q0 as level:c1,c2,... (default root)");
    s_max->add_flag("--sharp", sharp, "sharp maximal function instead");
    s_max->add_option("--m", m, "polynomial degree of the oscillation family (default: means)");

    // cz
    auto* s_cz = app.add_subcommand("cz", "Calderon-Zygmund stopping cubes");
    bool generalized = false;
    add_common(s_cz, c);
    s_cz->add_option("--lambda", lambda, "threshold")->required();
    s_cz->add_option("--cube", cube, "Q0 as level:c1,c2,...");
    s_cz->add_flag("--generalized", generalized, "stop on mean |B_Q f| instead of mean |f|");
    s_cz->add_option("--m", m, "polynomial degree for --generalized");

    // jn-norm
    auto* s_jn = app.add_subcommand("jn-norm", "dyadic John-Nirenberg norm and weak-type embedding");
    add_common(s_jn, c);
    s_jn->add_option("--p", p, "exponent > 1")->check(CLI::PositiveNumber);
    s_jn->add_option("--cube", cube, "Q as level:c1,c2,...");
    s_jn->add_option("--m", m, "polynomial degree of the oscillation family");

    // dp-norm
    auto* s_dp = app.add_subcommand("dp-norm", "D_p norm of a cube functional, with the self-improvement check");
    std::string functional_path;
    add_common(s_dp, c);
    s_dp->add_option("--functional", functional_path, "functional JSON")->required()->check(CLI::ExistingFile);
    s_dp->add_option("--p", p, "exponent > 1");
    s_dp->add_option("--cube", cube, "Q0 as level:c1,c2,...");
    s_dp->add_option("--m", m, "polynomial degree of the oscillation family");

    // bmo
    auto* s_bmo = app.add_subcommand("bmo", "dyadic BMO norm");
    add_common(s_bmo, c);
    s_bmo->add_option("--cube", cube, "Q as level:c1,c2,...");

    // good-lambda
    auto* s_gl = app.add_subcommand("good-lambda", "level-set and norm inequalities for a provider");
    std::string provider = "jn";
    std::vector<double> Ks{2.0}, gammas{0.5}, lambdas{1, 2, 4, 8};
    bool K_rel = false;
    std::optional<double> eps_opt, p_opt;
    add_common(s_gl, c);
    s_gl->add_option("--provider", provider, "jn, gr or gr-osc")->check(CLI::IsMember({"jn", "gr", "gr-osc"}));
    s_gl->add_option("--K", Ks, "K values");
    s_gl->add_flag("--K-times-theta", K_rel, "read K as multiples of Theta");
    s_gl->add_option("--gamma", gammas, "gamma values in (0,1)");
    s_gl->add_option("--lambda", lambdas, "lambda as multiples of the mean of F");
    s_gl->add_option("--eps", eps_opt, "GR constant (default: the least one for the input)");
    s_gl->add_option("--p", p_opt, "also check the norm inequalities at this p");
    s_gl->add_option("--m", m, "polynomial degree of the oscillation family");

    // gr
    auto* s_gr = app.add_subcommand("gr", "Gurov-Reshetnyak constant and higher integrability");
    add_common(s_gr, c);
    s_gr->add_option("--p", p_opt, "exponent (default: midpoint of (1, p(eps)))");
    s_gr->add_option("--m", m, "polynomial degree: generalized condition");

    // metric commands
    std::string values_path;
    std::size_t center = 0;
    std::optional<double> radius;
    double eta = 1.0, tau = 1.0, rho = 1.0;
    std::vector<double> D_grid{0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    auto add_ball = [&](CLI::App* s) {
        s->add_option("--center", center, "center site of B0");
        s->add_option("--radius", radius, "radius of B0 (default: twice the largest distance from the center)");
        s->add_option("--D", D_grid, "candidate doubling dimensions");
    };

    auto* s_md = app.add_subcommand("metric-doubling", "doubling constants of a finite metric measure space");
    add_common(s_md, c);
    s_md->add_option("--D", D_grid, "candidate doubling dimensions");

    auto* s_mv = app.add_subcommand("metric-vitali", "Calderon-Zygmund ball cover");
    std::vector<double> lambda_mult{1, 2, 4};
    add_common(s_mv, c);
    add_ball(s_mv);
    s_mv->add_option("--values", values_path, "site values JSON");
    s_mv->add_option("--eta", eta, "basis dilation")->check(CLI::PositiveNumber);
    s_mv->add_option("--tau", tau, "tau >= 1");
    s_mv->add_option("--lambda", lambda_mult, "lambda as multiples of lambda0 times the mean over hat B0");

    auto* s_mj = app.add_subcommand("metric-jn", "JN norm on a ball, with the D_p chain for the exact oscillation");
    add_common(s_mj, c);
    add_ball(s_mj);
    s_mj->add_option("--values", values_path, "site values JSON");
    s_mj->add_option("--p", p, "exponent > 1");
    s_mj->add_option("--rho", rho, "rho in (0,1]");
    s_mj->add_option("--tau", tau, "tau >= 1");
    s_mj->add_option("--eta", eta, "dilation for hat B0")->check(CLI::PositiveNumber);

    auto* s_mg = app.add_subcommand("metric-gr", "weak Gurov-Reshetnyak condition on balls");
    std::optional<double> calibrated, osc_bound, rev_bound;
    add_common(s_mg, c);
    add_ball(s_mg);
    s_mg->add_option("--values", values_path, "site values JSON (the weight w)");
    s_mg->add_option("--p", p, "exponent >= 1");
    s_mg->add_option("--tau", tau, "tau >= 1");
    s_mg->add_option("--eta", eta, "dilation for hat B0")->check(CLI::PositiveNumber);
    s_mg->add_option("--calibrated", calibrated, "calibrated constant C_mu");
    s_mg->add_option("--oscillation-bound", osc_bound, "asserted bound for the oscillation ratio");
    s_mg->add_option("--reverse-bound", rev_bound, "asserted bound for the reverse Hoelder ratio");

    auto* s_gen = app.add_subcommand("gen", "synthetic inputs");
    std::string kind;
    int dim = 1, depth = 2;
    double eps0 = 0.1;
    std::size_t npts = 50;
    add_common(s_gen, c, false);
    s_gen->add_option("--kind", kind, "generator")
        ->required()
        ->check(CLI::IsMember({"random-uniform", "spike", "gr-weight", "bmo-log", "random-planar-space"}));
    s_gen->add_option("--dim", dim, "dimension")->check(CLI::Range(1, 3));
    s_gen->add_option("--depth", depth, "tree depth")->check(CLI::Range(0, 16));
    s_gen->add_option("--eps0", eps0, "amplitude for gr-weight");
    s_gen->add_option("--n", npts, "number of sites for random-planar-space");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (s_gen->parsed()) {
            Json out;
            if (kind == "random-uniform") out = to_json(random_uniform(dim, depth, c.seed));
            else if (kind == "spike") out = to_json(spike(dim, depth));
            else if (kind == "gr-weight") out = to_json(gr_weight(dim, depth, eps0, c.seed));
            else if (kind == "bmo-log") out = to_json(bmo_log(dim, depth));
            else out = to_json(random_planar_space(npts, c.seed));
            write_text(c.output, out.dump(2) + "\n");
            return 0;
        }

        if (s_md->parsed() || s_mv->parsed() || s_mj->parsed() || s_mg->parsed()) {
            const Json sj = read_json_file(c.input);
            const MetricMeasureSpace space = space_from_json(sj);
            if (center >= space.size()) throw DomainError("center out of range");
            Json params{{"D_grid", D_grid}};
            const DoublingProfile prof = doubling_constants(space, D_grid);
            Json doubling{{"c_mu", number(prof.c_mu)}, {"D", number(prof.D)}};

            if (s_md->parsed()) {
                Json table = Json::array();
                for (const auto& e : prof.table) table.push_back({{"D", number(e.D)}, {"c_mu", number(e.c_mu)}});
                return emit(c, "metric-doubling", params,
                            Json{{"c_mu", number(prof.c_mu)}, {"D", number(prof.D)}, {"table", table},
                                 {"sites", space.size()}},
                            true, "table");
            }
            const std::vector<double> v = site_values(sj, values_path);
            if (v.size() != space.size()) throw DomainError("site values do not match the space");
            const Ball B0 = default_ball(space, center, radius);
            params["B0"] = to_json(B0);
            params["tau"] = tau;
            params["eta"] = eta;

            if (s_mv->parsed()) {
                params["lambda"] = lambda_mult;
                BallBasis basis = ball_basis(space, B0, eta);
                std::vector<double> absv(v.size());
                for (std::size_t i = 0; i < v.size(); ++i) absv[i] = std::abs(v[i]);
                const double base = lambda0(tau, eta, prof) * space.average(basis.hat_sites, absv);
                Json covers = Json::array();
                bool pass = true;
                for (double mult : lambda_mult) {
                    if (mult < 1) throw DomainError("lambda multiples must be at least 1");
                    CoverReport r = vitali_cz_cover(space, basis, v, mult * base, tau, prof);
                    Json sel = Json::array();
                    for (const auto& b : r.selected) sel.push_back(to_json(b));
                    covers.push_back({{"lambda", number(r.lambda)},
                                      {"omega", r.omega},
                                      {"selected", sel},
                                      {"witnesses", r.witnesses},
                                      {"disjoint", r.disjoint},
                                      {"a", r.prop_a},
                                      {"b", r.prop_b},
                                      {"c", r.prop_c},
                                      {"d", r.prop_d},
                                      {"radius_bound", r.radius_bound},
                                      {"failure", r.failure},
                                      {"pass", r.pass()}});
                    pass = pass && r.pass();
                }
                return emit(c, "metric-vitali", params,
                            Json{{"doubling", doubling},
                                 {"lambda0", number(lambda0(tau, eta, prof))},
                                 {"members", basis.members.size()},
                                 {"covers", covers}},
                            pass, "covers");
            }

            if (s_mj->parsed()) {
                params["p"] = p;
                params["rho"] = rho;
                JnResult jn = jn_ptr_norm(space, v, p, rho, tau, B0, c.exact);
                auto a0 = exact_oscillation_functional(space, v, rho, tau);
                FpwMetricReport fr = verify_fpw_metric(space, v, a0, p, rho, tau, B0, eta);
                Json fam = Json::array();
                for (const auto& b : jn.family) fam.push_back(to_json(b));
                Json fpw{{"hypothesis_ok", fr.hypothesis_ok},
                         {"hypothesis_checked", fr.hypothesis_checked},
                         {"jn", number(fr.jn.norm)},
                         {"dp_norm", number(fr.dp.norm)},
                         {"a_hat", number(fr.dp.a_B)},
                         {"product", number(fr.product)},
                         {"chain_ok", fr.chain_ok},
                         {"exact", fr.jn.exact && fr.dp.exact},
                         {"weak_lhs", number(fr.weak_lhs)},
                         {"weak_ratio", number(fr.weak_ratio)}};
                return emit(c, "metric-jn", params,
                            Json{{"jn_norm", number(jn.norm)},
                                 {"exact", jn.exact},
                                 {"upper_bound_norm", number(std::pow(jn.upper_bound / space.measure(space.ball_set(B0)), 1 / p))},
                                 {"candidates", jn.candidates},
                                 {"family", fam},
                                 {"fpw", fpw}},
                            fr.pass());
            }

            // metric-gr; without --p use the midpoint of [1, p(eps))
            if (s_mg->count("--p") == 0) {
                const WeakGrReport probe = verify_weak_gr_metric(space, v, tau, B0, eta, 1.0, prof, calibrated);
                p = std::isfinite(probe.p_of_eps) ? std::max(1.0, (1 + probe.p_of_eps) / 2) : 2.0;
            }
            params["p"] = p;
            WeakGrReport r = verify_weak_gr_metric(space, v, tau, B0, eta, p, prof, calibrated, osc_bound, rev_bound);
            Json rep{{"doubling", doubling},
                     {"epsilon", number(r.epsilon_infinite ? INFINITY : r.epsilon)},
                     {"balls", r.balls},
                     {"constant", number(r.constant)},
                     {"calibrated", r.calibrated},
                     {"threshold", number(r.threshold)},
                     {"p_of_eps", number(r.p_of_eps)},
                     {"applicable", r.applicable},
                     {"observed_oscillation_constant", number(r.observed_oscillation_constant)},
                     {"observed_reverse_constant", number(r.observed_reverse_constant)},
                     {"empirical", !(osc_bound || rev_bound)}};
            if (!r.not_applicable_reason.empty()) rep["not_applicable_reason"] = r.not_applicable_reason;
            return emit(c, "metric-gr", params, rep, r.pass);
        }

        const GridFunction f = grid_function_from_json(read_json_file(c.input));
        Json params;
        if (m >= 0) params["m"] = m;

        if (s_max->parsed()) {
            const DyadicCube q = parse_cube(cube, f.dim());
            params["cube"] = to_json(q);
            params["sharp"] = sharp;
            GridFunction out = sharp ? sharp_maximal(f, q, family(restrict_to(f, q), m)) : dyadic_maximal(f, q);
            return emit(c, "maximal", params, Json{{"result", to_json(out)}}, true);
        }
        if (s_cz->parsed()) {
            const DyadicCube q = parse_cube(cube, f.dim());
            params["cube"] = to_json(q);
            params["lambda"] = lambda;
            params["generalized"] = generalized;
            StoppingFamily s = generalized ? generalized_cz_decomposition(f, lambda, q, family(restrict_to(f, q), m))
                                           : cz_decomposition(f, lambda, q);
            return emit(c, "cz", params, Json{{"stopping", to_json(s)}}, true);
        }
        if (s_jn->parsed()) {
            const DyadicCube q = parse_cube(cube, f.dim());
            const GridFunction fq = restrict_to(f, q);
            const OscillationFamily osc = family(fq, m);
            params["cube"] = to_json(q);
            params["p"] = p;
            EmbeddingReport r = verify_weak_embedding(fq, p, fq.root(), osc);
            return emit(c, "jn-norm", params,
                        Json{{"jn_norm", number(r.jn)},
                             {"weak_lhs", number(r.weak_lhs)},
                             {"weak_sharp", number(r.weak_sharp)},
                             {"ratio", number(r.ratio)},
                             {"constant", number(r.constant)},
                             {"sharp_chain_ok", r.sharp_chain_ok},
                             {"bound_ok", r.bound_ok}},
                        r.pass());
        }
        if (s_dp->parsed()) {
            const DyadicCube q = parse_cube(cube, f.dim());
            const GridFunction fq = restrict_to(f, q);
            const Json fj = read_json_file(functional_path);
            const CubeFunctional a = functional_from_json(fj, fq);
            params["cube"] = to_json(q);
            params["p"] = p;
            params["functional"] = fj;
            FpwReport r = verify_fpw(fq, a, p, fq.root(), family(fq, m));
            Json viol = cube_list(r.hypothesis_violations);
            return emit(c, "dp-norm", params,
                        Json{{"dp_norm", number(dp_norm(a, p, fq.root(), fq.base(), fq.depth()))},
                             {"dp_sup", number(r.dp_sup)},
                             {"constant", number(r.constant)},
                             {"hypothesis_ok", r.hypothesis_ok},
                             {"hypothesis_violations", viol},
                             {"chain_ok", r.chain_ok},
                             {"bound_ok", r.bound_ok}},
                        r.pass());
        }
        if (s_bmo->parsed()) {
            const DyadicCube q = parse_cube(cube, f.dim());
            params["cube"] = to_json(q);
            return emit(c, "bmo", params, Json{{"bmo_norm", number(bmo_dyadic_norm(f, q))}}, true);
        }
        if (s_gl->parsed()) {
            params["provider"] = provider;
            params["K"] = Ks;
            params["K_times_theta"] = K_rel;
            params["gamma"] = gammas;
            params["lambda"] = lambdas;
            if (eps_opt) params["eps"] = *eps_opt;
            std::optional<GoodLambdaSetup> setup;
            if (provider == "jn") setup.emplace(jn_provider(f, family(f, m)));
            else if (provider == "gr") setup.emplace(gr_provider(f, eps_opt));
            else setup.emplace(gr_osc_provider(f, family(f, m), eps_opt));
            const bool exact = c.exact && setup->provider.has_exact();
            HypothesisReport h = check_hypotheses(setup->F, setup->provider);
            LevelSetGrid grid{Ks, gammas, lambdas, K_rel, true};
            GoodLambdaReport r = verify_levelset_inequality(setup->F, setup->provider, grid, exact);
            Json rep{{"provider", setup->provider.name()},
                     {"theta", number(r.theta)},
                     {"delta", number(r.delta)},
                     {"exact", r.exact},
                     {"hypotheses_ok", h.pass()},
                     {"hypothesis_violations", h.violations.size()},
                     {"points", level_points(r)},
                     {"worst_ratio", number(r.worst_ratio)},
                     {"skipped", r.skipped()}};
            bool pass = h.pass() && r.pass();
            if (p_opt) {
                params["p"] = *p_opt;
                NormReport n = verify_norm_inequalities(setup->F, setup->provider, *p_opt);
                rep["norms"] = {{"constant", number(n.constant.C)},
                                {"weak_F", number(n.weak_F)},
                                {"weak_MF", number(n.weak_MF)},
                                {"weak_rhs", number(n.weak_rhs)},
                                {"strong_F", number(n.strong_F)},
                                {"strong_MF", number(n.strong_MF)},
                                {"strong_rhs", number(n.strong_rhs)},
                                {"pointwise_F_le_MF", n.pointwise_F_le_MF},
                                {"pass", n.pass()}};
                pass = pass && n.pass();
            }
            return emit(c, "good-lambda", params, rep, pass, "points");
        }
        // gr
        std::optional<OscillationFamily> osc;
        if (m >= 0) osc.emplace(family(f, m));
        double p_run = 0;
        if (p_opt) {
            p_run = *p_opt;
        } else {
            GrEpsilon e = gr_epsilon(f, osc ? &*osc : nullptr);
            double pe = e.infinite ? 1.0
                                   : gr_critical_exponent(e.epsilon, f.dim(), osc ? osc->constant_cb() : 1.0);
            p_run = std::isinf(pe) ? 2.0 : (1 + pe) / 2;
        }
        params["p"] = p_run;
        GrReport r = gr_self_improve(f, osc ? &*osc : nullptr, p_run);
        return emit(c, "gr", params, gr_json(r), r.pass);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
