#include <doctest.h>

#include <cmath>

#include "oscillab/goodlambda.hpp"
#include "oscillab/io.hpp"

using namespace oscillab;

TEST_CASE("grid function round trip") {
    auto f = random_uniform(2, 2, 7, -1, 1);
    auto g = grid_function_from_json(Json::parse(to_json(f).dump()));
    CHECK(g.dim() == 2);
    CHECK(g.depth() == 2);
    for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(g.values()[k] == f.values()[k]);
    CHECK_THROWS_AS(grid_function_from_json(Json::parse(R"({"dim":1,"depth":2,"values":[1,2]})")), std::invalid_argument);
    CHECK_THROWS_AS(grid_function_from_json(Json::parse(R"({"dim":1})")), DomainError);
}

TEST_CASE("numbers") {
    CHECK(number(INFINITY) == "inf");
    CHECK(std::isinf(number_from(Json("inf"))));
    CHECK(number_from(Json(2.5)) == 2.5);
    CHECK_THROWS(number_from(Json("x")));
}

TEST_CASE("space round trip") {
    auto X = random_planar_space(6, 3);
    auto Y = space_from_json(Json::parse(to_json(X).dump()));
    REQUIRE(Y.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(Y.weight(i) == X.weight(i));
        for (std::size_t k = 0; k < 6; ++k) CHECK(Y.d(i, k) == X.d(i, k));
    }
    auto Z = space_from_json(Json::parse(R"({"dist":[[0,1],[1,0]]})"));
    CHECK(Z.weight(1) == 1.0);
    CHECK_THROWS(space_from_json(Json::parse(R"({"dist":[[0,1],[2,0]]})")));
}

TEST_CASE("generators") {
    auto s = spike(1, 2);
    CHECK(std::vector<double>(s.values().begin(), s.values().end()) == std::vector<double>{0, 0, 0, 4});
    CHECK(random_uniform(1, 3, 5).values()[3] == random_uniform(1, 3, 5).values()[3]);
    for (int n : {1, 2})
        for (int k = 4; k <= 10; ++k) {
            double e0 = std::ldexp(1.0, -k);
            auto w = gr_weight(n, n == 1 ? 6 : 3, e0, 1);
            CHECK(gr_epsilon(w).epsilon <= e0);
        }
    CHECK_THROWS(gr_weight(1, 2, 1.5, 0));
    auto X = random_planar_space(30, 1);
    for (std::size_t i = 0; i < X.size(); ++i) CHECK((X.weight(i) >= 0.5 && X.weight(i) < 1.5));
    auto b = bmo_log(1, 2);
    CHECK(b.values()[0] == doctest::Approx(-std::log(0.125)));
}

TEST_CASE("csv") {
    Json r{{"a", 1}, {"b", {{"c", "x,y"}}}};
    CHECK(json_to_csv(r) == "key,value\na,1\nb.c,\"x,y\"\n");
    Json t{{"rows", {{{"k", 1}}, {{"k", 2}, {"m", 3}}}}};
    CHECK(json_to_csv(t, "rows") == "k,m\n1,\n2,3\n");
}
