#include <doctest.h>

#include "support.hpp"

#include <cmath>

using namespace tbpn;
using tbpn::testing::fixture;
using tbpn::testing::point;

TEST_CASE("all bundled fixtures load") {
    for (const char* name : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
        const Scenario s = fixture(name);
        CHECK(s.n >= 2);
        CHECK(s.J.rows() == s.n);
    }
}

TEST_CASE("riemannian mode synthesizes the kinetic Lagrangian") {
    const Scenario s = fixture("E1");
    const Point p = point({0.5, 0.7}, {0.3, -1.1});
    CHECK(eval(s.lagrangian, p) == doctest::Approx((0.09 + 1.21) / 2));
    CHECK_FALSE(s.f.has_value());
}

TEST_CASE("E3 loads with a symmetric J and the declared f") {
    const Scenario s = fixture("E3");
    const Point p = point({0.4, 1.1}, {0, 0});
    CHECK(eval(s.J(0, 1), p) == doctest::Approx(eval(s.J(1, 0), p)));
    CHECK(eval(s.J(0, 0), p) == doctest::Approx(0.4 * 0.4 + 1));
    REQUIRE(s.f.has_value());
    CHECK(eval(*s.f, p) == doctest::Approx(0.16 + 1.21));
}

TEST_CASE("schema violations are reported with a path") {
    const std::string base = R"({"name":"x","dim":2,"mode":"riemannian","metric":[["1","0"],["0","1"]],)";
    CHECK_THROWS_WITH_AS(loadScenario(base + R"("J":[["1","0","0"],["0","1","0"]]})"),
                         doctest::Contains("dimension mismatch"), ScenarioError);
    CHECK_THROWS_WITH_AS(loadScenario(base + R"("J":[["1","0"],["0","q1 +"]]})"), doctest::Contains("$.J"),
                         ScenarioError);
    CHECK_THROWS_WITH_AS(loadScenario(base + R"("J":[["u1","0"],["0","1"]]})"), doctest::Contains("q only"),
                         ScenarioError);
    CHECK_THROWS_AS(loadScenario(base + "}"), ScenarioError);
    CHECK_THROWS_AS(loadScenario(R"({"name":"x","dim":2,"mode":"other","J":[["1","0"],["0","1"]]})"), ScenarioError);
    CHECK_THROWS_AS(loadScenario("not json"), ScenarioError);
    CHECK_THROWS_AS(loadScenarioFile("/nonexistent/file.json"), ScenarioError);
}

TEST_CASE("hessian metric") {
    const Scenario e6 = fixture("E6");
    const TensorField g = hessianMetric(e6);
    const Point p = point({0.5, 0.5}, {0.7, -0.2});
    CHECK(eval(g({0, 0}), p) == doctest::Approx(1 + 3 * 0.49));
    CHECK(eval(g({0, 1}), p) == doctest::Approx(0.0));
    CHECK(eval(g({1, 1}), p) == doctest::Approx(1.0));

    const Scenario e4 = fixture("E4");
    const TensorField g4 = hessianMetric(e4);
    for (const Point& q : sample(e4).points)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(scaledDiff(eval(g4({i, j}), q), eval(e4.metric(i, j), q)) <= 1e-10);
                CHECK(std::abs(eval(g4({i, j}), q) - eval(g4({j, i}), q)) <= 1e-12);
            }
}

TEST_CASE("sampling is reproducible and respects the boxes") {
    const Scenario s = fixture("E1");
    const SampleSet a = sample(s, 10, 42), b = sample(s, 10, 42), c = sample(s, 10, 43);
    REQUIRE(a.points.size() == 10);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].q == b.points[i].q);
        CHECK(a.points[i].u == b.points[i].u);
        for (int k = 0; k < 2; ++k) {
            CHECK(a.points[i].q[k] >= 0.3);
            CHECK(a.points[i].q[k] <= 1.2);
            CHECK(std::abs(a.points[i].u[k]) <= 1.0);
        }
    }
    CHECK(a.points[0].q != c.points[0].q);
}

TEST_CASE("splitmix64 reference stream") {
    SplitMix64 r(0);
    CHECK(r.next() == 0xe220a8397b1dcdafULL);
    SplitMix64 s(1);
    const double x = s.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
}

TEST_CASE("points near a metric singularity are rejected") {
    Scenario s = fixture("E4");
    s.sampling.qBox = {{-0.001, 0.001}, {0.3, 1.2}, {0.3, 1.2}};
    CHECK_THROWS_AS(sample(s, 10, 1), SamplingExhausted);
    s.sampling.qBox = {{-0.5, 0.5}, {0.3, 1.2}, {0.3, 1.2}};
    for (const Point& p : sample(s, 40, 1).points) CHECK(std::pow(std::sin(p.q[0]), 2) > 1e-6);
}

TEST_CASE("probe point") {
    const Point p = probePoint(2);
    CHECK(p.q[0] == 0.7);
    CHECK(p.q[1] == 0.9);
    CHECK(p.u[0] == 0.4);
    CHECK(p.u[1] == -0.6);
}

TEST_CASE("code-built scenarios") {
    const ExprMatrix g = testing::parseMatrix({{"1", "0"}, {"0", "1"}}, 2);
    const ExprMatrix J = testing::parseMatrix({{"0", "1"}, {"0", "0"}}, 2);
    const Scenario s = makeRiemannian("asym", g, J);
    CHECK(s.mode == Mode::Riemannian);
    CHECK(eval(s.lagrangian, point({0.5, 0.5}, {1, 1})) == doctest::Approx(1.0));
    const Scenario l = makeLagrangian("free", 2, parse("u1^2/2 + u2^2/2", 2), J);
    CHECK(l.mode == Mode::Lagrangian);
}
