#include <doctest.h>

#include "support.hpp"

#include "tbpn/smalllin.hpp"

using namespace tbpn;
using tbpn::testing::fixture;
using tbpn::testing::point;

namespace {

std::vector<Point> points(const Scenario& s, int count = 15) { return sample(s, count, 21).points; }

Eigen::MatrixXd canonical(int n) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    w.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    w.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return w;
}

}  // namespace

TEST_CASE("vertical endomorphism and lifts of vector fields") {
    const ExprMatrix S = verticalEndomorphism(2);
    const Point p = point({0.5, 0.9}, {0.2, -0.7});
    CHECK(lin::maxAbs(evaluate(ExprMatrix(S * S), p)) == 0.0);

    ExprVector d1 = zeroVector(2);
    d1(0) = Expr(1.0);
    const Eigen::MatrixXd sxc = evaluate(ExprMatrix(S * completeLift(d1)), p);
    CHECK(lin::maxAbs(sxc - evaluate(ExprMatrix(verticalLift(d1)), p)) == 0.0);

    ExprVector X = zeroVector(2);
    X(0) = Expr::q(1);
    CHECK(lin::maxAbs(evaluate(ExprMatrix(S * verticalLift(X)), p)) == 0.0);

    // X^c for X = q2 d/dq1 has vertical part u^2 d/du^1.
    const Eigen::MatrixXd xc = evaluate(ExprMatrix(completeLift(X)), p);
    CHECK(xc(0) == doctest::Approx(0.9));
    CHECK(xc(2) == doctest::Approx(-0.7));
    CHECK(xc(3) == doctest::Approx(0.0));
}

TEST_CASE("complete lift of J") {
    const ExprMatrix Jc1 = completeLiftJ(fixture("E1").J);
    CHECK(lin::maxAbs(evaluate(Jc1, point({1, 1}, {1, 1})) - Eigen::MatrixXd::Identity(4, 4)) == 0.0);

    const Scenario e3 = fixture("E3");
    const ExprMatrix Jc = completeLiftJ(e3.J);
    for (const Point& p : points(e3)) {
        const Eigen::MatrixXd m = evaluate(Jc, p);
        const double q1 = p.q[0], q2 = p.q[1], u1 = p.u[0], u2 = p.u[1];
        // u^k dJ/dq^k for J_ij = q_i q_j + delta_ij
        Eigen::Matrix2d lower;
        lower << 2 * q1 * u1, q2 * u1 + q1 * u2, q2 * u1 + q1 * u2, 2 * q2 * u2;
        CHECK(lin::maxAbs(m.bottomLeftCorner(2, 2) - lower) < 1e-14);
        CHECK(lin::maxAbs(m.topRightCorner(2, 2)) == 0.0);
        CHECK(lin::maxAbs(m.topLeftCorner(2, 2) - m.bottomRightCorner(2, 2)) == 0.0);
    }
}

TEST_CASE("Poincare-Cartan forms") {
    const Scenario e1 = fixture("E1");
    const Connection c1(e1);
    const PoincareCartan pc = poincareCartan(c1, e1.J);
    const Point p = point({0.4, 0.6}, {0.3, 0.1});
    CHECK(lin::maxAbs(evaluate(pc.omegaL.matrix(), p) - canonical(2)) == 0.0);
    CHECK(lin::maxAbs(evaluate(pc.omega1.matrix(), p) - canonical(2)) == 0.0);

    // omega_L(X^V, Y^H) = g(X, Y) on E4 for coordinate X, Y.
    const Scenario e4 = fixture("E4");
    const Connection c4(e4);
    const PoincareCartan pc4 = poincareCartan(c4, e4.J);
    for (const Point& q : points(e4)) {
        const Eigen::MatrixXd W = evaluate(pc4.omegaL.matrix(), q);
        const Eigen::MatrixXd g = evaluate(e4.metric, q);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const Eigen::VectorXd H = evaluate(ExprMatrix(c4.horizontalLift(j)), q);
                Eigen::VectorXd V = Eigen::VectorXd::Zero(6);
                V(3 + i) = 1.0;
                CHECK(V.dot(W * H) == doctest::Approx(g(i, j)));
            }
    }
}

TEST_CASE("generic solve for R") {
    const Scenario e1 = fixture("E1");
    const Connection c1(e1);
    const PoincareCartan pc1 = poincareCartan(c1, e1.J);
    const RSolver r1(pc1.omegaL, pc1.omega1);
    for (const Point& p : points(e1)) CHECK(lin::maxAbs(r1(p) - Eigen::MatrixXd::Identity(4, 4)) < 1e-14);

    const Scenario e2 = fixture("E2");
    const Connection c2(e2);
    const PoincareCartan pc2 = poincareCartan(c2, e2.J);
    const RSolver r2(pc2.omegaL, pc2.omega1);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
    expect.diagonal() << 2, 3, 2, 3;
    for (const Point& p : points(e2)) CHECK(lin::maxAbs(r2(p) - expect) < 1e-14);
}

TEST_CASE("U on E2 and E3") {
    const Scenario e2 = fixture("E2");
    const Connection c2(e2);
    for (const Point& p : points(e2)) {
        CHECK(lin::maxAbs(evaluate(computeU(c2, e2.J), p)) < 1e-15);
        CHECK(lin::maxAbs(evaluate(computeURiemannian(c2, e2.J), p)) < 1e-15);
    }

    const Scenario e3 = fixture("E3");
    const Connection c3(e3);
    const ExprMatrix U = computeURiemannian(c3, e3.J), Ug = computeU(c3, e3.J);
    auto hand = [](const Point& p) {
        Eigen::Matrix2d m;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = p.q[i] * p.u[j] - p.u[i] * p.q[j];
        return m;
    };
    const Point probe = point({1, 0}, {0, 1});
    const Eigen::MatrixXd u0 = evaluate(U, probe);
    CHECK(u0(0, 1) == doctest::Approx(1.0));
    CHECK(u0(1, 0) == doctest::Approx(-1.0));
    CHECK(u0(0, 0) == doctest::Approx(0.0));
    for (const Point& p : points(e3)) {
        CHECK(lin::maxAbs(evaluate(U, p) - hand(p)) < 1e-13);
        CHECK(lin::maxAbs(evaluate(Ug, p) - hand(p)) < 1e-13);
    }

    // Adapted-frame lower-left block of the solved R is U.
    const PoincareCartan pc = poincareCartan(c3, e3.J);
    const RSolver rs(pc.omegaL, pc.omega1);
    const Eigen::MatrixXd framed = evaluate(adaptedFrameInverse(c3), probe) * rs(probe) * evaluate(adaptedFrame(c3), probe);
    CHECK(lin::maxAbs(framed.bottomLeftCorner(2, 2) - u0) < 1e-13);
}

TEST_CASE("closed-form R and the Legendre pullback agree with the solve") {
    for (const char* name : {"E3", "E4", "E6"}) {
        const Scenario s = fixture(name);
        const Connection c(s);
        const PoincareCartan pc = poincareCartan(c, s.J);
        const RSolver rs(pc.omegaL, pc.omega1);
        const ExprMatrix leg = legendrePullbackR(c, s.J);
        const ExprMatrix U = s.mode == Mode::Riemannian ? computeURiemannian(c, s.J) : computeU(c, s.J);
        const ExprMatrix closed = closedFormR(c, s.J, U);
        for (const Point& p : points(s, 50)) {
            const Eigen::MatrixXd R = rs(p);
            CHECK(lin::maxScaledDiff(R, evaluate(leg, p)) < 1e-9);
            if (s.mode == Mode::Riemannian) CHECK(lin::maxScaledDiff(R, evaluate(closed, p)) < 1e-9);
        }
    }
}

TEST_CASE("g-transpose") {
    const Scenario e4 = fixture("E4");
    const Connection c(e4);
    ExprMatrix J = testing::parseMatrix({{"1", "q2", "0"}, {"0", "2", "q1"}, {"q3", "0", "1"}}, 3);
    const ExprMatrix Jb = transposeJ(c, J);
    for (const Point& p : points(e4)) {
        const Eigen::MatrixXd g = evaluate(e4.metric, p), j = evaluate(J, p), jb = evaluate(Jb, p);
        CHECK(lin::maxAbs(g * j - (g * jb).transpose()) < 1e-12);
    }
}

TEST_CASE("an asymmetric J breaks RS = SR") {
    const ExprMatrix g = testing::parseMatrix({{"1", "0"}, {"0", "1"}}, 2);
    const ExprMatrix J = testing::parseMatrix({{"0", "1"}, {"0", "0"}}, 2);
    const Scenario s = makeRiemannian("asym", g, J);
    const Connection c(s);
    const PoincareCartan pc = poincareCartan(c, J);
    const RSolver rs(pc.omegaL, pc.omega1);
    const Eigen::MatrixXd S = evaluate(verticalEndomorphism(2), probePoint(2));
    const Eigen::MatrixXd R = rs(probePoint(2));
    CHECK(lin::maxAbs(R * S - S * R) > 0.5);
}
