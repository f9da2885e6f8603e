#include <doctest.h>

#include "support.hpp"

#include "tbpn/smalllin.hpp"

using namespace tbpn;
using tbpn::testing::parseMatrix;
using tbpn::testing::point;

namespace {

const Chart base2{2, Space::Base};

std::vector<Point> somePoints(int n, int count) {
    SplitMix64 rng(17);
    std::vector<Point> out;
    for (int k = 0; k < count; ++k) {
        Point p{Eigen::VectorXd(n), Eigen::VectorXd(n)};
        for (int i = 0; i < n; ++i) p.q[i] = 0.3 + 0.9 * rng.uniform();
        for (int i = 0; i < n; ++i) p.u[i] = -1.0 + 2.0 * rng.uniform();
        out.push_back(p);
    }
    return out;
}

double maxAbsOver(const std::vector<Expr>& es, const std::vector<Point>& pts) {
    double worst = 0;
    for (const Point& p : pts)
        for (const Expr& e : es) worst = std::max(worst, std::abs(eval(e, p)));
    return worst;
}

}  // namespace

TEST_CASE("Nijenhuis torsion examples") {
    DiffCache dc;
    const auto pts = somePoints(2, 10);
    CHECK(maxAbsOver(nijenhuis(base2, identityMatrix(2), dc).comps, pts) == 0.0);

    const ExprMatrix e5 = parseMatrix({{"q2", "0"}, {"0", "0"}}, 2);
    const TensorField N = nijenhuis(base2, e5, dc);
    for (const Point& p : pts) {
        CHECK(eval(N({0, 0, 1}), p) == doctest::Approx(p.q[1]));
        CHECK(eval(N({0, 1, 0}), p) == doctest::Approx(-p.q[1]));
        CHECK(eval(N({1, 0, 1}), p) == doctest::Approx(0.0));
    }

    const ExprMatrix e3 = parseMatrix({{"q1^2 + 1", "q1*q2"}, {"q1*q2", "q2^2 + 1"}}, 2);
    CHECK(maxAbsOver(nijenhuis(base2, e3, dc).comps, pts) < 1e-13);
}

TEST_CASE("Nijenhuis torsion agrees with the bracket definition") {
    // N(X,Y) = [AX,AY] - A[AX,Y] - A[X,AY] + A^2[X,Y] on coordinate fields,
    // assembled from Lie brackets of vector fields.
    DiffCache dc;
    const ExprMatrix A = parseMatrix({{"q1*q2", "q2^2"}, {"sin(q1)", "q1 + q2"}}, 2);
    const TensorField N = nijenhuis(base2, A, dc);
    const auto pts = somePoints(2, 10);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            ExprVector X = zeroVector(2), Y = zeroVector(2);
            X(x) = Expr(1.0);
            Y(y) = Expr(1.0);
            const ExprVector AX = A * X, AY = A * Y;
            const ExprVector b = bracket(base2, AX, AY, dc) - A * bracket(base2, AX, Y, dc) -
                                 A * bracket(base2, X, AY, dc);
            for (const Point& p : pts)
                for (int k = 0; k < 2; ++k) CHECK(eval(N({k, x, y}), p) == doctest::Approx(eval(b(k), p)));
        }
}

TEST_CASE("Froelicher-Nijenhuis bracket of A with itself is twice the torsion") {
    DiffCache dc;
    const ExprMatrix A = parseMatrix({{"q1*q2", "q2^2"}, {"sin(q1)", "exp(q1)"}}, 2);
    const TensorField F = fnBracket(base2, A, A, dc), N = nijenhuis(base2, A, dc);
    for (const Point& p : somePoints(2, 10))
        for (std::size_t k = 0; k < F.comps.size(); ++k)
            CHECK(eval(F.comps[k], p) == doctest::Approx(2 * eval(N.comps[k], p)));
}

TEST_CASE("Haantjes tensor") {
    DiffCache dc;
    const auto pts = somePoints(2, 10);
    CHECK(maxAbsOver(haantjes(base2, identityMatrix(2), dc).comps, pts) == 0.0);
    // In dimension 2 the Haantjes tensor vanishes identically by Cayley-Hamilton.
    const ExprMatrix e5 = parseMatrix({{"q2", "0"}, {"0", "0"}}, 2);
    CHECK(maxAbsOver(haantjes(base2, e5, dc).comps, pts) < 1e-14);
    const ExprMatrix A = parseMatrix({{"q1*q2", "q2^2"}, {"sin(q1)", "exp(q1)"}}, 2);
    CHECK(maxAbsOver(haantjes(base2, A, dc).comps, pts) < 1e-12);

    // In dimension 3 it need not: compare both assembly routes.
    const Chart base3{3, Space::Base};
    const ExprMatrix B = parseMatrix({{"q2", "q3", "0"}, {"0", "q1", "1"}, {"q1*q3", "0", "q2^2"}}, 3);
    const TensorField H = haantjes(base3, B, dc);
    const TensorField H2 = haantjesFromTorsion(B, nijenhuis(base3, B, dc));
    const auto pts3 = somePoints(3, 5);
    CHECK(maxAbsOver(H.comps, pts3) > 1e-3);
    for (const Point& p : pts3)
        for (std::size_t k = 0; k < H.comps.size(); ++k)
            CHECK(eval(H.comps[k], p) == doctest::Approx(eval(H2.comps[k], p)));
}

TEST_CASE("Lie derivative of a (1,1) tensor") {
    DiffCache dc;
    ExprVector V(2);
    V << parse("q1*q2", 2), parse("sin(q2)", 2);
    const ExprMatrix id = identityMatrix(2);
    CHECK(maxAbsOver(flatten(lieDerivative(base2, V, id, dc)), somePoints(2, 5)) == 0.0);

    // (L_V A)(X) = [V, AX] - A[V, X] for coordinate X.
    const ExprMatrix A = parseMatrix({{"q1*q2", "q2^2"}, {"sin(q1)", "exp(q1)"}}, 2);
    const ExprMatrix L = lieDerivative(base2, V, A, dc);
    for (int x = 0; x < 2; ++x) {
        ExprVector X = zeroVector(2);
        X(x) = Expr(1.0);
        const ExprVector rhs = bracket(base2, V, ExprVector(A * X), dc) - A * bracket(base2, V, X, dc);
        for (const Point& p : somePoints(2, 5))
            for (int k = 0; k < 2; ++k) CHECK(eval(L(k, x), p) == doctest::Approx(eval(rhs(k), p)));
    }
}

TEST_CASE("exterior derivative") {
    DiffCache dc;
    const Chart total{2, Space::Total};
    const Expr L = parse("(u1^2 + u2^2)/2 + u1^4/4", 2);
    const Form dL = extDeriv(total, L, dc);
    const auto pts = somePoints(2, 10);
    CHECK(maxAbsOver(extDeriv(total, dL, dc).components(), pts) == 0.0);

    const Expr F = parse("sin(q1)*u2^2 + q2*exp(u1)", 2);
    CHECK(maxAbsOver(extDeriv(total, extDeriv(total, extDeriv(total, F, dc), dc), dc).components(), pts) < 1e-13);

    // d(u_i dq^i) = du^i ^ dq^i: matrix [[0, -I], [I, 0]] in the (q, u) basis.
    ExprVector theta = zeroVector(4);
    theta(0) = Expr::u(0);
    theta(1) = Expr::u(1);
    const ExprMatrix W = extDeriv(total, Form::oneForm(theta), dc).matrix();
    const Eigen::MatrixXd w = evaluate(W, pts[0]);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected.topRightCorner(2, 2) = -Eigen::MatrixXd::Identity(2, 2);
    expected.bottomLeftCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
    CHECK(lin::maxAbs(w - expected) == 0.0);
}

TEST_CASE("forms: components, wedge, contraction") {
    DiffCache dc;
    const Chart total{2, Space::Total};
    ExprVector a(4), b(4);
    a << parse("q1", 2), Expr(0.0), Expr(1.0), parse("u2", 2);
    b << Expr(2.0), parse("q2", 2), Expr(0.0), Expr(1.0);
    const Form w = wedge(Form::oneForm(a), Form::oneForm(b));
    const Point p = point({0.5, 0.8}, {0.1, -0.3});
    const Eigen::VectorXd av = evaluate(ExprMatrix(a), p), bv = evaluate(ExprMatrix(b), p);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double expect = av(i) * bv(j) - av(j) * bv(i);
            CHECK(eval(w.get({i, j}), p) == doctest::Approx(expect));
        }

    const Expr F = parse("q1*u2 + sin(q2)", 2);
    ExprVector X(4);
    X << Expr(1.0), parse("q1", 2), parse("u1", 2), Expr(-2.0);
    const Form dF = extDeriv(total, F, dc);
    const Form c = contract(X, dF);
    CHECK(c.degree() == 0);
    CHECK(eval(c.components()[0], p) == doctest::Approx(eval(directional(total, X, F, dc), p)));

    // d_A on functions is dF o A.
    const ExprMatrix A = parseMatrix({{"1", "q1", "0", "0"}, {"0", "2", "0", "u1"}, {"0", "0", "1", "0"}, {"q2", "0", "0", "3"}}, 2);
    const Form dAF = derivationOf(total, A, F, dc);
    const ExprVector expect = A.transpose() * dF.vector();
    for (int k = 0; k < 4; ++k) CHECK(eval(dAF.vector()(k), p) == doctest::Approx(eval(expect(k), p)));
}

TEST_CASE("interior product of a (1,1) tensor into a 2-form") {
    const Chart total{2, Space::Total};
    ExprMatrix W = zeroMatrix(4, 4);
    W(0, 2) = Expr(-1.0);
    W(2, 0) = Expr(1.0);
    W(1, 3) = parse("-q1", 2);
    W(3, 1) = parse("q1", 2);
    const Form w = Form::twoForm(W);
    const ExprMatrix A = parseMatrix({{"1", "q1", "0", "0"}, {"0", "2", "0", "u1"}, {"0", "0", "1", "0"}, {"q2", "0", "0", "3"}}, 2);
    const Form iw = interior(A, w);
    const Point p = point({0.5, 0.8}, {0.1, -0.3});
    const Eigen::MatrixXd Wn = evaluate(W, p), An = evaluate(A, p);
    const Eigen::MatrixXd expect = An.transpose() * Wn + Wn * An;
    CHECK(lin::maxAbs(evaluate(iw.matrix(), p) - expect) < 1e-14);
    (void)total;
}
