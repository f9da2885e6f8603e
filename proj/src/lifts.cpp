#include "tbpn/lifts.hpp"

#include "tbpn/smalllin.hpp"

namespace tbpn {

ExprMatrix verticalEndomorphism(int n) {
    ExprMatrix S = zeroMatrix(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) S(n + i, i) = Expr(1.0);
    return S;
}

ExprVector completeLift(const ExprVector& X) {
    const int n = static_cast<int>(X.size());
    ExprVector out(2 * n);
    for (int i = 0; i < n; ++i) {
        out(i) = X(i);
        Expr acc(0.0);
        for (int j = 0; j < n; ++j) acc = acc + Expr::u(j) * diff(X(i), Var::q(j));
        out(n + i) = acc;
    }
    return out;
}

ExprVector verticalLift(const ExprVector& X) {
    const int n = static_cast<int>(X.size());
    ExprVector out = zeroVector(2 * n);
    for (int i = 0; i < n; ++i) out(n + i) = X(i);
    return out;
}

ExprVector horizontalLift(const Connection& c, const ExprVector& X) {
    ExprVector out(2 * c.n);
    for (int i = 0; i < c.n; ++i) {
        out(i) = X(i);
        Expr acc(0.0);
        for (int k = 0; k < c.n; ++k) acc = acc - c.conn(i, k) * X(k);
        out(c.n + i) = acc;
    }
    return out;
}

ExprMatrix completeLiftJ(const ExprMatrix& J) {
    const int n = static_cast<int>(J.rows());
    ExprMatrix out = zeroMatrix(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out(i, j) = J(i, j);
            out(n + i, n + j) = J(i, j);
            Expr acc(0.0);
            for (int k = 0; k < n; ++k) acc = acc + Expr::u(k) * diff(J(i, j), Var::q(k));
            out(n + i, j) = acc;
        }
    return out;
}

PoincareCartan poincareCartan(const Connection& c, const ExprMatrix& J) {
    const int n = c.n;
    ExprVector theta = zeroVector(2 * n);
    ExprVector thetaJ = zeroVector(2 * n);
    for (int i = 0; i < n; ++i) theta(i) = c.d(c.L, Var::u(i));
    for (int i = 0; i < n; ++i) {
        Expr acc(0.0);
        for (int m = 0; m < n; ++m) acc = acc + theta(m) * J(m, i);
        thetaJ(i) = acc;
    }
    PoincareCartan pc;
    pc.theta = Form::oneForm(theta);
    pc.thetaJ = Form::oneForm(thetaJ);
    const Chart chart = c.totalChart();
    pc.omegaL = extDeriv(chart, pc.theta, c.cache());
    pc.omega1 = extDeriv(chart, pc.thetaJ, c.cache());
    return pc;
}

ExprMatrix transposeJ(const Connection& c, const ExprMatrix& J) {
    return c.gInv * J.transpose() * c.g;
}

ExprMatrix computeU(const Connection& c, const ExprMatrix& J) {
    const int n = c.n;
    ExprVector beta(n);
    for (int j = 0; j < n; ++j) {
        Expr acc(0.0);
        for (int m = 0; m < n; ++m) acc = acc + c.d(c.L, Var::u(m)) * J(m, j);
        beta(j) = acc;
    }
    // dhb(j, k) = d^h(J theta)(d_k, d_j) = H_k beta_j - H_j beta_k
    ExprMatrix dhb(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) dhb(j, k) = c.horizontal(k, beta(j)) - c.horizontal(j, beta(k));
    return c.gInv * dhb;
}

ExprMatrix computeURiemannian(const Connection& c, const ExprMatrix& J) {
    const int n = c.n;
    const TensorField dJ = c.dh(TensorField::fromMatrix(Space::Along, J, 1, 1));  // (m, k, j) = J^m_{k|j}
    const ExprVector gu = c.g * c.T();
    ExprMatrix inner(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            Expr acc(0.0);
            for (int m = 0; m < n; ++m) acc = acc + (dJ({m, k, j}) - dJ({m, j, k})) * gu(m);
            inner(k, j) = acc;
        }
    return c.gInv * inner;
}

ExprMatrix adaptedFrame(const Connection& c) {
    const int n = c.n;
    ExprMatrix P = identityMatrix(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(n + i, j) = -c.conn(i, j);
    return P;
}

ExprMatrix adaptedFrameInverse(const Connection& c) {
    const int n = c.n;
    ExprMatrix P = identityMatrix(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(n + i, j) = c.conn(i, j);
    return P;
}

ExprMatrix closedFormR(const Connection& c, const ExprMatrix& J, const ExprMatrix& U) {
    const int n = c.n;
    const ExprMatrix Jbar = transposeJ(c, J);
    const ExprMatrix lower = U + Jbar * c.conn - c.conn * J;
    ExprMatrix R = zeroMatrix(2 * n, 2 * n);
    R.topLeftCorner(n, n) = J;
    R.bottomLeftCorner(n, n) = lower;
    R.bottomRightCorner(n, n) = Jbar;
    return R;
}

ExprMatrix jTilde(const ExprMatrix& J, const ExprVector& p, DiffCache& d) {
    const int n = static_cast<int>(J.rows());
    ExprMatrix out = zeroMatrix(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out(i, j) = J(i, j);
            out(n + i, n + j) = J(j, i);
            Expr acc(0.0);
            for (int k = 0; k < n; ++k) acc = acc + p(k) * (d(J(k, i), Var::q(j)) - d(J(k, j), Var::q(i)));
            out(n + i, j) = acc;
        }
    return out;
}

ExprMatrix legendreJacobian(const Connection& c) {
    const int n = c.n;
    ExprMatrix D = identityMatrix(2 * n);
    for (int i = 0; i < n; ++i) {
        const Expr pi = c.d(c.L, Var::u(i));
        for (int j = 0; j < n; ++j) {
            D(n + i, j) = c.d(pi, Var::q(j));
            D(n + i, n + j) = c.d(pi, Var::u(j));
        }
    }
    return D;
}

ExprMatrix legendrePullbackR(const Connection& c, const ExprMatrix& J) {
    const int n = c.n;
    ExprVector p(n);
    for (int i = 0; i < n; ++i) p(i) = c.d(c.L, Var::u(i));
    const ExprMatrix D = legendreJacobian(c);
    ExprMatrix Dinv = identityMatrix(2 * n);
    const ExprMatrix Luq = D.bottomLeftCorner(n, n);
    Dinv.bottomLeftCorner(n, n) = -(c.gInv * Luq);
    Dinv.bottomRightCorner(n, n) = c.gInv;
    return Dinv * jTilde(J, p, c.cache()) * D;
}

RSolver::RSolver(const Form& omegaL, const Form& omega1) : omega_(omegaL.matrix()), omega1_(omega1.matrix()) {}

Eigen::MatrixXd RSolver::operator()(const Point& p) const { return lin::solve(omega_(p), omega1_(p)); }

}  // namespace tbpn
