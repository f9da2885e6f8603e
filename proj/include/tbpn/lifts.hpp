#pragma once

// Objects lifted to TQ (coordinate basis ordered (q, u)): the vertical
// endomorphism, complete and vertical lifts, the Poincare-Cartan forms, the
// recursion tensor R, and the Legendre pullback of the cotangent lift.

#include "tbpn/connection.hpp"

namespace tbpn {

/// S = d/du^i (x) dq^i, as a 2n x 2n matrix.
ExprMatrix verticalEndomorphism(int n);
/// X^c = X^i d/dq^i + u^j (dX^i/dq^j) d/du^i for X on Q.
ExprVector completeLift(const ExprVector& X);
/// X^V = X^i d/du^i.
ExprVector verticalLift(const ExprVector& X);
/// X^H = X^i H_i.
ExprVector horizontalLift(const Connection& c, const ExprVector& X);
/// [[J, 0], [u^k dJ/dq^k, J]].
ExprMatrix completeLiftJ(const ExprMatrix& J);

/// theta_L = (dL/du^i) dq^i, omega_L = d theta_L, omega_1 = d((dL/du^m) J^m_i dq^i).
struct PoincareCartan {
    Form theta;
    Form thetaJ;
    Form omegaL;
    Form omega1;
};
PoincareCartan poincareCartan(const Connection& c, const ExprMatrix& J);

/// J-bar = g^-1 J^T g, the g-transpose.
ExprMatrix transposeJ(const Connection& c, const ExprMatrix& J);
/// U from g(UX, Y) = d^h(J theta_L)(X, Y); valid for any regular L.
ExprMatrix computeU(const Connection& c, const ExprMatrix& J);
/// U^i_j = g^ik (J^m_{k|j} - J^m_{j|k}) g_ml u^l; riemannian mode.
ExprMatrix computeURiemannian(const Connection& c, const ExprMatrix& J);

/// Columns are the adapted frame (H_1..H_n, V_1..V_n) in coordinates.
ExprMatrix adaptedFrame(const Connection& c);
ExprMatrix adaptedFrameInverse(const Connection& c);
/// [[J, 0], [U + J-bar Gamma - Gamma J, J-bar]].
ExprMatrix closedFormR(const Connection& c, const ExprMatrix& J, const ExprMatrix& U);

/// Cotangent lift J-tilde in the (q, p) basis at momenta p.
ExprMatrix jTilde(const ExprMatrix& J, const ExprVector& p, DiffCache& d);
/// Jacobian of (q, u) -> (q, dL/du).
ExprMatrix legendreJacobian(const Connection& c);
/// D^-1 J-tilde D with p = dL/du; the inverse uses the symbolic g^-1.
ExprMatrix legendrePullbackR(const Connection& c, const ExprMatrix& J);

/// Pointwise R = Omega^-1 Omega_1 from i_{R xi} omega_L = i_xi omega_1.
class RSolver {
public:
    RSolver(const Form& omegaL, const Form& omega1);
    [[nodiscard]] Eigen::MatrixXd operator()(const Point& p) const;
    [[nodiscard]] Eigen::MatrixXd omegaL(const Point& p) const { return omega_(p); }
    [[nodiscard]] Eigen::MatrixXd omega1(const Point& p) const { return omega1_(p); }

private:
    CompiledMatrix omega_;
    CompiledMatrix omega1_;
};

}  // namespace tbpn
