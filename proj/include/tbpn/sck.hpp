#pragma once

// Special conformal Killing tensors on a riemannian base: the defining
// condition, what follows from it for U, Phi and R, the cofactor Killing
// tensor, and the curvature identities of a parallel g-symmetric J.

#include "tbpn/checks.hpp"

namespace tbpn {

/// X_f = -g^-1 df, so that g(X_f, Y) = -Y(f).
ExprVector xf(const Connection& c, const Expr& f);
/// f = tr J up to a constant.
Expr recoverF(const ExprMatrix& J);

/// J_{lj|k} = (g_lk f_j + g_jk f_l) / 2 over all (l, j, k).
Identity sckCoordinate(const Connection& c, const ExprMatrix& J, const Expr& f);
/// nabla J = (T (x) df - X_f (x) theta_L) / 2.
Identity sckIntrinsic(const Connection& c, const ExprMatrix& J, const Expr& f);

/// Cyclic sum of D^H A~ with A~ = g adj(J); zero when adj(J) is Killing.
Identity cofactorKilling(const Connection& c, const ExprMatrix& J);
/// d(det J) = (adj J)^T df componentwise.
Identity detTraceLaw(const Connection& c, const ExprMatrix& J, const Expr& f);

/// Defining condition in both forms plus the consequences for U, Phi, R,
/// L_Gamma R and the energy gauging; not-applicable unless J is g-symmetric
/// and the coordinate condition holds.
std::vector<CheckResult> sckConditionSuite(Workspace& ws);
/// Trace law, N_J = 0, the cofactor Killing conditions.
std::vector<CheckResult> cofactorSuite(Workspace& ws);
/// Phi J = J Phi and the two Riemann identities of a parallel g-symmetric J.
std::vector<CheckResult> parallelJSuite(Workspace& ws);

}  // namespace tbpn
