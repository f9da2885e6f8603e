#pragma once

// The Euler-Lagrange second-order field of a regular Lagrangian and the
// calculus along the tangent-bundle projection built from it: nonlinear
// connection, Berwald coefficients, curvature, Jacobi endomorphism and the
// covariant derivatives nabla, D^H, D^V.
//
// Tensors "along tau" are TensorFields with Space::Along: base indices,
// components depending on (q, u).

#include "tbpn/scenario.hpp"
#include "tbpn/tensor_calc.hpp"

#include <memory>

namespace tbpn {

class SingularHessianError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Connection {
public:
    explicit Connection(const Scenario& s);

    int n = 0;
    Mode mode = Mode::Riemannian;
    Expr L;
    /// Energy E = u^i dL/du^i - L.
    Expr E;
    ExprMatrix g;
    ExprMatrix gInv;
    Expr detG;
    /// f^i solving g_ij f^j = dL/dq^i - (d^2 L / du^i dq^k) u^k.
    ExprVector forces;
    /// Gamma^i_j = -1/2 df^i/du^j.
    ExprMatrix conn;
    /// berwald(i, j, k) = dGamma^i_j / du^k.
    TensorField berwald;
    /// Levi-Civita symbols (i, j, k); riemannian mode only.
    TensorField christoffel;
    /// curvature(m, i, j): vertical part of [H_i, H_j], H_j(Gamma^m_i) - H_i(Gamma^m_j).
    TensorField curvature;
    /// Jacobi endomorphism, phi(i, j) = Phi^i_j.
    ExprMatrix phi;
    /// Horizontal part of [Gamma, H_j]; nabla X^i = Gamma(X^i) + nablaCoeff(i,k) X^k.
    ExprMatrix nablaCoeff;
    /// riemann(i, l, j, k) = R^i_{ljk}; riemannian mode only.
    TensorField riemann;

    /// The second-order field (u, f) on TQ.
    [[nodiscard]] ExprVector spray() const;
    /// H_k on TQ: (e_k, -Gamma^.{}_k).
    [[nodiscard]] ExprVector horizontalLift(int k) const;
    /// The canonical field T = u^i d/dq^i along tau.
    [[nodiscard]] ExprVector T() const;

    Expr d(const Expr& e, Var v) const { return (*cache_)(e, v); }
    /// H_k(F) = dF/dq^k - Gamma^m_k dF/du^m.
    Expr horizontal(int k, const Expr& F) const;
    /// Gamma(F) = u^i dF/dq^i + f^i dF/du^i.
    Expr gammaOf(const Expr& F) const;

    /// Dynamical covariant derivative of a tensor along tau.
    [[nodiscard]] TensorField nabla(const TensorField& t) const;
    /// D^H and D^V; the direction index is appended as the last covariant slot.
    [[nodiscard]] TensorField dh(const TensorField& t) const;
    [[nodiscard]] TensorField dv(const TensorField& t) const;

    DiffCache& cache() const { return *cache_; }
    Chart totalChart() const { return Chart{n, Space::Total}; }

private:
    std::shared_ptr<DiffCache> cache_;
};

/// Contracts the last covariant slot of t with a vector field X along tau.
TensorField contractLast(const TensorField& t, const ExprVector& X);

}  // namespace tbpn
