#pragma once

// Eigen matrices of expressions, and the glue to evaluate them at points.

#include "tbpn/expr.hpp"

#include <Eigen/Dense>

namespace tbpn {

using ExprMatrix = Eigen::Matrix<Expr, Eigen::Dynamic, Eigen::Dynamic>;
using ExprVector = Eigen::Matrix<Expr, Eigen::Dynamic, 1>;

ExprMatrix zeroMatrix(int rows, int cols);
ExprMatrix identityMatrix(int n);
ExprVector zeroVector(int n);

/// Cofactor expansion; intended for n <= 4.
Expr determinant(const ExprMatrix& m);
/// Classical adjoint, so that m * adjugate(m) = det(m) I.
ExprMatrix adjugate(const ExprMatrix& m);
/// adjugate(m) / det(m); det(m) is evaluated at use, singular points raise DomainError.
ExprMatrix inverse(const ExprMatrix& m);
Expr trace(const ExprMatrix& m);

/// Differentiators for every chart variable, sharing memo tables across
/// calls so that derivatives of related expressions share structure.
class DiffCache {
public:
    Expr operator()(const Expr& e, Var v);

private:
    std::vector<Differentiator> q_;
    std::vector<Differentiator> u_;
};

/// Elementwise partial derivative.
ExprMatrix diff(const ExprMatrix& m, Var v);

/// Batch-compiled matrix of expressions.
class CompiledMatrix {
public:
    CompiledMatrix() = default;
    explicit CompiledMatrix(const ExprMatrix& m);

    [[nodiscard]] Eigen::MatrixXd operator()(const Point& p) const;
    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }

private:
    Tape tape_;
    int rows_ = 0;
    int cols_ = 0;
};

Eigen::MatrixXd evaluate(const ExprMatrix& m, const Point& p);

}  // namespace tbpn
