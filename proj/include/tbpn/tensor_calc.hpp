#pragma once

// Coordinate tensor calculus on a chart of dimension m: m = n on the base
// (coordinates q) or m = 2n on the tangent bundle (coordinates (q, u)).
//
// Conventions: a (1,1) tensor A is a matrix with A(k, j) = A^k_j, acting on
// vector components by matrix-vector product. Vector-valued 2-forms are
// (1,2) TensorFields with components T(k, i, j) = T^k_{ij}.

#include "tbpn/tensor.hpp"

namespace tbpn {

struct Chart {
    int n = 0;
    Space space = Space::Total;

    [[nodiscard]] int dim() const { return space == Space::Total ? 2 * n : n; }
    /// Coordinate of chart index a: q^a for a < n, u^(a-n) otherwise.
    [[nodiscard]] Var var(int a) const { return a < n ? Var::q(a) : Var::u(a - n); }
};

/// Differential form stored by its independent components (strictly
/// increasing index tuples, lexicographic order).
class Form {
public:
    Form() = default;
    static Form zero(int dim, int degree);
    static Form oneForm(const ExprVector& components);
    /// Takes the strict upper triangle of an antisymmetric matrix.
    static Form twoForm(const ExprMatrix& antisymmetric);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] const std::vector<Expr>& components() const { return comps_; }
    [[nodiscard]] const std::vector<std::vector<int>>& tuples() const;

    /// Component on arbitrary indices, with the sign of the sorting
    /// permutation; repeated indices give zero.
    [[nodiscard]] Expr get(const std::vector<int>& idx) const;
    void set(const std::vector<int>& increasing, const Expr& value);

    /// Degree-1 forms as a vector; degree-2 forms as a full antisymmetric matrix.
    [[nodiscard]] ExprVector vector() const;
    [[nodiscard]] ExprMatrix matrix() const;

private:
    [[nodiscard]] std::size_t slot(const std::vector<int>& increasing) const;
    int dim_ = 0;
    int degree_ = 0;
    std::vector<Expr> comps_;
};

Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator*(const Expr& s, const Form& a);

/// Exterior derivative of a 0-form (scalar) as a 1-form.
Form extDeriv(const Chart& chart, const Expr& scalar, DiffCache& d);
/// Exterior derivative of a p-form, p in {0,1,2}.
Form extDeriv(const Chart& chart, const Form& form, DiffCache& d);

/// Interior product of a (1,1) tensor into a form:
/// (i_A a)(X_1..X_p) = sum_k a(X_1,..,A X_k,..,X_p).
Form interior(const ExprMatrix& A, const Form& form);
/// Contraction i_X a of a vector into a form.
Form contract(const ExprVector& X, const Form& form);
/// d_A = i_A d - d i_A on forms (on functions, d_A F = dF o A).
Form derivationOf(const Chart& chart, const ExprMatrix& A, const Form& form, DiffCache& d);
Form derivationOf(const Chart& chart, const ExprMatrix& A, const Expr& scalar, DiffCache& d);
/// Wedge product of two 1-forms.
Form wedge(const Form& a, const Form& b);

/// Lie bracket of vector fields.
ExprVector bracket(const Chart& chart, const ExprVector& a, const ExprVector& b, DiffCache& d);

/// Nijenhuis torsion N^k_{ij} = A^m_i d_m A^k_j - A^m_j d_m A^k_i - A^k_m (d_i A^m_j - d_j A^m_i).
TensorField nijenhuis(const Chart& chart, const ExprMatrix& A, DiffCache& d);
/// Froelicher-Nijenhuis bracket [A,B] of two (1,1) tensors on coordinate fields.
TensorField fnBracket(const Chart& chart, const ExprMatrix& A, const ExprMatrix& B, DiffCache& d);
/// Haantjes tensor A^2 N(X,Y) + N(AX,AY) - A N(AX,Y) - A N(X,AY).
TensorField haantjes(const Chart& chart, const ExprMatrix& A, DiffCache& d);
/// Haantjes tensor assembled from a precomputed torsion.
TensorField haantjesFromTorsion(const ExprMatrix& A, const TensorField& torsion);
/// (L_V A)^i_j = V^m d_m A^i_j - A^m_j d_m V^i + A^i_m d_j V^m.
ExprMatrix lieDerivative(const Chart& chart, const ExprVector& V, const ExprMatrix& A, DiffCache& d);

/// Directional derivative V^a d_a F.
Expr directional(const Chart& chart, const ExprVector& V, const Expr& F, DiffCache& d);

}  // namespace tbpn
