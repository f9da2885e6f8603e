#include "tbpn/symbolic.hpp"

#include <stdexcept>

namespace tbpn {

ExprMatrix zeroMatrix(int rows, int cols) { return ExprMatrix::Constant(rows, cols, Expr(0.0)); }

ExprMatrix identityMatrix(int n) {
    ExprMatrix m = zeroMatrix(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Expr(1.0);
    return m;
}

ExprVector zeroVector(int n) { return ExprVector::Constant(n, Expr(0.0)); }

namespace {

ExprMatrix minor(const ExprMatrix& m, int row, int col) {
    const int n = static_cast<int>(m.rows());
    ExprMatrix out(n - 1, n - 1);
    for (int i = 0, r = 0; i < n; ++i) {
        if (i == row) continue;
        for (int j = 0, c = 0; j < n; ++j) {
            if (j == col) continue;
            out(r, c++) = m(i, j);
        }
        ++r;
    }
    return out;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const int n = static_cast<int>(m.rows());
    if (n == 0) return Expr(1.0);
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Expr det(0.0);
    for (int j = 0; j < n; ++j) {
        if (m(0, j).isZero()) continue;
        const Expr term = m(0, j) * determinant(minor(m, 0, j));
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

ExprMatrix adjugate(const ExprMatrix& m) {
    const int n = static_cast<int>(m.rows());
    ExprMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = Expr(1.0);
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Expr c = determinant(minor(m, i, j));
            adj(j, i) = ((i + j) % 2 == 0) ? c : -c;
        }
    return adj;
}

ExprMatrix inverse(const ExprMatrix& m) {
    const Expr det = determinant(m);
    ExprMatrix adj = adjugate(m);
    for (Eigen::Index i = 0; i < adj.size(); ++i) adj(i) = adj(i) / det;
    return adj;
}

Expr trace(const ExprMatrix& m) {
    Expr t(0.0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) t = t + m(i, i);
    return t;
}

Expr DiffCache::operator()(const Expr& e, Var v) {
    auto& bank = v.kind == VarKind::Base ? q_ : u_;
    while (static_cast<int>(bank.size()) <= v.index)
        bank.emplace_back(Var{v.kind, static_cast<int>(bank.size())});
    return bank[static_cast<std::size_t>(v.index)](e);
}

ExprMatrix diff(const ExprMatrix& m, Var v) {
    Differentiator d(v);
    ExprMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.size(); ++i) out(i) = d(m(i));
    return out;
}

CompiledMatrix::CompiledMatrix(const ExprMatrix& m) : rows_(static_cast<int>(m.rows())), cols_(static_cast<int>(m.cols())) {
    std::vector<Expr> flat(m.data(), m.data() + m.size());
    tape_ = Tape(flat);
}

Eigen::MatrixXd CompiledMatrix::operator()(const Point& p) const {
    Eigen::MatrixXd out(rows_, cols_);
    std::vector<double> work;
    tape_.evaluate(p, work, std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

Eigen::MatrixXd evaluate(const ExprMatrix& m, const Point& p) { return CompiledMatrix(m)(p); }

}  // namespace tbpn
