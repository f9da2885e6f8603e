#include "tbpn/tensor_calc.hpp"

#include <algorithm>
#include <stdexcept>

namespace tbpn {

namespace {

std::vector<std::vector<int>> combinations(int dim, int degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(degree));
    auto rec = [&](auto&& self, int pos, int start) -> void {
        if (pos == degree) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < dim; ++i) {
            cur[static_cast<std::size_t>(pos)] = i;
            self(self, pos + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

const std::vector<std::vector<int>>& cachedCombinations(int dim, int degree) {
    // dim <= 8 and degree <= 3 in practice; built once, read-only afterwards
    static const auto table = [] {
        std::vector<std::vector<std::vector<std::vector<int>>>> t(9);
        for (int d = 0; d <= 8; ++d)
            for (int p = 0; p <= 4; ++p) t[static_cast<std::size_t>(d)].push_back(combinations(d, p));
        return t;
    }();
    if (dim < 0 || dim > 8 || degree < 0 || degree > 4) throw std::out_of_range("Form: unsupported dimension/degree");
    return table[static_cast<std::size_t>(dim)][static_cast<std::size_t>(degree)];
}

}  // namespace

Form Form::zero(int dim, int degree) {
    Form f;
    f.dim_ = dim;
    f.degree_ = degree;
    f.comps_.assign(cachedCombinations(dim, degree).size(), Expr(0.0));
    return f;
}

Form Form::oneForm(const ExprVector& components) {
    Form f = zero(static_cast<int>(components.size()), 1);
    for (int i = 0; i < f.dim_; ++i) f.comps_[static_cast<std::size_t>(i)] = components(i);
    return f;
}

Form Form::twoForm(const ExprMatrix& m) {
    Form f = zero(static_cast<int>(m.rows()), 2);
    for (std::size_t k = 0; k < f.comps_.size(); ++k) {
        const auto& t = f.tuples()[k];
        f.comps_[k] = m(t[0], t[1]);
    }
    return f;
}

const std::vector<std::vector<int>>& Form::tuples() const { return cachedCombinations(dim_, degree_); }

std::size_t Form::slot(const std::vector<int>& increasing) const {
    const auto& t = tuples();
    const auto it = std::lower_bound(t.begin(), t.end(), increasing);
    if (it == t.end() || *it != increasing) throw std::out_of_range("Form: index tuple is not strictly increasing");
    return static_cast<std::size_t>(it - t.begin());
}

Expr Form::get(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw std::out_of_range("Form::get: wrong number of indices");
    std::vector<int> s = idx;
    int sign = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
            if (s[j] > s[j + 1]) {
                std::swap(s[j], s[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == s[i + 1]) return Expr(0.0);
    const Expr& c = comps_[slot(s)];
    return sign > 0 ? c : -c;
}

void Form::set(const std::vector<int>& increasing, const Expr& value) { comps_[slot(increasing)] = value; }

ExprVector Form::vector() const {
    if (degree_ != 1) throw std::logic_error("Form::vector on degree " + std::to_string(degree_));
    ExprVector v(dim_);
    for (int i = 0; i < dim_; ++i) v(i) = comps_[static_cast<std::size_t>(i)];
    return v;
}

ExprMatrix Form::matrix() const {
    if (degree_ != 2) throw std::logic_error("Form::matrix on degree " + std::to_string(degree_));
    ExprMatrix m = zeroMatrix(dim_, dim_);
    for (std::size_t k = 0; k < comps_.size(); ++k) {
        const auto& t = tuples()[k];
        m(t[0], t[1]) = comps_[k];
        m(t[1], t[0]) = -comps_[k];
    }
    return m;
}

Form operator+(const Form& a, const Form& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree()) throw std::invalid_argument("Form +: mismatch");
    Form r = Form::zero(a.dim(), a.degree());
    for (std::size_t k = 0; k < a.components().size(); ++k) r.set(a.tuples()[k], a.components()[k] + b.components()[k]);
    return r;
}

Form operator-(const Form& a, const Form& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree()) throw std::invalid_argument("Form -: mismatch");
    Form r = Form::zero(a.dim(), a.degree());
    for (std::size_t k = 0; k < a.components().size(); ++k) r.set(a.tuples()[k], a.components()[k] - b.components()[k]);
    return r;
}

Form operator*(const Expr& s, const Form& a) {
    Form r = Form::zero(a.dim(), a.degree());
    for (std::size_t k = 0; k < a.components().size(); ++k) r.set(a.tuples()[k], s * a.components()[k]);
    return r;
}

Form extDeriv(const Chart& chart, const Expr& scalar, DiffCache& d) {
    ExprVector v(chart.dim());
    for (int a = 0; a < chart.dim(); ++a) v(a) = d(scalar, chart.var(a));
    return Form::oneForm(v);
}

Form extDeriv(const Chart& chart, const Form& form, DiffCache& d) {
    if (form.dim() != chart.dim()) throw std::invalid_argument("extDeriv: chart/form dimension mismatch");
    const int p = form.degree();
    Form out = Form::zero(form.dim(), p + 1);
    for (const auto& t : out.tuples()) {
        Expr acc(0.0);
        for (int k = 0; k <= p; ++k) {
            std::vector<int> rest;
            for (int j = 0; j <= p; ++j)
                if (j != k) rest.push_back(t[static_cast<std::size_t>(j)]);
            const Expr term = d(form.get(rest), chart.var(t[static_cast<std::size_t>(k)]));
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        out.set(t, acc);
    }
    return out;
}

Form interior(const ExprMatrix& A, const Form& form) {
    const int p = form.degree();
    Form out = Form::zero(form.dim(), p);
    if (p == 0) return out;
    for (const auto& t : out.tuples()) {
        Expr acc(0.0);
        for (int k = 0; k < p; ++k) {
            std::vector<int> idx = t;
            for (int m = 0; m < form.dim(); ++m) {
                const Expr& a = A(m, t[static_cast<std::size_t>(k)]);
                if (a.isZero()) continue;
                idx[static_cast<std::size_t>(k)] = m;
                acc = acc + a * form.get(idx);
            }
        }
        out.set(t, acc);
    }
    return out;
}

Form contract(const ExprVector& X, const Form& form) {
    const int p = form.degree();
    if (p == 0) throw std::invalid_argument("contract: cannot contract a 0-form");
    Form out = Form::zero(form.dim(), p - 1);
    for (const auto& t : out.tuples()) {
        Expr acc(0.0);
        std::vector<int> idx(1, 0);
        idx.insert(idx.end(), t.begin(), t.end());
        for (int m = 0; m < form.dim(); ++m) {
            if (X(m).isZero()) continue;
            idx[0] = m;
            acc = acc + X(m) * form.get(idx);
        }
        out.set(t, acc);
    }
    return out;
}

Form derivationOf(const Chart& chart, const ExprMatrix& A, const Form& form, DiffCache& d) {
    return interior(A, extDeriv(chart, form, d)) - extDeriv(chart, interior(A, form), d);
}

Form derivationOf(const Chart& chart, const ExprMatrix& A, const Expr& scalar, DiffCache& d) {
    return interior(A, extDeriv(chart, scalar, d));
}

Form wedge(const Form& a, const Form& b) {
    if (a.degree() != 1 || b.degree() != 1) throw std::invalid_argument("wedge: only 1-forms supported");
    Form out = Form::zero(a.dim(), 2);
    for (const auto& t : out.tuples())
        out.set(t, a.get({t[0]}) * b.get({t[1]}) - a.get({t[1]}) * b.get({t[0]}));
    return out;
}

Expr directional(const Chart& chart, const ExprVector& V, const Expr& F, DiffCache& d) {
    Expr acc(0.0);
    for (int a = 0; a < chart.dim(); ++a)
        if (!V(a).isZero()) acc = acc + V(a) * d(F, chart.var(a));
    return acc;
}

ExprVector bracket(const Chart& chart, const ExprVector& a, const ExprVector& b, DiffCache& d) {
    ExprVector out(chart.dim());
    for (int k = 0; k < chart.dim(); ++k) out(k) = directional(chart, a, b(k), d) - directional(chart, b, a(k), d);
    return out;
}

namespace {

// partials[m](k, j) = d_m A^k_j
std::vector<ExprMatrix> partials(const Chart& chart, const ExprMatrix& A, DiffCache& d) {
    std::vector<ExprMatrix> out;
    for (int m = 0; m < chart.dim(); ++m) {
        ExprMatrix dm(A.rows(), A.cols());
        for (Eigen::Index i = 0; i < A.size(); ++i) dm(i) = d(A(i), chart.var(m));
        out.push_back(std::move(dm));
    }
    return out;
}

}  // namespace

TensorField nijenhuis(const Chart& chart, const ExprMatrix& A, DiffCache& d) {
    const int m = chart.dim();
    const auto dA = partials(chart, A, d);
    TensorField N = TensorField::zero(chart.space, m, 1, 2);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                Expr acc(0.0);
                for (int p = 0; p < m; ++p) {
                    acc = acc + A(p, i) * dA[p](k, j) - A(p, j) * dA[p](k, i);
                    acc = acc - A(k, p) * (dA[i](p, j) - dA[j](p, i));
                }
                N({k, i, j}) = acc;
                N({k, j, i}) = -acc;
            }
    return N;
}

TensorField fnBracket(const Chart& chart, const ExprMatrix& A, const ExprMatrix& B, DiffCache& d) {
    const int m = chart.dim();
    const auto dA = partials(chart, A, d);
    const auto dB = partials(chart, B, d);
    TensorField F = TensorField::zero(chart.space, m, 1, 2);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                Expr acc(0.0);
                for (int p = 0; p < m; ++p) {
                    // [A d_i, B d_j] + [B d_i, A d_j]
                    acc = acc + A(p, i) * dB[p](k, j) - B(p, j) * dA[p](k, i);
                    acc = acc + B(p, i) * dA[p](k, j) - A(p, j) * dB[p](k, i);
                    // - A([B d_i, d_j] + [d_i, B d_j]) - B([A d_i, d_j] + [d_i, A d_j])
                    acc = acc - A(k, p) * (dB[i](p, j) - dB[j](p, i));
                    acc = acc - B(k, p) * (dA[i](p, j) - dA[j](p, i));
                }
                F({k, i, j}) = acc;
            }
    return F;
}

TensorField haantjesFromTorsion(const ExprMatrix& A, const TensorField& N) {
    const int m = N.dim;
    const ExprMatrix A2 = A * A;
    TensorField H = TensorField::zero(N.space, m, 1, 2);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                Expr acc(0.0);
                for (int p = 0; p < m; ++p) {
                    acc = acc + A2(k, p) * N({p, i, j});
                    for (int r = 0; r < m; ++r) {
                        acc = acc + N({k, p, r}) * A(p, i) * A(r, j);
                        acc = acc - A(k, p) * N({p, r, j}) * A(r, i);
                        acc = acc - A(k, p) * N({p, i, r}) * A(r, j);
                    }
                }
                H({k, i, j}) = acc;
            }
    return H;
}

TensorField haantjes(const Chart& chart, const ExprMatrix& A, DiffCache& d) {
    return haantjesFromTorsion(A, nijenhuis(chart, A, d));
}

ExprMatrix lieDerivative(const Chart& chart, const ExprVector& V, const ExprMatrix& A, DiffCache& d) {
    const int m = chart.dim();
    ExprMatrix out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Expr acc = directional(chart, V, A(i, j), d);
            for (int p = 0; p < m; ++p) {
                if (!A(p, j).isZero()) acc = acc - A(p, j) * d(V(i), chart.var(p));
                if (!A(i, p).isZero()) acc = acc + A(i, p) * d(V(p), chart.var(j));
            }
            out(i, j) = acc;
        }
    return out;
}

}  // namespace tbpn
