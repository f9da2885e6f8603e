#include "tbpn/connection.hpp"

#include <functional>

namespace tbpn {

namespace {

// Adds the connection terms of a covariant derivative: for every slot s of t,
// +c * t(..m..) if s is contravariant, -c * t(..m..) if covariant. `coeff`
// receives the slot, free*n + m, and the full output index.
void addIndexTerms(TensorField& out, const TensorField& t, int extraDown,
                   const std::function<Expr(int, int, const std::vector<int>&)>& coeff) {
    const int n = t.dim;
    forEachIndex(n, t.rank() + extraDown, [&](const std::vector<int>& full) {
        std::vector<int> idx(full.begin(), full.begin() + t.rank());
        Expr acc = out.comps[out.offset(full)];
        for (int s = 0; s < t.rank(); ++s) {
            const int free = idx[static_cast<std::size_t>(s)];
            std::vector<int> moved = idx;
            for (int m = 0; m < n; ++m) {
                moved[static_cast<std::size_t>(s)] = m;
                const Expr& tm = t.comps[t.offset(moved)];
                if (tm.isZero()) continue;
                const Expr c = coeff(s, free * n + m, full);
                if (c.isZero()) continue;
                acc = (s < t.up) ? acc + c * tm : acc - c * tm;
            }
        }
        out.comps[out.offset(full)] = acc;
    });
}

}  // namespace

Connection::Connection(const Scenario& s)
    : n(s.n), mode(s.mode), L(s.lagrangian), cache_(std::make_shared<DiffCache>()) {
    DiffCache& dc = *cache_;

    ExprVector Lu(n);
    for (int i = 0; i < n; ++i) Lu(i) = dc(L, Var::u(i));
    E = -L;
    for (int i = 0; i < n; ++i) E = E + Expr::u(i) * Lu(i);

    g = s.mode == Mode::Riemannian ? s.metric : hessianMetric(s).matrix();
    detG = determinant(g);
    if (detG.isZero()) throw SingularHessianError("scenario '" + s.name + "': Hessian of L is identically singular");
    gInv = inverse(g);

    ExprVector rhs(n);
    for (int i = 0; i < n; ++i) {
        Expr r = dc(L, Var::q(i));
        for (int k = 0; k < n; ++k) r = r - dc(Lu(i), Var::q(k)) * Expr::u(k);
        rhs(i) = r;
    }
    forces = gInv * rhs;

    conn = zeroMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) conn(i, j) = Expr(-0.5) * dc(forces(i), Var::u(j));

    berwald = TensorField::zero(Space::Along, n, 1, 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) berwald({i, j, k}) = dc(conn(i, j), Var::u(k));

    curvature = TensorField::zero(Space::Along, n, 1, 2);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Expr r = horizontal(j, conn(m, i)) - horizontal(i, conn(m, j));
                curvature({m, i, j}) = r;
                curvature({m, j, i}) = -r;
            }

    // [Gamma, H_j] decomposed in the adapted frame (H_i, V_i).
    const Chart chart = totalChart();
    const ExprVector gamma = spray();
    nablaCoeff = zeroMatrix(n, n);
    phi = zeroMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const ExprVector br = bracket(chart, gamma, horizontalLift(j), dc);
        for (int i = 0; i < n; ++i) {
            nablaCoeff(i, j) = br(i);
            Expr eta = br(n + i);
            for (int k = 0; k < n; ++k) eta = eta + conn(i, k) * br(k);
            phi(i, j) = eta;
        }
    }

    if (mode == Mode::Riemannian) {
        christoffel = TensorField::zero(Space::Base, n, 1, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = j; k < n; ++k) {
                    Expr acc(0.0);
                    for (int l = 0; l < n; ++l) {
                        if (gInv(i, l).isZero()) continue;
                        const Expr inner = dc(g(l, k), Var::q(j)) + dc(g(l, j), Var::q(k)) - dc(g(j, k), Var::q(l));
                        acc = acc + gInv(i, l) * inner;
                    }
                    acc = Expr(0.5) * acc;
                    christoffel({i, j, k}) = acc;
                    christoffel({i, k, j}) = acc;
                }
        riemann = TensorField::zero(Space::Base, n, 1, 3);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                for (int j = 0; j < n; ++j)
                    for (int k = j + 1; k < n; ++k) {
                        Expr r = dc(christoffel({i, k, l}), Var::q(j)) - dc(christoffel({i, j, l}), Var::q(k));
                        for (int p = 0; p < n; ++p)
                            r = r + christoffel({i, j, p}) * christoffel({p, k, l}) -
                                christoffel({i, k, p}) * christoffel({p, j, l});
                        riemann({i, l, j, k}) = r;
                        riemann({i, l, k, j}) = -r;
                    }
    }
}

ExprVector Connection::spray() const {
    ExprVector v(2 * n);
    for (int i = 0; i < n; ++i) {
        v(i) = Expr::u(i);
        v(n + i) = forces(i);
    }
    return v;
}

ExprVector Connection::horizontalLift(int k) const {
    ExprVector v = zeroVector(2 * n);
    v(k) = Expr(1.0);
    for (int m = 0; m < n; ++m) v(n + m) = -conn(m, k);
    return v;
}

ExprVector Connection::T() const {
    ExprVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Expr::u(i);
    return v;
}

Expr Connection::horizontal(int k, const Expr& F) const {
    Expr acc = d(F, Var::q(k));
    for (int m = 0; m < n; ++m)
        if (!conn(m, k).isZero()) acc = acc - conn(m, k) * d(F, Var::u(m));
    return acc;
}

Expr Connection::gammaOf(const Expr& F) const {
    Expr acc(0.0);
    for (int i = 0; i < n; ++i) {
        acc = acc + Expr::u(i) * d(F, Var::q(i));
        if (!forces(i).isZero()) acc = acc + forces(i) * d(F, Var::u(i));
    }
    return acc;
}

TensorField Connection::nabla(const TensorField& t) const {
    TensorField out = TensorField::zero(Space::Along, t.dim, t.up, t.down);
    for (std::size_t c = 0; c < t.comps.size(); ++c) out.comps[c] = gammaOf(t.comps[c]);
    addIndexTerms(out, t, 0, [&](int slot, int pair, const std::vector<int>&) {
        const int free = pair / n, m = pair % n;
        return slot < t.up ? nablaCoeff(free, m) : nablaCoeff(m, free);
    });
    return out;
}

TensorField Connection::dh(const TensorField& t) const {
    TensorField out = TensorField::zero(Space::Along, t.dim, t.up, t.down + 1);
    forEachIndex(n, t.rank() + 1, [&](const std::vector<int>& full) {
        std::vector<int> idx(full.begin(), full.end() - 1);
        out.comps[out.offset(full)] = horizontal(full.back(), t.comps[t.offset(idx)]);
    });
    addIndexTerms(out, t, 1, [&](int slot, int pair, const std::vector<int>& full) {
        const int free = pair / n, m = pair % n, k = full.back();
        return slot < t.up ? berwald({free, k, m}) : berwald({m, k, free});
    });
    return out;
}

TensorField Connection::dv(const TensorField& t) const {
    TensorField out = TensorField::zero(Space::Along, t.dim, t.up, t.down + 1);
    forEachIndex(n, t.rank() + 1, [&](const std::vector<int>& full) {
        std::vector<int> idx(full.begin(), full.end() - 1);
        out.comps[out.offset(full)] = d(t.comps[t.offset(idx)], Var::u(full.back()));
    });
    return out;
}

TensorField contractLast(const TensorField& t, const ExprVector& X) {
    if (t.down < 1) throw std::invalid_argument("contractLast: no covariant slot");
    TensorField out = TensorField::zero(t.space, t.dim, t.up, t.down - 1);
    forEachIndex(t.dim, t.rank() - 1, [&](const std::vector<int>& idx) {
        std::vector<int> full = idx;
        full.push_back(0);
        Expr acc(0.0);
        for (int k = 0; k < t.dim; ++k) {
            if (X(k).isZero()) continue;
            full.back() = k;
            acc = acc + X(k) * t.comps[t.offset(full)];
        }
        out.comps[out.offset(idx)] = acc;
    });
    return out;
}

}  // namespace tbpn
