#include "tbpn/suites.hpp"

#include "tbpn/smalllin.hpp"

namespace tbpn {

namespace {

bool gSymmetric(Workspace& ws) {
    const Residual r = pairResidual(flatten(ws.J()), flatten(ws.Jbar()));
    return maxOver(ws.samples().points, r).value <= ws.tolerance();
}

}  // namespace

std::vector<CheckResult> torsionSuite(Workspace& ws) {
    const Connection& c = ws.conn();
    const int n = c.n;
    const Chart total = c.totalChart();
    DiffCache& dc = c.cache();
    const ExprMatrix& J = ws.J();
    std::vector<CheckResult> out;

    const TensorField& NJ = ws.nijenhuisJ();
    out.push_back(ws.run("torsion/N_J", "NJ", absResidual(flatten(NJ))));

    const TensorField NR = nijenhuis(total, ws.R(), dc);
    out.push_back(ws.run("torsion/N_R", "NR<=>NJ", absResidual(flatten(NR)), 1.0, 0.01));

    {
        const TensorField FRR = fnBracket(total, ws.R(), ws.R(), dc);
        std::vector<Expr> twice;
        for (const Expr& e : NR.comps) twice.push_back(Expr(2.0) * e);
        out.push_back(ws.run("torsion/FN(R,R)", "FN-bracket", pairResidual(flatten(FRR), twice)));
    }

    {
        // A(X,Y) = D^H_{JX}J(Y) - J(D^H_X J(Y)); N_J(X,Y) = A(X,Y) - A(Y,X)
        const TensorField& dJ = ws.dhJ();
        auto A = [&](int m, int x, int y) {
            Expr acc(0.0);
            for (int k = 0; k < n; ++k) acc = acc + dJ({m, y, k}) * J(k, x) - J(m, k) * dJ({k, y, x});
            return acc;
        };
        std::vector<Expr> anti, nj;
        for (int m = 0; m < n; ++m)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    anti.push_back(A(m, x, y) - A(m, y, x));
                    nj.push_back(NJ({m, x, y}));
                }
        out.push_back(ws.run("torsion/NJzero", "NJzero", absResidual(anti)));
        out.push_back(ws.run("torsion/NJzero-identity", "NJzero", pairResidual(anti, nj)));
    }

    const ExprMatrix P = adaptedFrame(c);
    const ExprMatrix Pinv = adaptedFrameInverse(c);

    if (gSymmetric(ws)) {
        const TensorField F = fnBracket(total, ws.R(), ws.S(), dc);
        const TensorField& dJ = ws.dhJ();
        std::vector<Expr> lhs, rhs;
        for (int A = 0; A < 2 * n; ++A)
            for (int B = 0; B < 2 * n; ++B) {
                ExprVector v = zeroVector(2 * n);
                for (int k = 0; k < 2 * n; ++k) {
                    Expr acc(0.0);
                    for (int a = 0; a < 2 * n; ++a)
                        for (int b = 0; b < 2 * n; ++b) {
                            if (P(a, A).isZero() || P(b, B).isZero()) continue;
                            acc = acc + P(a, A) * P(b, B) * F({k, a, b});
                        }
                    v(k) = acc;
                }
                const ExprVector framed = Pinv * v;
                for (int k = 0; k < 2 * n; ++k) {
                    lhs.push_back(framed(k));
                    Expr expect(0.0);
                    if (A < n && B < n && k >= n) {
                        const int m = k - n, x = A, y = B;
                        expect = c.d(ws.U()(m, y), Var::u(x)) - c.d(ws.U()(m, x), Var::u(y)) - (dJ({m, y, x}) - dJ({m, x, y}));
                    }
                    rhs.push_back(expect);
                }
            }
        out.push_back(ws.run("torsion/[R,S]", "[R,S]<=>dvU=dhJ", pairResidual(lhs, rhs)));
    } else {
        out.push_back(Workspace::notApplicable("torsion/[R,S]", "[R,S]<=>dvU=dhJ", "J is not g-symmetric"));
    }

    const ExprMatrix& LR = ws.lieGammaR();
    {
        const ExprMatrix framed = Pinv * LR * P;
        const ExprMatrix nJ = ws.nablaJ().matrix();
        const ExprMatrix nJbar = c.nabla(TensorField::fromMatrix(Space::Along, ws.Jbar(), 1, 1)).matrix();
        const ExprMatrix nU = c.nabla(TensorField::fromMatrix(Space::Along, ws.U(), 1, 1)).matrix();
        const ExprMatrix& U = ws.U();
        const ExprMatrix& Jb = ws.Jbar();
        std::vector<Expr> lv, rv, lh, rh;
        const ExprMatrix topV = J - Jb, botV = U + nJbar;
        const ExprMatrix topH = nJ - U, botH = nU + c.phi * J - Jb * c.phi;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                lv.push_back(framed(i, n + j));
                rv.push_back(topV(i, j));
                lv.push_back(framed(n + i, n + j));
                rv.push_back(botV(i, j));
                lh.push_back(framed(i, j));
                rh.push_back(topH(i, j));
                lh.push_back(framed(n + i, j));
                rh.push_back(botH(i, j));
            }
        out.push_back(ws.run("torsion/lgamR-V", "lgamR1", pairResidual(lv, rv)));
        out.push_back(ws.run("torsion/lgamR-H", "lgamR2", pairResidual(lh, rh)));

        auto lr = std::make_shared<CompiledMatrix>(LR);
        auto cJ = std::make_shared<CompiledMatrix>(J), cJb = std::make_shared<CompiledMatrix>(Jb);
        auto cU = std::make_shared<CompiledMatrix>(U), cnJ = std::make_shared<CompiledMatrix>(nJ);
        auto comm = std::make_shared<CompiledMatrix>(ExprMatrix(c.phi * J - J * c.phi));
        const double tol = ws.tolerance();
        out.push_back(ws.run("torsion/LgammaR=0<=>", "LgammaR=0", equivalence([=](const Point& p) {
                                 auto size = [](const Eigen::MatrixXd& m) { return lin::maxAbs(m) / (1.0 + lin::maxAbs(m)); };
                                 const double b = std::max({lin::maxScaledDiff((*cJ)(p), (*cJb)(p)), size((*cU)(p)),
                                                            size((*cnJ)(p)), size((*comm)(p))});
                                 return std::make_pair(size((*lr)(p)), b);
                             }, tol)));
    }

    {
        const Form lhs = interior(LR, ws.forms().omegaL);
        const Form ddR = extDeriv(total, derivationOf(total, ws.R(), c.E, dc), dc);
        out.push_back(ws.run("torsion/propCST", "propCST", zeroResidual(flatten(lhs + Expr(2.0) * ddR))));
    }

    if (!ws.riemannian()) {
        out.push_back(Workspace::notApplicable("torsion/dvU", "dvU", "riemannian mode only"));
        out.push_back(Workspace::notApplicable("torsion/dhU", "dhU", "riemannian mode only"));
        return out;
    }

    {
        const TensorField& dJ = ws.dhJ();
        const TensorField dvU = c.dv(TensorField::fromMatrix(Space::Along, ws.U(), 1, 1));  // (m, x, z)
        const TensorField dhU = c.dh(TensorField::fromMatrix(Space::Along, ws.U(), 1, 1));
        const TensorField ddJ = c.dh(dJ);  // (m, y, x, z) = D^H D^H J(Z, X, Y)
        const ExprVector gu = c.g * c.T();
        std::vector<Expr> lv, rv, lh, rh;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    Expr a(0.0), b(0.0), e(0.0), f(0.0);
                    for (int m = 0; m < n; ++m) {
                        a = a + c.g(y, m) * dvU({m, x, z});
                        b = b + c.g(z, m) * (dJ({m, y, x}) - dJ({m, x, y}));
                        e = e + c.g(y, m) * dhU({m, x, z});
                        f = f + gu(m) * (ddJ({m, y, x, z}) - ddJ({m, x, y, z}));
                    }
                    lv.push_back(a);
                    rv.push_back(b);
                    lh.push_back(e);
                    rh.push_back(f);
                }
        out.push_back(ws.run("torsion/dvU", "dvU", pairResidual(lv, rv), 10.0));
        out.push_back(ws.run("torsion/dhU", "dhU", pairResidual(lh, rh), 10.0));
    }
    return out;
}

}  // namespace tbpn
