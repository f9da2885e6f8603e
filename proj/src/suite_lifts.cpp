#include "tbpn/suites.hpp"

#include "tbpn/smalllin.hpp"

namespace tbpn {

namespace {

ExprVector unit(int n, int k) {
    ExprVector e = zeroVector(n);
    e(k) = Expr(1.0);
    return e;
}

}  // namespace

std::vector<CheckResult> liftsSuite(Workspace& ws) {
    const Connection& c = ws.conn();
    const int n = c.n;
    const Chart total = c.totalChart();
    DiffCache& dc = c.cache();
    std::vector<CheckResult> out;

    const ExprMatrix JcS = ws.Jc() * ws.S();
    out.push_back(ws.run("lifts/JcS-square", "JcS-nilpotent", zeroResidual(flatten(ExprMatrix(JcS * JcS)))));
    out.push_back(ws.run("lifts/N_JcS", "JcS-nilpotent", zeroResidual(flatten(nijenhuis(total, JcS, dc)))));
    out.push_back(ws.run("lifts/[Jc,S]", "JcS", zeroResidual(flatten(fnBracket(total, ws.Jc(), ws.S(), dc)))));

    const PoincareCartan& pc = ws.forms();
    const ExprMatrix Om = pc.omegaL.matrix();
    const ExprMatrix Om1 = pc.omega1.matrix();
    {
        std::vector<Expr> l0, r0, l1, r1;
        const ExprMatrix gJ = c.g * ws.J();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const ExprVector H = c.horizontalLift(j);
                Expr a(0.0), b(0.0);
                for (int k = 0; k < 2 * n; ++k) {
                    a = a + Om(n + i, k) * H(k);
                    b = b + Om1(n + i, k) * H(k);
                }
                l0.push_back(a);
                r0.push_back(c.g(i, j));
                l1.push_back(b);
                r1.push_back(gJ(i, j));
            }
        out.push_back(ws.run("lifts/omegaL(XV,YH)", "gk2", pairResidual(l0, r0)));
        out.push_back(ws.run("lifts/omega1(XV,YH)", "omega1vh", pairResidual(l1, r1)));
    }

    out.push_back(ws.run("lifts/d-omegaL", "dd=0", zeroResidual(flatten(extDeriv(total, pc.omegaL, dc)))));
    out.push_back(ws.run("lifts/d-omega1", "dd=0", zeroResidual(flatten(extDeriv(total, pc.omega1, dc)))));

    {
        const Form a = derivationOf(total, ws.S(), derivationOf(total, ws.Jc(), c.L, dc), dc);
        const Form b = derivationOf(total, ws.Jc(), derivationOf(total, ws.S(), c.L, dc), dc);
        out.push_back(ws.run("lifts/dSdJc", "dSdJc", zeroResidual(flatten(a + b))));
    }

    const RSolver& rs = ws.rsolver();
    out.push_back(ws.run("lifts/Rsymmetry", "Rsymmetry", matrixResidual([&rs](const Point& p) {
                             const Eigen::MatrixXd R = rs(p);
                             const Eigen::MatrixXd W = rs.omegaL(p);
                             return std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(R.transpose() * W, W * R);
                         })));

    {
        auto P = std::make_shared<CompiledMatrix>(adaptedFrame(c));
        auto Pinv = std::make_shared<CompiledMatrix>(adaptedFrameInverse(c));
        ExprMatrix blocks = zeroMatrix(2 * n, 2 * n);
        blocks.topLeftCorner(n, n) = ws.J();
        blocks.bottomLeftCorner(n, n) = ws.U();
        blocks.bottomRightCorner(n, n) = ws.Jbar();
        auto B = std::make_shared<CompiledMatrix>(blocks);
        out.push_back(ws.run("lifts/R-frame", "Rvx,Rhx", matrixResidual([&rs, P, Pinv, B](const Point& p) {
                                 return std::pair<Eigen::MatrixXd, Eigen::MatrixXd>((*Pinv)(p) * rs(p) * (*P)(p), (*B)(p));
                             })));
    }

    {
        const ExprMatrix Ubar = c.gInv * ws.U().transpose() * c.g;
        out.push_back(ws.run("lifts/Ubar=-U", "Ubar", zeroResidual(flatten(ExprMatrix(Ubar + ws.U())))));
    }

    {
        auto closed = std::make_shared<CompiledMatrix>(closedFormR(c, ws.J(), ws.U()));
        out.push_back(ws.run("lifts/closed-form-R", "Rcoord1", matrixResidual([&rs, closed](const Point& p) {
                                 return std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(rs(p), (*closed)(p));
                             })));
        auto leg = std::make_shared<CompiledMatrix>(legendrePullbackR(c, ws.J()));
        out.push_back(ws.run("lifts/leg-pullback", "Rcoord2", matrixResidual([&rs, leg](const Point& p) {
                                 return std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(rs(p), (*leg)(p));
                             })));
    }

    {
        std::vector<Expr> lc, rc, lv, rv, lh, rh;
        const ExprMatrix nJ = ws.nablaJ().matrix();
        for (int k = 0; k < n; ++k) {
            const ExprVector X = unit(n, k);
            const ExprVector JX = ws.J() * X;
            const ExprVector a = ws.Jc() * completeLift(X), b = completeLift(JX);
            const ExprVector v1 = ws.Jc() * verticalLift(X), v2 = verticalLift(JX);
            const ExprVector h1 = ws.Jc() * horizontalLift(c, X);
            const ExprVector h2 = horizontalLift(c, JX) + verticalLift(ExprVector(nJ * X));
            for (int i = 0; i < 2 * n; ++i) {
                lc.push_back(a(i));
                rc.push_back(b(i));
                lv.push_back(v1(i));
                rv.push_back(v2(i));
                lh.push_back(h1(i));
                rh.push_back(h2(i));
            }
        }
        lc.insert(lc.end(), lv.begin(), lv.end());
        rc.insert(rc.end(), rv.begin(), rv.end());
        out.push_back(ws.run("lifts/defJc", "defJc", pairResidual(lc, rc)));
        out.push_back(ws.run("lifts/Jcxh", "Jcxh", pairResidual(lh, rh)));
    }

    {
        std::vector<ExprVector> fields;
        for (int k = 0; k < n; ++k) fields.push_back(unit(n, k));
        ExprVector rot(n);
        for (int i = 0; i < n; ++i) rot(i) = Expr::q((i + 1) % n);
        fields.push_back(rot);
        std::vector<Expr> l, r;
        const Chart base{n, Space::Base};
        for (const ExprVector& X : fields) {
            const ExprMatrix a = lieDerivative(total, completeLift(X), ws.Jc(), dc);
            const ExprMatrix b = completeLiftJ(lieDerivative(base, X, ws.J(), dc));
            const auto fa = flatten(a), fb = flatten(b);
            l.insert(l.end(), fa.begin(), fa.end());
            r.insert(r.end(), fb.begin(), fb.end());
        }
        out.push_back(ws.run("lifts/lieJc", "lieJc", pairResidual(l, r)));
    }

    {
        const double tol = ws.tolerance();
        auto Jc = std::make_shared<CompiledMatrix>(ws.Jc());
        auto J = std::make_shared<CompiledMatrix>(ws.J());
        auto Jb = std::make_shared<CompiledMatrix>(ws.Jbar());
        auto U = std::make_shared<CompiledMatrix>(ws.U());
        auto nJ = std::make_shared<CompiledMatrix>(ws.nablaJ().matrix());
        auto S = std::make_shared<CompiledMatrix>(ws.S());
        out.push_back(ws.run("lifts/R=Jc<=>", "R=Jc", equivalence([&rs, Jc, J, Jb, U, nJ](const Point& p) {
                                                         const double a = lin::maxScaledDiff(rs(p), (*Jc)(p));
                                                         const double b = std::max(lin::maxScaledDiff((*J)(p), (*Jb)(p)),
                                                                                   lin::maxScaledDiff((*U)(p), (*nJ)(p)));
                                                         return std::make_pair(a, b);
                                                     }, tol)));
        out.push_back(ws.run("lifts/RS=SR<=>", "RS=SR", equivalence([&rs, J, Jb, S](const Point& p) {
                                                          const Eigen::MatrixXd R = rs(p), Sm = (*S)(p);
                                                          return std::make_pair(lin::maxScaledDiff(R * Sm, Sm * R),
                                                                                lin::maxScaledDiff((*J)(p), (*Jb)(p)));
                                                      }, tol)));
    }

    if (!ws.riemannian()) {
        const std::string why = "riemannian mode only";
        out.push_back(Workspace::notApplicable("lifts/U-routes", "coordU", why));
        out.push_back(Workspace::notApplicable("lifts/newthetaL", "newthetaL", why));
        out.push_back(Workspace::notApplicable("lifts/dhL", "dhLzero", why));
        return out;
    }

    out.push_back(ws.run("lifts/U-routes", "coordU", pairResidual(flatten(computeU(c, ws.J())), flatten(ws.U()))));
    {
        const ExprVector gu = c.g * c.T();
        std::vector<Expr> l, r, dh;
        const TensorField theta = TensorField::covector(Space::Along, pc.theta.vector().head(n));
        for (int i = 0; i < n; ++i) {
            l.push_back(theta.comps[i]);
            r.push_back(gu(i));
            dh.push_back(c.horizontal(i, c.L));
        }
        for (const Expr& e : c.nabla(theta).comps) dh.push_back(e);
        out.push_back(ws.run("lifts/newthetaL", "newthetaL", pairResidual(l, r)));
        out.push_back(ws.run("lifts/dhL", "dhLzero", zeroResidual(dh)));
    }
    return out;
}

}  // namespace tbpn
